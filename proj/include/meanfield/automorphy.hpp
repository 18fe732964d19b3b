#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "meanfield/common.hpp"
#include "meanfield/measure.hpp"

namespace meanfield::automorphy {

/// Positive, locally integrable weight.
struct WeightFunction {
  std::function<double(double)> rho;
  std::string label;
};

/// m(q, rho) = int_{-q}^{q} rho(t) dt, adaptive quadrature, relative
/// tolerance 1e-8. Throws on a non-finite or non-positive sample.
double weighted_mass(double q, const WeightFunction& rho);

/// E||x(t)||^2 estimates on a grid, with optional Monte Carlo standard errors.
struct SecondMomentTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> mc_se;  // may be empty
};

/// (1/m(q,rho)) int_{-q}^{q} trace(t) rho(t) dt; trapezoid on the trace grid
/// (trace noise dominates quadrature error), exact under rho -> c rho.
double weighted_ergodic_mean(const SecondMomentTrace& trace, const WeightFunction& rho,
                             double q);

inline constexpr const char* kEvidenceDisclaimer =
    "diagnostic evidence over the supplied shift families only, not a proof";

struct RecurrenceReport {
  std::vector<double> shifts;
  std::vector<double> forward_errors;   // sup_t ||x(t+e_n) - xhat(t)||^2
  std::vector<double> backward_errors;  // sup_t ||xhat(t-e_n) - x(t)||^2
  std::vector<std::size_t> subsequence;
  double tol = 0.0;
  bool passed = false;
  bool unbounded_flag = false;
  std::string disclaimer = kEvidenceDisclaimer;
  std::string to_json() const;
};

/// Two-pass recurrence diagnostic mirroring the square-mean definition: the
/// candidate limit is the average of the last quartile of shifted curves,
/// then every shift is scored forward and backward against it. A path whose
/// per-shift sup grows steadily trips the unbounded flag instead.
RecurrenceReport aa_recurrence_test(
    const std::function<std::vector<double>(double)>& sampler,
    std::span<const double> shifts, std::span<const double> grid, double tol);

/// Scalar convenience wrapper.
RecurrenceReport aa_recurrence_test_scalar(const std::function<double(double)>& sampler,
                                           std::span<const double> shifts,
                                           std::span<const double> grid, double tol);

/// Distributional variant: same two-pass structure with d_BL lower estimates
/// between laws. Shift and grid times must land on the path grid; the limit
/// law pools the last-quartile shifted samples. Dictionary richness is the
/// caller's knob.
RecurrenceReport aa_distribution_test(const measure::MeasurePath& lawpath,
                                      std::span<const double> shifts,
                                      std::span<const double> grid, double tol,
                                      const measure::DblOptions& dict = {});

struct Sbc0Report {
  std::vector<double> q_list;
  std::vector<double> values;  // weighted ergodic means
  double slope_tol = 0.0;
  bool member = false;
  std::string disclaimer = kEvidenceDisclaimer;
  std::string to_json() const;
};

/// Membership verdict for the vanishing weighted ergodic mean: the means must
/// decrease along q_list (5% slack) and end below slope_tol.
Sbc0Report sbc0_membership(const SecondMomentTrace& trace, const WeightFunction& rho,
                           std::span<const double> q_list, double slope_tol);

/// Literal ramp coefficient of the heat-equation scenario,
/// b(t) = t 1_[0,1](t) + t 1_[1,inf)(t); the branches collapse to t 1_{t>=0}.
double example1_b_literal(double t);
/// Bounded alternative with a decaying second branch, b(t) <= 1.
double example1_b_bounded(double t);

}  // namespace meanfield::automorphy
