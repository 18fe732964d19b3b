#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "meanfield/common.hpp"

namespace meanfield::evolution {

/// Default drift modulation of the heat-family scenario:
/// a(t) = sin(1 / (2 + sin t + sin(pi t))), almost automorphic, |a| <= 1.
double heat_modulation(double t);

/// Time-modulated Dirichlet heat family in the spectral basis. The action is
/// diagonal: mode k scales by exp(-k^2 pi^2 (t-s) + int_s^t a(r) dr).
/// Operator norm <= exp(-(pi^2 - 1)(t-s)) for t >= s since |a| <= 1.
class SpectralHeatFamily {
 public:
  explicit SpectralHeatFamily(std::size_t modes,
                              std::function<double(double)> modulation = heat_modulation);

  std::size_t modes() const { return modes_; }
  double decay_m() const { return 1.0; }
  double decay_delta() const;  // pi^2 - 1

  /// int_s^t a(r) dr by adaptive Gauss-Kronrod, abs tol ~1e-12 (tighter than
  /// the documented 1e-10 so cocycle residuals stay below 1e-10).
  double modulation_integral(double s, double t) const;

  /// Per-mode multipliers for the step s -> t; shared across any ensemble.
  std::vector<double> step_factors(double s, double t) const;

  std::vector<double> apply(std::span<const double> z, double t, double s) const;

 private:
  std::size_t modes_;
  std::function<double(double)> modulation_;
};

/// Left-translation group on a truncated weighted-L2 grid: (S(t)u)(x) = u(t+x)
/// with linear interpolation between nodes and zero extension outside [-X, X].
/// The weighted norm with weight e^{nu x} contracts exactly like e^{-nu t / 2}
/// in the continuum.
class WeightedShiftGroup {
 public:
  WeightedShiftGroup(double nu, double x_max, std::size_t nodes, double margin = 0.0);

  double nu() const { return nu_; }
  double x_max() const { return x_max_; }
  std::size_t nodes() const { return nodes_; }
  double margin() const { return margin_; }
  double spacing() const;
  std::vector<double> grid() const;
  double decay_m() const { return 1.0; }
  double decay_delta() const { return nu_ / 2.0; }
  double truncation_bound() const;  // e^{-nu X}

  std::vector<double> apply(std::span<const double> u, double t) const;
  double weighted_norm(std::span<const double> u) const;

 private:
  double nu_, x_max_, margin_;
  std::size_t nodes_;
};

/// Type-erased exponentially stable two-parameter family with its decay
/// constants; make_step returns a reusable applier for a fixed (s, t) so
/// per-step work (quadrature, factor tables) is paid once per ensemble step.
struct EvolutionFamilySpec {
  std::function<void(std::span<const double>, double, double, std::span<double>)> apply;
  double decay_m = 1.0;
  double decay_delta = 1.0;
  std::function<std::function<void(std::span<const double>, std::span<double>)>(double, double)>
      make_step;

  void apply_to(std::span<const double> z, double t, double s, std::span<double> out) const;
};

EvolutionFamilySpec heat_family_spec(std::shared_ptr<const SpectralHeatFamily> fam);
/// apply(z, t, s) = e^{-delta (t-s)} z, the autonomous scalar family.
EvolutionFamilySpec scalar_decay_family(double delta);
EvolutionFamilySpec shift_group_spec(std::shared_ptr<const WeightedShiftGroup> grp);

struct BiAutomorphyReport {
  std::vector<double> shifts;
  std::vector<double> errors;           // squared recurrence error per shift
  std::vector<std::size_t> subsequence; // indices of the decreasing-error subsequence
  double tol = 0.0;
  bool subsequence_below_tol = false;
  std::string to_json() const;
};

/// Numerical recurrence check for U(t+e, s+e) ~ U(t, s): the limit family is
/// estimated as the average over the last quartile of the shifted
/// evaluations, then each shift is scored by the worst squared deviation over
/// probes and (t, s) pairs. Evidence over the supplied shifts, not a proof.
BiAutomorphyReport check_bi_automorphy(const EvolutionFamilySpec& fam,
                                       std::span<const double> shifts,
                                       const std::vector<std::vector<double>>& probes,
                                       std::span<const std::pair<double, double>> ts_pairs,
                                       double tol);

}  // namespace meanfield::evolution
