#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meanfield/common.hpp"

namespace meanfield::fbm {

/// Hurst index restricted to [1/2, 1). The integration theory below needs
/// h > 1/2; h = 1/2 is admitted as the Brownian degenerate case so the
/// generator can be cross-checked against white noise.
class HurstParameter {
 public:
  explicit HurstParameter(double h);
  double value() const { return h_; }
  bool is_brownian() const { return h_ == 0.5; }

 private:
  double h_;
};

/// Covariance of standard fBm: (|t|^{2h} + |s|^{2h} - |t-s|^{2h}) / 2.
double fbm_cov(double t, double s, HurstParameter h);

/// Fractional kernel h(2h-1)|u|^{2h-2}. Singular at u = 0 for h < 1.
double fractional_kernel(double u, HurstParameter h);

/// Autocovariance of the increment sequence at lag k for step dt:
/// (dt^{2h}/2)(|k+1|^{2h} + |k-1|^{2h} - 2|k|^{2h}).
double fgn_autocov(long k, HurstParameter h, double dt);

/// E[(B(b)-B(a))(B(d)-B(c))] for standard fBm; exact rectangle mass of the
/// fractional kernel, valid for h = 1/2 too.
double increment_cov(double a, double b, double c, double d, HurstParameter h);

struct FgnSequence {
  std::vector<double> values;
  double dt = 1.0;
  HurstParameter h{0.75};
  std::uint64_t seed = 0;
};

struct FbmPath {
  std::vector<double> times;
  std::vector<double> values;  // values[0] == 0, values[i+1]-values[i] = fGn[i]
  HurstParameter h{0.75};
};

enum class FgnMethod {
  automatic,    // circulant embedding, conditional fallback on a bad eigenvalue
  circulant,
  conditional,  // Durbin-Levinson recursion, O(n^2)
};

/// Exact-covariance fGn synthesis. Embedding eigenvalues depend only on
/// (n, h, dt) and are computed once; generate() is const and safe to call
/// concurrently with distinct seeds.
class FgnSynthesizer {
 public:
  FgnSynthesizer(std::size_t n, HurstParameter h, double dt,
                 FgnMethod method = FgnMethod::automatic);
  ~FgnSynthesizer();
  FgnSynthesizer(const FgnSynthesizer&) = delete;
  FgnSynthesizer& operator=(const FgnSynthesizer&) = delete;

  FgnSequence generate(std::uint64_t seed) const;
  double min_embedding_eigenvalue() const;
  bool uses_conditional_fallback() const;
  std::size_t length() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FgnSequence generate_fgn(std::size_t n, HurstParameter h, double dt, std::uint64_t seed);

FbmPath cumulate_to_fbm(const FgnSequence& g);

struct HilbertFbm {
  std::vector<double> eigenvalues;      // nonincreasing, nonnegative
  std::vector<FbmPath> component_paths; // shared grid, already scaled: path k
                                        // holds sqrt(lambda_k) beta_k(t)
  double truncation_tail = 0.0;         // reported tail mass beyond the kept modes
};

/// Finite truncation of B(t) = sum_k sqrt(lambda_k) beta_k(t) e_k with
/// independent per-component paths. Component k draws from the stream
/// (seed, k), so a fixed seed is reproducible under any parallel schedule.
HilbertFbm sample_hilbert_fbm(std::span<const double> lambdas, HurstParameter h,
                              std::size_t n_increments, double dt, std::uint64_t seed,
                              double truncation_tail = 0.0);

/// Piecewise-constant integrand with values in R^d on [breakpoints.front(),
/// breakpoints.back()); values[i] applies on [breakpoints[i], breakpoints[i+1]).
struct StepIntegrand {
  std::vector<double> breakpoints;            // strictly increasing, size n
  std::vector<std::vector<double>> values;    // size n-1, equal dims

  std::size_t cells() const { return values.size(); }
  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }
  static StepIntegrand scalar(std::vector<double> breakpoints, std::vector<double> vals);
};

/// Midpoint sampling of a scalar function into a uniform StepIntegrand.
StepIntegrand sample_integrand(const std::function<double(double)>& f, double t1,
                               double t2, std::size_t cells);

/// E || int h dB ||^2 = int int <h(u), h(v)> phi(u-v) du dv, with the kernel
/// integrated exactly over every cell pair (pointwise quadrature diverges at
/// the diagonal).
double fbm_integral_second_moment(const StepIntegrand& h, HurstParameter hurst);

/// Pathwise evaluation of int h dB for a scalar step integrand whose
/// breakpoints lie on the path grid: sum h_i (B(t_{i+1}) - B(t_i)).
double wiener_integral_fbm(const StepIntegrand& h, const FbmPath& path);

/// L^p norm of the scalar norm profile of a step integrand; p defaults to 2
/// (the bound-check exponent is not pinned by the theory, so it is exposed).
double integrand_lp_norm(const StepIntegrand& h, double p = 2.0);

/// Ratio of the kernel double integral of ||h|| against |h|_{L^p}^2. Finite
/// output is the numerical analogue of the square-integrability condition the
/// Wiener integral needs.
double wiener_bound_ratio(const StepIntegrand& h, HurstParameter hurst, double p = 2.0);

/// CSV export, header "t,value", 17 significant digits.
std::string fbm_path_csv(const FbmPath& path);

}  // namespace meanfield::fbm
