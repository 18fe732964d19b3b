#pragma once

#include <optional>
#include <span>
#include <string>

#include "meanfield/common.hpp"

namespace meanfield::solver {

/// Which displayed form of the beta_2 constant to use. The two derivation
/// routes disagree by one power of delta on the kernel term; both are kept
/// for sensitivity reporting and the headline constant follows the definitive
/// statement (default).
enum class BetaVariant { definitive, alternate };

struct ContractionConstants {
  double k = 0.0;        // joint squared-norm Lipschitz constant
  double m = 1.0;        // family bound M >= 1
  double delta = 1.0;    // decay rate > 0
  double ctilde2 = 1.0;  // second-moment constant of the Brownian integral
  double hurst = 0.75;
  BetaVariant variant = BetaVariant::definitive;

  double beta1 = 0.0;
  // Defined only for hurst > 3/4; the Gamma(4H-3) branch diverges otherwise.
  std::optional<double> c_delta_h;
  std::optional<double> l1_plus_l2;
  std::optional<double> beta2;
  std::optional<double> beta2_alternate;
};

ContractionConstants beta_constants(double k, double m, double delta, double ctilde2,
                                    double hurst,
                                    BetaVariant variant = BetaVariant::definitive);

enum class Verdict { holds, fails, indeterminate };

struct ConditionReport {
  double cond1_lhs = 0.0;
  Verdict cond1 = Verdict::fails;
  std::optional<double> cond1p_lhs;
  Verdict cond1p = Verdict::indeterminate;
  double cond2_lhs = 0.0;
  Verdict cond2 = Verdict::fails;
  std::optional<double> l1_plus_l2;

  bool all_hold() const;
  bool any_indeterminate() const;
  std::string to_json() const;
};

/// Evaluates the explicit existence/uniqueness/automorphy conditions:
///   cond1:  2 K M^2 (1/delta^2 + C~2/(2 delta)) < 1
///   cond1+: (beta2/delta)(1 + beta2/delta) < 1   (indeterminate if beta2 is)
///   cond2:  18 K M^2/delta + 18 C~2 M^2 K + 9 H(2H-1) M^2 K^2 < 1
ConditionReport check_existence_conditions(const ContractionConstants& c);

/// Joint Lipschitz constant of the heat-equation scenario coefficients:
/// K = 2 max{c1^2/4 + c1^2, c2^2/4 + c2^2, c3/2}.
double example1_lipschitz_k(double c1, double c2, double c3);

ContractionConstants example1_constants(double c1, double c2, double c3, double hurst,
                                        double ctilde2 = 1.0,
                                        BetaVariant variant = BetaVariant::definitive);

struct Example2Constants {
  double k1 = 0.0;  // (8/nu) |g2|_inf^2 |g1|_nu^2
  double k2 = 0.0;  // |g2|_inf^2
  double k = 0.0;   // max(k1, k2)
  double m = 1.0;
  double delta = 0.0;  // nu / 2
};

Example2Constants example2_constants(double g1_weighted_norm, double g2_sup_norm,
                                     double nu);

/// Constant-alpha Gronwall bound alpha * dmin / (dmin - beta) where
/// dmin = min(deltas) and beta = sum(betas); requires beta < dmin.
double gronwall_bound(double alpha, std::span<const double> betas,
                      std::span<const double> deltas);

}  // namespace meanfield::solver
