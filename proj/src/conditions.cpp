#include "meanfield/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace meanfield::solver {

using ordered_json = nlohmann::ordered_json;

ContractionConstants beta_constants(double k, double m, double delta, double ctilde2,
                                    double hurst, BetaVariant variant) {
  if (!(delta > 0.0)) throw std::invalid_argument("beta_constants: delta must be > 0");
  if (k < 0.0) throw std::invalid_argument("beta_constants: K must be >= 0");
  if (m < 1.0) throw std::invalid_argument("beta_constants: M must be >= 1");
  if (!(hurst > 0.5 && hurst < 1.0) && hurst != 0.5)
    throw std::invalid_argument("beta_constants: H must lie in [1/2, 1)");
  if (ctilde2 < 0.0) throw std::invalid_argument("beta_constants: Ctilde2 must be >= 0");

  ContractionConstants c;
  c.k = k;
  c.m = m;
  c.delta = delta;
  c.ctilde2 = ctilde2;
  c.hurst = hurst;
  c.variant = variant;
  c.beta1 = (3.0 * m * m * k + ctilde2 * m * m * k) / delta;

  if (hurst > 0.75) {
    const double p = 4.0 * hurst - 2.0;
    const double l1 = std::tgamma(p) / (p * std::pow(delta, p));
    const double l2 = std::tgamma(4.0 * hurst - 3.0) / (2.0 * std::pow(delta, p));
    c.l1_plus_l2 = l1 + l2;
    c.c_delta_h = std::sqrt(l1 + l2);
    const double kernel = 3.0 * hurst * (2.0 * hurst - 1.0) * m * m * k * k;
    const double definitive = c.beta1 + kernel * delta * (*c.c_delta_h);
    const double alternate = c.beta1 + kernel * (*c.c_delta_h);
    c.beta2 = (variant == BetaVariant::definitive) ? definitive : alternate;
    c.beta2_alternate = (variant == BetaVariant::definitive) ? alternate : definitive;
  }
  return c;
}

bool ConditionReport::all_hold() const {
  return cond1 == Verdict::holds && cond1p == Verdict::holds && cond2 == Verdict::holds;
}

bool ConditionReport::any_indeterminate() const {
  return cond1 == Verdict::indeterminate || cond1p == Verdict::indeterminate ||
         cond2 == Verdict::indeterminate;
}

namespace {
const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "indeterminate";
  }
}
}  // namespace

std::string ConditionReport::to_json() const {
  ordered_json j;
  j["cond1"] = {{"lhs", cond1_lhs}, {"verdict", verdict_name(cond1)}};
  ordered_json c1p;
  if (cond1p_lhs)
    c1p["lhs"] = *cond1p_lhs;
  else
    c1p["lhs"] = nullptr;
  c1p["verdict"] = verdict_name(cond1p);
  j["cond1_plus"] = c1p;
  ordered_json c2;
  c2["lhs"] = cond2_lhs;
  c2["verdict"] = verdict_name(cond2);
  if (l1_plus_l2)
    c2["l1_plus_l2"] = *l1_plus_l2;
  else
    c2["l1_plus_l2"] = nullptr;
  j["cond2"] = c2;
  j["all_hold"] = all_hold();
  return j.dump(2);
}

ConditionReport check_existence_conditions(const ContractionConstants& c) {
  ConditionReport rep;
  rep.cond1_lhs =
      2.0 * c.k * c.m * c.m * (1.0 / (c.delta * c.delta) + c.ctilde2 / (2.0 * c.delta));
  rep.cond1 = rep.cond1_lhs < 1.0 ? Verdict::holds : Verdict::fails;

  if (c.beta2) {
    const double r = *c.beta2 / c.delta;
    rep.cond1p_lhs = r * (1.0 + r);
    rep.cond1p = *rep.cond1p_lhs < 1.0 ? Verdict::holds : Verdict::fails;
  } else {
    rep.cond1p = Verdict::indeterminate;
  }

  rep.cond2_lhs = 18.0 * c.k * c.m * c.m / c.delta + 18.0 * c.ctilde2 * c.m * c.m * c.k +
                  9.0 * c.hurst * (2.0 * c.hurst - 1.0) * c.m * c.m * c.k * c.k;
  rep.cond2 = rep.cond2_lhs < 1.0 ? Verdict::holds : Verdict::fails;
  rep.l1_plus_l2 = c.l1_plus_l2;
  return rep;
}

double example1_lipschitz_k(double c1, double c2, double c3) {
  if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0)
    throw std::invalid_argument("example1_lipschitz_k: coefficients must be >= 0");
  return 2.0 * std::max({c1 * c1 / 4.0 + c1 * c1, c2 * c2 / 4.0 + c2 * c2, c3 / 2.0});
}

ContractionConstants example1_constants(double c1, double c2, double c3, double hurst,
                                        double ctilde2, BetaVariant variant) {
  const double k = example1_lipschitz_k(c1, c2, c3);
  return beta_constants(k, 1.0, M_PI * M_PI - 1.0, ctilde2, hurst, variant);
}

Example2Constants example2_constants(double g1_weighted_norm, double g2_sup_norm,
                                     double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("example2_constants: nu must be > 0");
  if (g1_weighted_norm < 0.0 || g2_sup_norm < 0.0)
    throw std::invalid_argument("example2_constants: norms must be >= 0");
  Example2Constants e;
  e.k1 = (8.0 / nu) * g2_sup_norm * g2_sup_norm * g1_weighted_norm * g1_weighted_norm;
  e.k2 = g2_sup_norm * g2_sup_norm;
  e.k = std::max(e.k1, e.k2);
  e.m = 1.0;
  e.delta = nu / 2.0;
  return e;
}

double gronwall_bound(double alpha, std::span<const double> betas,
                      std::span<const double> deltas) {
  if (alpha < 0.0) throw std::invalid_argument("gronwall_bound: alpha must be >= 0");
  if (betas.size() != deltas.size() || betas.empty())
    throw std::invalid_argument("gronwall_bound: need matching nonempty beta/delta lists");
  double beta = 0.0;
  for (double b : betas) {
    if (b < 0.0) throw std::invalid_argument("gronwall_bound: betas must be >= 0");
    beta += b;
  }
  double dmin = deltas[0];
  for (double d : deltas) dmin = std::min(dmin, d);
  if (!(beta < dmin))
    throw std::domain_error("gronwall_bound: requires sum(betas) < min(deltas)");
  return alpha * dmin / (dmin - beta);
}

}  // namespace meanfield::solver
