#include "meanfield/evolution.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace meanfield::evolution {

using ordered_json = nlohmann::ordered_json;

double heat_modulation(double t) {
  return std::sin(1.0 / (2.0 + std::sin(t) + std::sin(M_PI * t)));
}

SpectralHeatFamily::SpectralHeatFamily(std::size_t modes,
                                       std::function<double(double)> modulation)
    : modes_(modes), modulation_(std::move(modulation)) {
  if (modes_ == 0) throw std::invalid_argument("SpectralHeatFamily: modes must be >= 1");
}

double SpectralHeatFamily::decay_delta() const { return M_PI * M_PI - 1.0; }

double SpectralHeatFamily::modulation_integral(double s, double t) const {
  if (s == t) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      modulation_, s, t, 14, 1e-13, &err);
}

std::vector<double> SpectralHeatFamily::step_factors(double s, double t) const {
  if (t < s) throw std::invalid_argument("SpectralHeatFamily: requires t >= s");
  const double integral = modulation_integral(s, t);
  std::vector<double> factors(modes_);
  for (std::size_t k = 1; k <= modes_; ++k) {
    const double lambda = -static_cast<double>(k) * static_cast<double>(k) * M_PI * M_PI;
    factors[k - 1] = std::exp(lambda * (t - s) + integral);
  }
  return factors;
}

std::vector<double> SpectralHeatFamily::apply(std::span<const double> z, double t,
                                              double s) const {
  if (z.size() != modes_)
    throw std::invalid_argument("SpectralHeatFamily: state size != modes");
  const auto factors = step_factors(s, t);
  std::vector<double> out(modes_);
  for (std::size_t k = 0; k < modes_; ++k) out[k] = factors[k] * z[k];
  return out;
}

WeightedShiftGroup::WeightedShiftGroup(double nu, double x_max, std::size_t nodes,
                                       double margin)
    : nu_(nu), x_max_(x_max), margin_(margin > 0.0 ? margin : 0.5 * x_max), nodes_(nodes) {
  if (!(nu_ > 0.0)) throw std::invalid_argument("WeightedShiftGroup: nu must be positive");
  if (nodes_ < 2 || !(x_max_ > 0.0))
    throw std::invalid_argument("WeightedShiftGroup: bad grid");
}

double WeightedShiftGroup::spacing() const {
  return 2.0 * x_max_ / static_cast<double>(nodes_ - 1);
}

std::vector<double> WeightedShiftGroup::grid() const {
  std::vector<double> xs(nodes_);
  const double dx = spacing();
  for (std::size_t i = 0; i < nodes_; ++i)
    xs[i] = -x_max_ + static_cast<double>(i) * dx;
  return xs;
}

double WeightedShiftGroup::truncation_bound() const { return std::exp(-nu_ * x_max_); }

std::vector<double> WeightedShiftGroup::apply(std::span<const double> u, double t) const {
  if (u.size() != nodes_)
    throw std::invalid_argument("WeightedShiftGroup: state size != nodes");
  if (std::abs(t) > margin_)
    throw std::invalid_argument("WeightedShiftGroup: shift exceeds the truncation margin");
  const double dx = spacing();
  std::vector<double> out(nodes_);
  for (std::size_t i = 0; i < nodes_; ++i) {
    const double x = -x_max_ + static_cast<double>(i) * dx + t;
    const double pos = (x + x_max_) / dx;
    if (pos < 0.0 || pos > static_cast<double>(nodes_ - 1)) {
      out[i] = 0.0;
      continue;
    }
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, nodes_ - 1);
    const double w = pos - static_cast<double>(lo);
    out[i] = (1.0 - w) * u[lo] + w * u[hi];
  }
  return out;
}

double WeightedShiftGroup::weighted_norm(std::span<const double> u) const {
  if (u.size() != nodes_)
    throw std::invalid_argument("WeightedShiftGroup: state size != nodes");
  const double dx = spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes_; ++i) {
    const double x = -x_max_ + static_cast<double>(i) * dx;
    const double w = (i == 0 || i + 1 == nodes_) ? 0.5 : 1.0;  // trapezoid
    acc += w * u[i] * u[i] * std::exp(nu_ * x);
  }
  return std::sqrt(acc * dx);
}

void EvolutionFamilySpec::apply_to(std::span<const double> z, double t, double s,
                                   std::span<double> out) const {
  apply(z, t, s, out);
}

EvolutionFamilySpec heat_family_spec(std::shared_ptr<const SpectralHeatFamily> fam) {
  EvolutionFamilySpec spec;
  spec.decay_m = fam->decay_m();
  spec.decay_delta = fam->decay_delta();
  spec.apply = [fam](std::span<const double> z, double t, double s, std::span<double> out) {
    const auto factors = fam->step_factors(s, t);
    for (std::size_t k = 0; k < factors.size(); ++k) out[k] = factors[k] * z[k];
  };
  spec.make_step = [fam](double s, double t) {
    auto factors = std::make_shared<std::vector<double>>(fam->step_factors(s, t));
    return [factors](std::span<const double> z, std::span<double> out) {
      for (std::size_t k = 0; k < factors->size(); ++k) out[k] = (*factors)[k] * z[k];
    };
  };
  return spec;
}

EvolutionFamilySpec scalar_decay_family(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("scalar_decay_family: delta must be > 0");
  EvolutionFamilySpec spec;
  spec.decay_m = 1.0;
  spec.decay_delta = delta;
  spec.apply = [delta](std::span<const double> z, double t, double s, std::span<double> out) {
    const double f = std::exp(-delta * (t - s));
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = f * z[k];
  };
  spec.make_step = [delta](double s, double t) {
    const double f = std::exp(-delta * (t - s));
    return [f](std::span<const double> z, std::span<double> out) {
      for (std::size_t k = 0; k < z.size(); ++k) out[k] = f * z[k];
    };
  };
  return spec;
}

EvolutionFamilySpec shift_group_spec(std::shared_ptr<const WeightedShiftGroup> grp) {
  EvolutionFamilySpec spec;
  spec.decay_m = grp->decay_m();
  spec.decay_delta = grp->decay_delta();
  spec.apply = [grp](std::span<const double> z, double t, double s, std::span<double> out) {
    auto shifted = grp->apply(z, t - s);
    std::copy(shifted.begin(), shifted.end(), out.begin());
  };
  spec.make_step = [grp](double s, double t) {
    const double dt = t - s;
    return [grp, dt](std::span<const double> z, std::span<double> out) {
      auto shifted = grp->apply(z, dt);
      std::copy(shifted.begin(), shifted.end(), out.begin());
    };
  };
  return spec;
}

BiAutomorphyReport check_bi_automorphy(const EvolutionFamilySpec& fam,
                                       std::span<const double> shifts,
                                       const std::vector<std::vector<double>>& probes,
                                       std::span<const std::pair<double, double>> ts_pairs,
                                       double tol) {
  for (auto [t, s] : ts_pairs)
    if (t < s) throw std::invalid_argument("check_bi_automorphy: needs t >= s pairs");
  BiAutomorphyReport rep;
  rep.shifts.assign(shifts.begin(), shifts.end());
  rep.tol = tol;
  if (shifts.empty() || probes.empty() || ts_pairs.empty()) return rep;

  const std::size_t ns = shifts.size();
  const std::size_t tail = std::max<std::size_t>(1, (ns + 3) / 4);

  // evaluations[shift][probe][pair] -> state vector
  std::vector<std::vector<std::vector<std::vector<double>>>> evals(ns);
  for (std::size_t e = 0; e < ns; ++e) {
    evals[e].resize(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
      evals[e][p].reserve(ts_pairs.size());
      for (auto [t, s] : ts_pairs) {
        std::vector<double> out(probes[p].size());
        fam.apply(probes[p], t + shifts[e], s + shifts[e], out);
        evals[e][p].push_back(std::move(out));
      }
    }
  }

  // limit estimate: average of the last quartile of shifted evaluations
  std::vector<std::vector<std::vector<double>>> limit(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    limit[p].resize(ts_pairs.size());
    for (std::size_t q = 0; q < ts_pairs.size(); ++q) {
      std::vector<double> acc(probes[p].size(), 0.0);
      for (std::size_t e = ns - tail; e < ns; ++e)
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += evals[e][p][q][k];
      for (auto& v : acc) v /= static_cast<double>(tail);
      limit[p][q] = std::move(acc);
    }
  }

  rep.errors.resize(ns);
  for (std::size_t e = 0; e < ns; ++e) {
    double worst = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p)
      for (std::size_t q = 0; q < ts_pairs.size(); ++q)
        worst = std::max(worst, squared_distance(evals[e][p][q], limit[p][q]));
    rep.errors[e] = worst;
  }

  // shifts inside the averaging tail would score against themselves
  const std::size_t scored = ns > tail ? ns - tail : ns;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < scored; ++e) {
    if (rep.errors[e] < best) {
      best = rep.errors[e];
      rep.subsequence.push_back(e);
    }
  }
  rep.subsequence_below_tol = best < tol;
  return rep;
}

std::string BiAutomorphyReport::to_json() const {
  ordered_json j;
  j["shifts"] = shifts;
  j["errors"] = errors;
  j["subsequence"] = subsequence;
  j["tol"] = tol;
  j["subsequence_below_tol"] = subsequence_below_tol;
  j["note"] = "recurrence evidence over the supplied shifts only, not a proof";
  return j.dump(2);
}

}  // namespace meanfield::evolution
