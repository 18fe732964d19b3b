#include "meanfield/presets.hpp"

#include <cmath>
#include <limits>

#include "meanfield/automorphy.hpp"

namespace meanfield::presets {

using solver::CoefficientSpec;
using solver::McKeanVlasovProblem;
using solver::MeasureStats;

double drift_modulation(double t) {
  return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::sqrt(2.0) * t)));
}

double diffusion_modulation(double t) {
  return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::sqrt(3.0) * t)));
}

std::vector<double> example1_lambdas(const Example1Options& opts, double* tail) {
  std::vector<double> lambdas(opts.fbm_modes);
  for (std::size_t k = 1; k <= opts.fbm_modes; ++k)
    lambdas[k - 1] =
        opts.lambda_decay == 0.0
            ? 1.0
            : std::pow(static_cast<double>(k), -opts.lambda_decay);
  if (tail) {
    if (opts.lambda_decay <= 1.0) {
      *tail = std::numeric_limits<double>::infinity();  // non-trace-class driver
    } else {
      // sum_{k > m} k^-p < int_m^inf x^-p dx
      *tail = std::pow(static_cast<double>(opts.fbm_modes), 1.0 - opts.lambda_decay) /
              (opts.lambda_decay - 1.0);
    }
  }
  return lambdas;
}

McKeanVlasovProblem example1_problem(const Example1Options& opts) {
  if (opts.modes == 0 || opts.fbm_modes == 0)
    throw std::invalid_argument("example1_problem: modes must be >= 1");
  const double c1 = opts.c1, c2 = opts.c2, c3 = opts.c3;
  if (c1 < 0 || c2 < 0 || c3 < 0)
    throw std::invalid_argument("example1_problem: coefficients must be >= 0");

  auto fam = std::make_shared<const evolution::SpectralHeatFamily>(opts.modes);
  auto b = opts.bounded_b ? automorphy::example1_b_bounded : automorphy::example1_b_literal;

  McKeanVlasovProblem p;
  p.family = evolution::heat_family_spec(fam);
  p.hurst = fbm::HurstParameter(opts.hurst);
  p.dim = opts.modes;
  p.brownian_dim = 1;
  p.fbm_lambdas = example1_lambdas(opts, nullptr);

  CoefficientSpec coef;
  coef.lipschitz_k = solver::example1_lipschitz_k(c1, c2, c3);
  coef.drift = [c1, b](double t, std::span<const double> x, const MeasureStats& mu,
                       std::span<double> out) {
    const double s = drift_modulation(t);
    const double bt = b(t);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double bounded = x[k] / (x[k] * x[k] + 1.0);
      out[k] = 0.5 * c1 * s * bounded + c1 * bt * std::cos(x[k]);
    }
    out[0] += 0.5 * c1 * s * mu.w2_to_ref;
  };
  coef.diffusion = [c2, b](double t, std::span<const double> x, const MeasureStats& mu,
                           std::span<const double> dw, std::span<double> out) {
    const double s = diffusion_modulation(t);
    const double bt = b(t);
    for (std::size_t k = 0; k < x.size(); ++k)
      out[k] = (0.5 * c2 * s * x[k] + c2 * bt * std::sin(x[k])) * dw[0];
    out[0] += 0.5 * c2 * s * mu.w2_to_ref * dw[0];
  };
  coef.fbm_diffusion = [c3](double t, const MeasureStats& mu,
                            std::span<const double> dbh, std::span<double> out) {
    const double factor = 0.5 * c3 * diffusion_modulation(t) * mu.w2_to_ref;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < dbh.size() && k < out.size(); ++k)
      out[k] = factor * dbh[k];
  };
  p.coefficients = std::move(coef);
  return p;
}

double example2_g1_norm(const Example2Options& opts) {
  // |amp e^{-x^2}|_{L2_nu}^2 = amp^2 int e^{-2x^2 + nu x} dx
  //                          = amp^2 sqrt(pi/2) e^{nu^2/8}
  return opts.g2_amp * std::sqrt(std::sqrt(M_PI / 2.0)) *
         std::exp(opts.nu * opts.nu / 16.0);
}

solver::Example2Constants example2_scenario_constants(const Example2Options& opts) {
  return solver::example2_constants(example2_g1_norm(opts), opts.g2_amp, opts.nu);
}

McKeanVlasovProblem example2_problem(const Example2Options& opts) {
  if (opts.nodes < 3 || opts.nodes % 2 == 0)
    throw std::invalid_argument("example2_problem: nodes must be odd and >= 3");
  auto grp = std::make_shared<const evolution::WeightedShiftGroup>(opts.nu, opts.x_max,
                                                                   opts.nodes);
  const double amp = opts.g2_amp;
  const std::size_t nodes = opts.nodes;
  const double dx = grp->spacing();
  const double x0 = -opts.x_max;
  const std::size_t zero_idx = (nodes - 1) / 2;

  // g(x, y) = amp e^{-x^2} tanh(y): |g| <= g1(x), |dg/dy| <= g2(x) = amp e^{-x^2}
  auto g = [amp](double x, double y) { return amp * std::exp(-x * x) * std::tanh(y); };

  McKeanVlasovProblem p;
  p.family = evolution::shift_group_spec(grp);
  p.hurst = fbm::HurstParameter(opts.hurst);
  p.dim = nodes;
  p.brownian_dim = 1;

  auto phi1 = [](double t) {
    return std::cos(1.0 / (2.0 + std::sin(t) + std::sin(std::sqrt(3.0) * t)));
  };
  auto phi2 = [](double t) {
    return std::cos(1.0 / (2.0 + std::sin(t) + std::sin(std::sqrt(2.0) * t)));
  };

  CoefficientSpec coef;
  coef.lipschitz_k = example2_scenario_constants(opts).k;
  coef.drift = [g, phi1, nodes, dx, x0, zero_idx](double t, std::span<const double> u,
                                                  const MeasureStats&,
                                                  std::span<double> out) {
    // f(x) = Phi1^2 g(x, u(x)) * int_0^{|x|} g(y, u(y)) dy, prefix trapezoid
    const double s = phi1(t);
    std::vector<double> gv(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
      gv[i] = g(x0 + static_cast<double>(i) * dx, u[i]);
    // cumulative integral from the zero node outward
    std::vector<double> cum(nodes, 0.0);
    for (std::size_t i = zero_idx + 1; i < nodes; ++i)
      cum[i] = cum[i - 1] + 0.5 * (gv[i - 1] + gv[i]) * dx;
    for (std::size_t i = zero_idx; i-- > 0;)
      cum[i] = cum[i + 1] + 0.5 * (gv[i + 1] + gv[i]) * dx;
    for (std::size_t i = 0; i < nodes; ++i) out[i] = s * s * gv[i] * cum[i];
  };
  coef.diffusion = [g, phi2, nodes, dx, x0](double t, std::span<const double> u,
                                            const MeasureStats&,
                                            std::span<const double> dw,
                                            std::span<double> out) {
    const double s = phi2(t);
    for (std::size_t i = 0; i < nodes; ++i)
      out[i] = s * g(x0 + static_cast<double>(i) * dx, u[i]) * dw[0];
  };
  p.coefficients = std::move(coef);
  return p;
}

McKeanVlasovProblem ou_problem(const OuOptions& opts) {
  if (!(opts.delta > 0.0)) throw std::invalid_argument("ou_problem: delta must be > 0");
  McKeanVlasovProblem p;
  p.family = evolution::scalar_decay_family(opts.delta);
  p.hurst = fbm::HurstParameter(opts.hurst);
  p.dim = 1;
  p.brownian_dim = opts.sigma_w != 0.0 ? 1 : 0;
  if (opts.sigma_fbm != 0.0) p.fbm_lambdas = {1.0};

  CoefficientSpec coef;
  coef.lipschitz_k = 2.0 * opts.kappa * opts.kappa;
  if (opts.kappa != 0.0) {
    const double kappa = opts.kappa;
    coef.drift = [kappa](double, std::span<const double> x, const MeasureStats& mu,
                         std::span<double> out) {
      out[0] = kappa * (mu.mean[0] - x[0]);
    };
  }
  if (opts.sigma_w != 0.0) {
    const double sw = opts.sigma_w;
    coef.diffusion = [sw](double, std::span<const double>, const MeasureStats&,
                          std::span<const double> dw, std::span<double> out) {
      out[0] = sw * dw[0];
    };
  }
  if (opts.sigma_fbm != 0.0) {
    const double sh = opts.sigma_fbm;
    coef.fbm_diffusion = [sh](double, const MeasureStats&, std::span<const double> dbh,
                              std::span<double> out) { out[0] = sh * dbh[0]; };
    coef.sup_bound = std::abs(opts.sigma_fbm);
  }
  p.coefficients = std::move(coef);
  return p;
}

}  // namespace meanfield::presets
