#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "meanfield/conditions.hpp"
#include "meanfield/solver.hpp"

namespace meanfield::presets {

/// Almost automorphic scalar modulations used by the scenario coefficients.
double drift_modulation(double t);      // sin(1/(2 + cos t + cos(sqrt2 t)))
double diffusion_modulation(double t);  // sin(1/(2 + cos t + cos(sqrt3 t)))

struct Example1Options {
  double c1 = 0.05, c2 = 0.05, c3 = 0.05;
  double hurst = 0.8;
  std::size_t modes = 16;      // spectral truncation of the state
  std::size_t fbm_modes = 8;   // kept driver components
  double lambda_decay = 2.0;   // lambda_k = k^{-decay}; 0 keeps lambda_k = 1
  bool bounded_b = false;      // use the decaying ramp variant
};

/// Heat-equation scenario: diagonal heat family, coefficient triple with the
/// paper-style modulations, coupling through W2(delta_0, mu). The measure
/// term feeds the first mode (a unit vector, so the declared Lipschitz
/// constant is unaffected).
solver::McKeanVlasovProblem example1_problem(const Example1Options& opts);

/// Driver eigenvalue list and its reported truncation tail.
std::vector<double> example1_lambdas(const Example1Options& opts, double* tail);

struct Example2Options {
  double nu = 4.0;
  double g2_amp = 0.05;       // sup norm of the Lipschitz envelope
  double x_max = 20.0;
  std::size_t nodes = 2001;   // odd, so 0 is a grid node
  double hurst = 0.8;         // driver unused (psi == 0); kept for bookkeeping
};

/// Shift-group scenario on the weighted grid; psi == 0, scalar Brownian.
solver::McKeanVlasovProblem example2_problem(const Example2Options& opts);

/// |g1|_{L2_nu} of the Gaussian envelope amp * e^{-x^2} (closed form).
double example2_g1_norm(const Example2Options& opts);
solver::Example2Constants example2_scenario_constants(const Example2Options& opts);

struct OuOptions {
  double delta = 1.0;
  double sigma_w = 1.0;    // constant Brownian diffusion
  double sigma_fbm = 0.0;  // constant fBm diffusion (lambda = [1] when nonzero)
  double kappa = 0.0;      // mean-reversion toward the ensemble mean
  double hurst = 0.75;
};

/// Decoupled (or mean-reverting) scalar preset with known stationary moments:
/// Var = sigma_w^2/(2 delta) for the Brownian term and
/// sigma_fbm^2 H Gamma(2H) / delta^{2H} for the fBm term.
solver::McKeanVlasovProblem ou_problem(const OuOptions& opts);

}  // namespace meanfield::presets
