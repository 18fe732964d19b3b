#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "meanfield/common.hpp"
#include "meanfield/evolution.hpp"
#include "meanfield/fbm.hpp"
#include "meanfield/measure.hpp"

namespace meanfield::solver {

/// Per-step snapshot of the coupling measure, precomputed once per step so a
/// coefficient evaluation stays O(d) per particle. w2_to_ref is the exact
/// W2 distance to the delta-at-zero reference, sqrt(mean ||x||^2).
struct MeasureStats {
  double second_moment = 0.0;
  double w2_to_ref = 0.0;
  std::vector<double> mean;
};

MeasureStats measure_stats(const measure::EmpiricalMeasure& m);

/// Coefficient triple of the dynamics. `diffusion` and `fbm_diffusion`
/// receive the driver increments directly and return the state-space
/// contribution (the fBm coefficient may depend on the measure only).
struct CoefficientSpec {
  std::function<void(double t, std::span<const double> x, const MeasureStats& mu,
                     std::span<double> out)>
      drift;
  std::function<void(double t, std::span<const double> x, const MeasureStats& mu,
                     std::span<const double> dw, std::span<double> out)>
      diffusion;
  std::function<void(double t, const MeasureStats& mu, std::span<const double> dbh,
                     std::span<double> out)>
      fbm_diffusion;
  double lipschitz_k = 0.0;  // declared joint squared-norm constant
  double sup_bound = std::numeric_limits<double>::quiet_NaN();  // for truncation reports
};

struct McKeanVlasovProblem {
  evolution::EvolutionFamilySpec family;
  CoefficientSpec coefficients;
  fbm::HurstParameter hurst{0.75};
  std::size_t dim = 1;
  std::size_t brownian_dim = 1;
  std::vector<double> fbm_lambdas;  // driver eigenvalues; empty = no fBm term
};

struct ParticleEnsemble {
  double t = 0.0;
  std::size_t dim = 1;
  std::vector<double> states;  // N x dim row-major

  std::size_t size() const { return states.size() / dim; }
  std::span<double> particle(std::size_t i) { return {states.data() + i * dim, dim}; }
  std::span<const double> particle(std::size_t i) const {
    return {states.data() + i * dim, dim};
  }
  measure::EmpiricalMeasure empirical() const {
    return measure::EmpiricalMeasure(dim, states);
  }
};

/// One left-point exponential-Euler step of the mild dynamics:
///   x <- U(t+dt, t)[ x + f dt + theta dW + psi dB ].
/// `dw` is N x brownian_dim, `dbh` N x n_fbm (already scaled by sqrt(lambda)).
/// `frozen` substitutes the coupling measure (Picard mode); when null the
/// ensemble's own empirical measure at time t is used. Throws blowup_error on
/// a non-finite state.
void mild_step(ParticleEnsemble& ens, double dt, const McKeanVlasovProblem& problem,
               std::span<const double> dw, std::span<const double> dbh,
               const MeasureStats* frozen = nullptr, int threads = 1);

struct SimulateOptions {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-2;
  double burn_in = 0.0;
  std::size_t particles = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t snapshot_stride = 0;  // 0: no snapshots
  // state every particle starts from at t0 - burn_in (zeros when empty)
  std::vector<double> initial_state;
  // optional relabeling of particle noise streams (identity when empty);
  // permuting labels permutes trajectories
  std::vector<std::uint64_t> particle_labels;
};

struct MomentTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> mean;  // per time, dim entries
  std::vector<std::vector<double>> var;
  std::vector<double> w2_to_ref;

  std::vector<double> second_moment() const;  // E||x||^2 = sum(var + mean^2)
};

struct SimulationResult {
  MomentTrace stats;                                  // on [t0, t1]
  std::vector<double> snapshot_times;
  std::vector<measure::EmpiricalMeasure> snapshots;
  ParticleEnsemble final_ensemble;
  double truncation_bound = 0.0;  // M e^{-delta burn_in} (x sup bound if declared)
};

/// Interacting-particle run of the mild dynamics, deterministic per seed and
/// independent of the thread count. History before t0 is truncated at
/// t0 - burn_in; the reported truncation bound decays like e^{-delta burn_in}.
SimulationResult simulate(const McKeanVlasovProblem& problem, const SimulateOptions& opts);

struct PicardOptions {
  SimulateOptions sim;
  std::size_t iterations = 5;
};

struct PicardResult {
  measure::MeasurePath path;      // final iterate, on the snapshot grid
  std::vector<double> gaps;       // sup-over-grid W2 between successive iterates
  MomentTrace stats;              // trace of the final iterate (includes burn-in)
  double predicted_ratio = 0.0;   // (beta2/delta)(1+beta2/delta) when available
};

/// Picard iteration on the law path: iterate k+1 solves the dynamics with the
/// coupling measure frozen to iterate k, under common random numbers so the
/// gap sequence reveals the geometric decay. Gaps use the paired coupling
/// bound, the sanctioned estimator above the exact-transport cap.
PicardResult picard_measure_iteration(const McKeanVlasovProblem& problem,
                                      const PicardOptions& opts);

/// Diagnostic for the declared Lipschitz constant: max over sampled probe
/// pairs of ||coef(t,x,mu1)-coef(t,y,mu2)||^2 / (||x-y||^2 + W2^2(mu1,mu2)).
double empirical_lipschitz_ratio(const McKeanVlasovProblem& problem,
                                 std::span<const double> times, std::size_t probes,
                                 std::uint64_t seed);

}  // namespace meanfield::solver
