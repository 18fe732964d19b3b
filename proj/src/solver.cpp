#include "meanfield/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "meanfield/conditions.hpp"

namespace meanfield::solver {

namespace {

constexpr std::uint64_t kTagBrownian = 0x57;  // 'W'
constexpr std::uint64_t kTagFbm = 0x42;       // 'B'

MeasureStats stats_from_states(const std::vector<double>& states, std::size_t dim) {
  MeasureStats s;
  const std::size_t n = states.size() / dim;
  s.mean.assign(dim, 0.0);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = states.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      s.mean[j] += x[j];
      sq += x[j] * x[j];
    }
  }
  for (auto& v : s.mean) v /= static_cast<double>(n);
  s.second_moment = sq / static_cast<double>(n);
  s.w2_to_ref = std::sqrt(s.second_moment);
  return s;
}

// fGn increments for every (particle, component), scaled by sqrt(lambda_c).
struct NoiseBlock {
  std::size_t steps = 0;
  std::size_t components = 0;
  std::vector<double> data;  // [(p * components + c) * steps + n]

  double at(std::size_t p, std::size_t c, std::size_t n) const {
    return data[(p * components + c) * steps + n];
  }
};

NoiseBlock generate_fbm_noise(const McKeanVlasovProblem& problem,
                              const SimulateOptions& opts, std::size_t steps) {
  NoiseBlock block;
  block.steps = steps;
  block.components = problem.fbm_lambdas.size();
  if (block.components == 0 || steps == 0) return block;
  for (double l : problem.fbm_lambdas)
    if (l < 0.0) throw std::invalid_argument("simulate: negative fBm eigenvalue");

  block.data.resize(opts.particles * block.components * steps);
  const fbm::FgnSynthesizer synth(steps, problem.hurst, opts.dt);
  const std::size_t total = opts.particles * block.components;
  parallel_for(total, opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::size_t p = idx / block.components;
      const std::size_t c = idx % block.components;
      const std::uint64_t label =
          opts.particle_labels.empty() ? p : opts.particle_labels[p];
      const auto seq = synth.generate(stream_seed(opts.seed, label, c, kTagFbm));
      const double scale = std::sqrt(problem.fbm_lambdas[c]);
      double* dst = block.data.data() + idx * steps;
      for (std::size_t n = 0; n < steps; ++n) dst[n] = scale * seq.values[n];
    }
  });
  return block;
}

void validate_options(const McKeanVlasovProblem& problem, const SimulateOptions& opts) {
  if (!(opts.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (opts.burn_in < 0.0) throw std::invalid_argument("simulate: burn_in must be >= 0");
  if (opts.particles < 1) throw std::invalid_argument("simulate: need at least one particle");
  if (opts.t1 < opts.t0) throw std::invalid_argument("simulate: t1 must be >= t0");
  if (problem.dim == 0) throw std::invalid_argument("simulate: state dim must be >= 1");
  if (!opts.particle_labels.empty() && opts.particle_labels.size() != opts.particles)
    throw std::invalid_argument("simulate: particle_labels size mismatch");
}

struct RunConfig {
  std::size_t steps = 0;
  std::size_t burn_steps = 0;
  double tb = 0.0;
};

RunConfig plan_grid(const SimulateOptions& opts) {
  RunConfig rc;
  rc.burn_steps = static_cast<std::size_t>(std::llround(opts.burn_in / opts.dt));
  rc.tb = opts.t0 - static_cast<double>(rc.burn_steps) * opts.dt;
  const double span = opts.t1 - rc.tb;
  rc.steps = static_cast<std::size_t>(std::llround(span / opts.dt));
  return rc;
}

SimulationResult run_particles(const McKeanVlasovProblem& problem,
                               const SimulateOptions& opts, const RunConfig& rc,
                               const NoiseBlock& noise,
                               const std::vector<MeasureStats>* frozen,
                               bool record_burn_in = false) {
  const std::size_t n = opts.particles;
  const std::size_t d = problem.dim;
  const std::size_t bdim = problem.brownian_dim;
  const std::size_t c = noise.components;
  const double sqrt_dt = std::sqrt(opts.dt);

  ParticleEnsemble ens;
  ens.t = rc.tb;
  ens.dim = d;
  ens.states.assign(n * d, 0.0);
  if (!opts.initial_state.empty()) {
    if (opts.initial_state.size() != d)
      throw std::invalid_argument("simulate: initial_state dimension mismatch");
    for (std::size_t p = 0; p < n; ++p)
      std::copy(opts.initial_state.begin(), opts.initial_state.end(),
                ens.particle(p).begin());
  }

  std::vector<GaussianStream> wstreams;
  wstreams.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint64_t label = opts.particle_labels.empty() ? p : opts.particle_labels[p];
    wstreams.emplace_back(stream_seed(opts.seed, label, 0, kTagBrownian));
  }

  SimulationResult result;
  result.truncation_bound =
      problem.family.decay_m * std::exp(-problem.family.decay_delta * opts.burn_in);
  if (std::isfinite(problem.coefficients.sup_bound))
    result.truncation_bound *= problem.coefficients.sup_bound;

  std::vector<double> dw(n * bdim, 0.0), dbh(n * std::max<std::size_t>(c, 1), 0.0);

  auto record = [&](std::size_t i) {
    const double t = rc.tb + static_cast<double>(i) * opts.dt;
    if (i < rc.burn_steps && !record_burn_in) return;
    auto st = stats_from_states(ens.states, d);
    result.stats.times.push_back(t);
    result.stats.w2_to_ref.push_back(st.w2_to_ref);
    std::vector<double> var(d, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      auto x = ens.particle(p);
      for (std::size_t j = 0; j < d; ++j) {
        const double dev = x[j] - st.mean[j];
        var[j] += dev * dev;
      }
    }
    for (auto& v : var) v /= static_cast<double>(n);
    result.stats.mean.push_back(st.mean);
    result.stats.var.push_back(std::move(var));
    if (opts.snapshot_stride > 0 && i >= rc.burn_steps &&
        (i - rc.burn_steps) % opts.snapshot_stride == 0) {
      result.snapshot_times.push_back(t);
      result.snapshots.emplace_back(d, ens.states);
    }
  };

  record(0);
  for (std::size_t i = 0; i < rc.steps; ++i) {
    // Brownian increments drawn per particle stream, in particle order.
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t j = 0; j < bdim; ++j)
        dw[p * bdim + j] = sqrt_dt * wstreams[p].normal();
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t k = 0; k < c; ++k) dbh[p * c + k] = noise.at(p, k, i);

    const MeasureStats* frozen_step = frozen ? &(*frozen)[i] : nullptr;
    mild_step(ens, opts.dt, problem, dw, dbh, frozen_step, opts.threads);
    record(i + 1);
  }

  // Snapshot grids should always include the final time.
  if (opts.snapshot_stride > 0 &&
      (result.snapshot_times.empty() ||
       result.snapshot_times.back() != result.stats.times.back())) {
    result.snapshot_times.push_back(result.stats.times.back());
    result.snapshots.emplace_back(d, ens.states);
  }

  result.final_ensemble = std::move(ens);
  return result;
}

}  // namespace

MeasureStats measure_stats(const measure::EmpiricalMeasure& m) {
  return stats_from_states(m.data(), m.dim());
}

void mild_step(ParticleEnsemble& ens, double dt, const McKeanVlasovProblem& problem,
               std::span<const double> dw, std::span<const double> dbh,
               const MeasureStats* frozen, int threads) {
  if (!(dt > 0.0)) throw std::invalid_argument("mild_step: dt must be positive");
  const std::size_t n = ens.size();
  const std::size_t d = ens.dim;
  const std::size_t bdim = problem.brownian_dim;
  const std::size_t c = problem.fbm_lambdas.size();
  if (bdim > 0 && !dw.empty() && dw.size() != n * bdim)
    throw std::invalid_argument("mild_step: Brownian increment size mismatch");
  if (c > 0 && !dbh.empty() && dbh.size() < n * c)
    throw std::invalid_argument("mild_step: fBm increment size mismatch");

  const MeasureStats local = frozen ? MeasureStats{} : stats_from_states(ens.states, d);
  const MeasureStats& mu = frozen ? *frozen : local;
  const double t = ens.t;

  auto stepper = problem.family.make_step
                     ? problem.family.make_step(t, t + dt)
                     : std::function<void(std::span<const double>, std::span<double>)>(
                           [&](std::span<const double> z, std::span<double> out) {
                             problem.family.apply(z, t + dt, t, out);
                           });

  std::atomic<bool> bad{false};
  parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> y(d), scratch(d), out(d);
    for (std::size_t p = lo; p < hi; ++p) {
      auto x = ens.particle(p);
      std::copy(x.begin(), x.end(), y.begin());
      if (problem.coefficients.drift) {
        problem.coefficients.drift(t, x, mu, scratch);
        for (std::size_t j = 0; j < d; ++j) y[j] += scratch[j] * dt;
      }
      if (problem.coefficients.diffusion && bdim > 0 && !dw.empty()) {
        problem.coefficients.diffusion(t, x, mu, dw.subspan(p * bdim, bdim), scratch);
        for (std::size_t j = 0; j < d; ++j) y[j] += scratch[j];
      }
      if (problem.coefficients.fbm_diffusion && c > 0 && !dbh.empty()) {
        problem.coefficients.fbm_diffusion(t, mu, dbh.subspan(p * c, c), scratch);
        for (std::size_t j = 0; j < d; ++j) y[j] += scratch[j];
      }
      stepper(y, out);
      if (!all_finite(out)) bad.store(true, std::memory_order_relaxed);
      std::copy(out.begin(), out.end(), ens.particle(p).begin());
    }
  });
  if (bad.load())
    throw blowup_error("mild_step: non-finite state at t = " + std::to_string(t + dt));
  ens.t = t + dt;
}

std::vector<double> MomentTrace::second_moment() const {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < mean[i].size(); ++j)
      acc += var[i][j] + mean[i][j] * mean[i][j];
    out[i] = acc;
  }
  return out;
}

SimulationResult simulate(const McKeanVlasovProblem& problem, const SimulateOptions& opts) {
  validate_options(problem, opts);
  const RunConfig rc = plan_grid(opts);
  const NoiseBlock noise = generate_fbm_noise(problem, opts, rc.steps);
  return run_particles(problem, opts, rc, noise, nullptr);
}

PicardResult picard_measure_iteration(const McKeanVlasovProblem& problem,
                                      const PicardOptions& opts) {
  if (opts.iterations < 1)
    throw std::invalid_argument("picard_measure_iteration: need iterations >= 1");
  SimulateOptions sim = opts.sim;
  if (sim.snapshot_stride == 0) sim.snapshot_stride = 1;
  validate_options(problem, sim);
  const RunConfig rc = plan_grid(sim);
  // Common random numbers: one noise block shared by every inner solve.
  const NoiseBlock noise = generate_fbm_noise(problem, sim, rc.steps);

  // Iterate 0: the Dirac-at-zero path.
  std::vector<MeasureStats> frozen(rc.steps + 1);
  for (auto& s : frozen) s.mean.assign(problem.dim, 0.0);

  PicardResult out;
  std::vector<measure::EmpiricalMeasure> prev_snapshots;
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    SimulationResult res =
        run_particles(problem, sim, rc, noise, &frozen, /*record_burn_in=*/true);

    double gap = 0.0;
    for (std::size_t q = 0; q < res.snapshots.size(); ++q) {
      if (prev_snapshots.empty()) {
        gap = std::max(gap, std::sqrt(res.snapshots[q].second_moment()));
      } else {
        gap = std::max(gap, measure::wasserstein2_coupling_bound(prev_snapshots[q],
                                                                 res.snapshots[q]));
      }
    }
    out.gaps.push_back(gap);

    // Refreeze on the new law path; stats cover the whole grid incl. burn-in.
    for (std::size_t i = 0; i <= rc.steps; ++i) {
      frozen[i].mean = res.stats.mean[i];
      frozen[i].w2_to_ref = res.stats.w2_to_ref[i];
      frozen[i].second_moment = res.stats.w2_to_ref[i] * res.stats.w2_to_ref[i];
    }
    prev_snapshots = res.snapshots;
    out.path.times = res.snapshot_times;
    out.path.measures = std::move(res.snapshots);
    out.stats = std::move(res.stats);
  }

  out.predicted_ratio = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto cc = beta_constants(problem.coefficients.lipschitz_k,
                                   problem.family.decay_m, problem.family.decay_delta,
                                   1.0, problem.hurst.value());
    if (cc.beta2) {
      const double r = *cc.beta2 / cc.delta;
      out.predicted_ratio = r * (1.0 + r);
    }
  } catch (const std::exception&) {
    // constants outside the formulas' domain: leave NaN
  }
  return out;
}

double empirical_lipschitz_ratio(const McKeanVlasovProblem& problem,
                                 std::span<const double> times, std::size_t probes,
                                 std::uint64_t seed) {
  GaussianStream g(stream_seed(seed, 0x4c49, 0, 0));
  const std::size_t d = problem.dim;
  const std::size_t cloud = 16;
  double worst = 0.0;
  std::vector<double> fx(d), fy(d);
  for (std::size_t i = 0; i < probes; ++i) {
    for (double t : times) {
      std::vector<double> x(d), y(d), ca(cloud * d), cb(cloud * d);
      for (auto& v : x) v = g.normal();
      for (auto& v : y) v = g.normal();
      for (auto& v : ca) v = g.normal();
      for (auto& v : cb) v = g.normal();
      measure::EmpiricalMeasure ma(d, ca), mb(d, cb);
      const double w2 = measure::wasserstein2_exact(ma, mb);
      const MeasureStats sa = measure_stats(ma), sb = measure_stats(mb);
      const double denom = squared_distance(x, y) + w2 * w2;
      if (denom < 1e-12) continue;

      double num = 0.0;
      if (problem.coefficients.drift) {
        problem.coefficients.drift(t, x, sa, fx);
        problem.coefficients.drift(t, y, sb, fy);
        num = std::max(num, squared_distance(fx, fy));
      }
      if (problem.coefficients.diffusion && problem.brownian_dim > 0) {
        double acc = 0.0;
        std::vector<double> e(problem.brownian_dim, 0.0);
        for (std::size_t j = 0; j < problem.brownian_dim; ++j) {
          e.assign(problem.brownian_dim, 0.0);
          e[j] = 1.0;
          problem.coefficients.diffusion(t, x, sa, e, fx);
          problem.coefficients.diffusion(t, y, sb, e, fy);
          acc += squared_distance(fx, fy);
        }
        num = std::max(num, acc);
      }
      if (problem.coefficients.fbm_diffusion && !problem.fbm_lambdas.empty()) {
        double acc = 0.0;
        std::vector<double> e(problem.fbm_lambdas.size(), 0.0);
        for (std::size_t j = 0; j < problem.fbm_lambdas.size(); ++j) {
          e.assign(problem.fbm_lambdas.size(), 0.0);
          e[j] = 1.0;
          problem.coefficients.fbm_diffusion(t, sa, e, fx);
          problem.coefficients.fbm_diffusion(t, sb, e, fy);
          acc += squared_distance(fx, fy);
        }
        num = std::max(num, acc);
      }
      worst = std::max(worst, num / denom);
    }
  }
  return worst;
}

}  // namespace meanfield::solver
