#include "meanfield/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "meanfield/automorphy.hpp"
#include "meanfield/conditions.hpp"
#include "meanfield/presets.hpp"

namespace meanfield::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string out_dir(const Config& cfg) {
  const std::string dir = cfg.get_string("output.dir", "out");
  fs::create_directories(dir);
  return dir;
}

struct ScenarioBits {
  std::string kind;
  solver::McKeanVlasovProblem problem;
  solver::ContractionConstants constants;
  bool has_constants = false;
  double driver_tail = 0.0;  // eigenvalue mass dropped by the driver truncation
};

solver::BetaVariant variant_of(const Config& cfg) {
  const std::string v = cfg.get_string("scenario.beta_variant", "definitive");
  if (v == "definitive") return solver::BetaVariant::definitive;
  if (v == "alternate") return solver::BetaVariant::alternate;
  throw config_error("scenario.beta_variant must be definitive or alternate");
}

solver::ContractionConstants scenario_constants(const Config& cfg) {
  const std::string kind = cfg.get_string("scenario.kind", "");
  const double hurst = cfg.get_double("scenario.hurst", 0.75);
  const double ctilde2 = cfg.get_double("scenario.ctilde2", 1.0);
  const auto variant = variant_of(cfg);
  if (kind == "example1") {
    return solver::example1_constants(cfg.get_double("scenario.c1", 0.05),
                                      cfg.get_double("scenario.c2", 0.05),
                                      cfg.get_double("scenario.c3", 0.05),
                                      cfg.get_double("scenario.hurst", 0.8), ctilde2,
                                      variant);
  }
  if (kind == "example2") {
    presets::Example2Options o;
    o.nu = cfg.get_double("scenario.nu", 4.0);
    o.g2_amp = cfg.get_double("scenario.g2_amp", 0.05);
    const auto e2 = presets::example2_scenario_constants(o);
    return solver::beta_constants(e2.k, e2.m, e2.delta, ctilde2, hurst, variant);
  }
  if (kind == "ou") {
    const double kappa = cfg.get_double("scenario.kappa", 0.0);
    return solver::beta_constants(2.0 * kappa * kappa, 1.0,
                                  cfg.get_double("scenario.delta", 1.0), ctilde2, hurst,
                                  variant);
  }
  if (kind == "constants") {
    return solver::beta_constants(cfg.get_double("scenario.k", 0.0),
                                  cfg.get_double("scenario.m", 1.0),
                                  cfg.get_double("scenario.delta", 1.0), ctilde2, hurst,
                                  variant);
  }
  throw config_error("scenario.kind must be example1 | example2 | ou | constants");
}

ScenarioBits build_scenario(const Config& cfg) {
  ScenarioBits bits;
  bits.kind = cfg.get_string("scenario.kind", "");
  if (bits.kind == "example1") {
    presets::Example1Options o;
    o.c1 = cfg.get_double("scenario.c1", 0.05);
    o.c2 = cfg.get_double("scenario.c2", 0.05);
    o.c3 = cfg.get_double("scenario.c3", 0.05);
    o.hurst = cfg.get_double("scenario.hurst", 0.8);
    o.modes = static_cast<std::size_t>(cfg.get_int("scenario.modes", 16));
    o.fbm_modes = static_cast<std::size_t>(cfg.get_int("scenario.fbm_modes", 8));
    o.lambda_decay = cfg.get_double("scenario.lambda_decay", 2.0);
    o.bounded_b = cfg.get_string("scenario.b_variant", "literal") == "bounded";
    bits.problem = presets::example1_problem(o);
    presets::example1_lambdas(o, &bits.driver_tail);
  } else if (bits.kind == "example2") {
    presets::Example2Options o;
    o.nu = cfg.get_double("scenario.nu", 4.0);
    o.g2_amp = cfg.get_double("scenario.g2_amp", 0.05);
    o.x_max = cfg.get_double("scenario.x_max", 20.0);
    o.nodes = static_cast<std::size_t>(cfg.get_int("scenario.nodes", 2001));
    o.hurst = cfg.get_double("scenario.hurst", 0.8);
    bits.problem = presets::example2_problem(o);
  } else if (bits.kind == "ou") {
    presets::OuOptions o;
    o.delta = cfg.get_double("scenario.delta", 1.0);
    o.sigma_w = cfg.get_double("scenario.sigma_w", 1.0);
    o.sigma_fbm = cfg.get_double("scenario.sigma_fbm", 0.0);
    o.kappa = cfg.get_double("scenario.kappa", 0.0);
    o.hurst = cfg.get_double("scenario.hurst", 0.75);
    bits.problem = presets::ou_problem(o);
  } else {
    throw config_error("scenario.kind must be example1 | example2 | ou");
  }
  try {
    bits.constants = scenario_constants(cfg);
    bits.has_constants = true;
  } catch (const std::exception&) {
    bits.has_constants = false;
  }
  return bits;
}

solver::SimulateOptions sim_options(const Config& cfg) {
  solver::SimulateOptions o;
  o.t0 = cfg.get_double("run.t0", 0.0);
  o.t1 = cfg.get_double("run.t1", 1.0);
  o.dt = cfg.get_double("run.dt", 1e-2);
  o.burn_in = cfg.get_double("run.burn_in", 0.0);
  o.particles = static_cast<std::size_t>(cfg.get_int("run.particles", 1000));
  o.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));
  o.threads = static_cast<int>(cfg.get_int("run.threads", 1));
  o.snapshot_stride = static_cast<std::size_t>(cfg.get_int("run.snapshot_stride", 0));
  return o;
}

ordered_json condition_json(const solver::ContractionConstants& c) {
  const auto rep = solver::check_existence_conditions(c);
  ordered_json j = ordered_json::parse(rep.to_json());
  ordered_json out;
  out["k"] = c.k;
  out["m"] = c.m;
  out["delta"] = c.delta;
  out["ctilde2"] = c.ctilde2;
  out["hurst"] = c.hurst;
  out["beta1"] = c.beta1;
  out["beta2"] = c.beta2 ? ordered_json(*c.beta2) : ordered_json(nullptr);
  out["beta2_alternate"] =
      c.beta2_alternate ? ordered_json(*c.beta2_alternate) : ordered_json(nullptr);
  out["c_delta_h"] = c.c_delta_h ? ordered_json(*c.c_delta_h) : ordered_json(nullptr);
  out["variant"] =
      c.variant == solver::BetaVariant::definitive ? "definitive" : "alternate";
  out["conditions"] = j;
  return out;
}

int condition_exit(const solver::ConditionReport& rep) {
  if (rep.cond1 == solver::Verdict::fails || rep.cond2 == solver::Verdict::fails ||
      rep.cond1p == solver::Verdict::fails)
    return kExitConditionFail;
  if (rep.any_indeterminate()) return kExitIndeterminate;
  return kExitOk;
}

std::vector<double> shift_family(const Config& cfg) {
  const std::string family = cfg.get_string("diagnose.shift_family", "two_pi_integers");
  const std::size_t count =
      static_cast<std::size_t>(cfg.get_int("diagnose.shift_count", 8));
  std::vector<double> shifts;
  if (family == "list") {
    shifts = cfg.get_double_list("diagnose.shift_list", {});
    if (shifts.empty()) throw config_error("diagnose.shift_list required for list family");
    return shifts;
  }
  if (family == "two_pi_integers") {
    for (std::size_t i = 1; i <= count; ++i)
      shifts.push_back(2.0 * M_PI * static_cast<double>(i));
    return shifts;
  }
  // continued-fraction denominators: shifts 2 pi q make both component
  // frequencies nearly periodic at once
  if (family == "sqrt2_convergents") {
    static const double qs[] = {1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741};
    for (std::size_t i = 0; i < count && i < std::size(qs); ++i)
      shifts.push_back(2.0 * M_PI * qs[i]);
    return shifts;
  }
  if (family == "pi_convergents") {
    static const double qs[] = {1, 7, 106, 113, 33102, 33215, 66317};
    for (std::size_t i = 0; i < count && i < std::size(qs); ++i)
      shifts.push_back(2.0 * M_PI * qs[i]);
    return shifts;
  }
  throw config_error("unknown diagnose.shift_family: " + family);
}

std::vector<double> eval_grid(const Config& cfg, double d0, double d1, std::size_t dn) {
  const double t0 = cfg.get_double("diagnose.grid_t0", d0);
  const double t1 = cfg.get_double("diagnose.grid_t1", d1);
  const auto n = static_cast<std::size_t>(cfg.get_int("diagnose.grid_points", (long)dn));
  if (!(t1 > t0) || n < 2) throw config_error("diagnose: bad evaluation grid");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  return grid;
}

}  // namespace

CommandResult cmd_fbm(const Config& cfg) {
  CommandResult result;
  const std::string dir = out_dir(cfg);
  const auto n = static_cast<std::size_t>(cfg.get_int("fbm.n", 512));
  const fbm::HurstParameter h(cfg.get_double("fbm.h", 0.75));
  const double dt = cfg.get_double("fbm.dt", 1.0);
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));
  const auto paths = static_cast<std::size_t>(cfg.get_int("fbm.validation_paths", 2000));
  const auto lags = static_cast<std::size_t>(cfg.get_int("fbm.validation_lags", 16));
  const int threads = static_cast<int>(cfg.get_int("run.threads", 1));
  if (n < 1 || !(dt > 0.0) || paths < 2 || lags >= n)
    throw config_error("fbm: need n >= 1, dt > 0, validation_paths >= 2, lags < n");

  const fbm::FgnSynthesizer synth(n, h, dt);
  const auto exported = synth.generate(seed);
  const std::string path_csv = dir + "/fbm_path.csv";
  write_file(path_csv, fbm::fbm_path_csv(fbm::cumulate_to_fbm(exported)));
  result.files.push_back(path_csv);

  // per-path autocovariance estimates reduced in fixed path order
  std::vector<double> per_path(paths * (lags + 1));
  parallel_for(paths, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const auto seq = synth.generate(stream_seed(seed, p, 0, 0xFA));
      for (std::size_t k = 0; k <= lags; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) acc += seq.values[i] * seq.values[i + k];
        per_path[p * (lags + 1) + k] = acc / static_cast<double>(n - k);
      }
    }
  });

  ordered_json report;
  report["h"] = h.value();
  report["n"] = n;
  report["dt"] = dt;
  report["paths"] = paths;
  report["min_embedding_eigenvalue"] = synth.min_embedding_eigenvalue();
  report["conditional_fallback"] = synth.uses_conditional_fallback();
  bool pass = true;
  ordered_json lag_rows = ordered_json::array();
  for (std::size_t k = 0; k <= lags; ++k) {
    double mean = 0.0;
    for (std::size_t p = 0; p < paths; ++p) mean += per_path[p * (lags + 1) + k];
    mean /= static_cast<double>(paths);
    double var = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
      const double d = per_path[p * (lags + 1) + k] - mean;
      var += d * d;
    }
    const double se = std::sqrt(var / static_cast<double>(paths - 1) /
                                static_cast<double>(paths));
    const double expected = fbm::fgn_autocov(static_cast<long>(k), h, dt);
    const bool ok = std::abs(mean - expected) <= 3.0 * se;
    pass = pass && ok;
    ordered_json row;
    row["lag"] = k;
    row["empirical"] = mean;
    row["expected"] = expected;
    row["se"] = se;
    row["within_3se"] = ok;
    lag_rows.push_back(row);
  }
  report["autocovariance"] = lag_rows;

  ordered_json whiteness;
  whiteness["applicable"] = h.is_brownian();
  if (h.is_brownian()) {
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
      num += per_path[p * (lags + 1) + 1];
      den += per_path[p * (lags + 1)];
    }
    const double rho1 = num / den;
    const double threshold =
        4.0 / std::sqrt(static_cast<double>(paths) * static_cast<double>(n - 1));
    whiteness["lag1_autocorr"] = rho1;
    whiteness["threshold"] = threshold;
    whiteness["pass"] = std::abs(rho1) < threshold;
    pass = pass && std::abs(rho1) < threshold;
  }
  report["whiteness"] = whiteness;
  report["pass"] = pass;

  const std::string report_path = dir + "/fbm_covariance.json";
  write_file(report_path, report.dump(2) + "\n");
  result.files.push_back(report_path);
  result.exit_code = pass ? kExitOk : kExitConditionFail;
  result.summary_json = report.dump(2);
  return result;
}

CommandResult cmd_check(const Config& cfg) {
  CommandResult result;
  const std::string dir = out_dir(cfg);
  const auto constants = scenario_constants(cfg);
  const auto rep = solver::check_existence_conditions(constants);
  ordered_json j = condition_json(constants);
  const std::string path = dir + "/conditions.json";
  write_file(path, j.dump(2) + "\n");
  result.files.push_back(path);
  result.exit_code = condition_exit(rep);
  result.summary_json = j.dump(2);
  return result;
}

CommandResult cmd_simulate(const Config& cfg) {
  CommandResult result;
  const std::string dir = out_dir(cfg);
  auto bits = build_scenario(cfg);
  auto opts = sim_options(cfg);
  const auto picard_iters =
      static_cast<std::size_t>(cfg.get_int("run.picard_iterations", 0));

  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "0x%016llx",
                static_cast<unsigned long long>(cfg.content_hash()));
  ordered_json manifest;
  manifest["problem_hash"] = std::string(hash_buf);
  manifest["scenario"] = bits.kind;
  manifest["seed"] = opts.seed;
  manifest["particles"] = opts.particles;
  manifest["dt"] = opts.dt;
  manifest["burn_in"] = opts.burn_in;
  manifest["t0"] = opts.t0;
  manifest["t1"] = opts.t1;
  if (!bits.problem.fbm_lambdas.empty())
    manifest["driver_tail_bound"] = std::isfinite(bits.driver_tail)
                                        ? ordered_json(bits.driver_tail)
                                        : ordered_json("infinite");
  if (bits.has_constants) manifest["constants"] = condition_json(bits.constants);

  auto write_stats_csv = [&](const solver::MomentTrace& stats, const std::string& path) {
    std::ostringstream os;
    const std::size_t d = stats.mean.empty() ? 0 : stats.mean.front().size();
    os << "t";
    for (std::size_t j = 1; j <= d; ++j) os << ",mean_" << j;
    for (std::size_t j = 1; j <= d; ++j) os << ",var_" << j;
    os << ",w2_to_reference\n";
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
      if (stats.times[i] < opts.t0 - 0.5 * opts.dt) continue;
      os << fmt17(stats.times[i]);
      for (std::size_t j = 0; j < d; ++j) os << "," << fmt17(stats.mean[i][j]);
      for (std::size_t j = 0; j < d; ++j) os << "," << fmt17(stats.var[i][j]);
      os << "," << fmt17(stats.w2_to_ref[i]) << "\n";
    }
    write_file(path, os.str());
    result.files.push_back(path);
  };

  try {
    if (picard_iters > 0) {
      solver::PicardOptions popts;
      popts.sim = opts;
      popts.iterations = picard_iters;
      const auto pres = solver::picard_measure_iteration(bits.problem, popts);
      write_stats_csv(pres.stats, dir + "/trajectory.csv");
      std::ostringstream gaps;
      gaps << "k,gap\n";
      for (std::size_t k = 0; k < pres.gaps.size(); ++k)
        gaps << k << "," << fmt17(pres.gaps[k]) << "\n";
      const std::string gaps_path = dir + "/gaps.csv";
      write_file(gaps_path, gaps.str());
      result.files.push_back(gaps_path);
      ordered_json pj;
      pj["iterations"] = picard_iters;
      pj["gaps"] = pres.gaps;
      pj["predicted_ratio"] = std::isfinite(pres.predicted_ratio)
                                  ? ordered_json(pres.predicted_ratio)
                                  : ordered_json(nullptr);
      manifest["picard"] = pj;
      manifest["truncation_bound"] =
          bits.problem.family.decay_m *
          std::exp(-bits.problem.family.decay_delta * opts.burn_in);
    } else {
      const auto res = solver::simulate(bits.problem, opts);
      write_stats_csv(res.stats, dir + "/trajectory.csv");
      manifest["truncation_bound"] = res.truncation_bound;
    }
    manifest["blowup"] = false;
    result.exit_code = kExitOk;
  } catch (const blowup_error& e) {
    manifest["blowup"] = true;
    manifest["blowup_message"] = e.what();
    result.exit_code = kExitBlowup;
  }

  const std::string manifest_path = dir + "/manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");
  result.files.push_back(manifest_path);
  result.summary_json = manifest.dump(2);
  return result;
}

CommandResult cmd_diagnose(const Config& cfg) {
  CommandResult result;
  const std::string dir = out_dir(cfg);
  const std::string mode = cfg.get_string("diagnose.mode", "recurrence");
  ordered_json j;
  j["mode"] = mode;
  bool passed = false;

  if (mode == "recurrence") {
    const std::string curve = cfg.get_string("diagnose.curve", "sin");
    std::function<double(double)> f;
    if (curve == "sin")
      f = [](double t) { return std::sin(t); };
    else if (curve == "drift_modulation")
      f = presets::drift_modulation;
    else if (curve == "heat_modulation")
      f = evolution::heat_modulation;
    else if (curve == "ramp")
      f = automorphy::example1_b_literal;
    else
      throw config_error("unknown diagnose.curve: " + curve);
    const auto shifts = shift_family(cfg);
    const auto grid = eval_grid(cfg, 0.0, 10.0, 201);
    const double tol = cfg.get_double("diagnose.tol", 1e-6);
    const auto rep = automorphy::aa_recurrence_test_scalar(f, shifts, grid, tol);
    j["curve"] = curve;
    j["report"] = ordered_json::parse(rep.to_json());
    passed = rep.passed;
  } else if (mode == "sbc0") {
    const std::string trace_kind = cfg.get_string("diagnose.trace", "ramp_squared");
    const auto q_list = cfg.get_double_list("diagnose.q_list", {2, 4, 8, 16});
    const double slope_tol = cfg.get_double("diagnose.slope_tol", 1e-3);
    const double qmax = q_list.back();
    const double window = qmax + 1.0;
    automorphy::SecondMomentTrace trace;
    if (trace_kind == "simulate") {
      // E||x(t)||^2 of the configured scenario over the symmetric window
      auto bits = build_scenario(cfg);
      auto opts = sim_options(cfg);
      opts.t0 = -window;
      opts.t1 = window;
      const auto res = solver::simulate(bits.problem, opts);
      trace.times = res.stats.times;
      trace.values = res.stats.second_moment();
    } else {
      const std::size_t pts = 4001;
      for (std::size_t i = 0; i < pts; ++i) {
        const double t = -window + 2.0 * window * static_cast<double>(i) /
                                       static_cast<double>(pts - 1);
        trace.times.push_back(t);
        if (trace_kind == "ramp_squared")
          trace.values.push_back(t >= 0.0 ? t * t : 0.0);
        else if (trace_kind == "constant")
          trace.values.push_back(1.0);
        else
          throw config_error("unknown diagnose.trace: " + trace_kind);
      }
    }
    const std::string rho_kind = cfg.get_string("diagnose.rho", "exp_neg");
    automorphy::WeightFunction rho;
    if (rho_kind == "exp_neg")
      rho = {[](double t) { return std::exp(-t); }, "exp(-t)"};
    else if (rho_kind == "one")
      rho = {[](double) { return 1.0; }, "1"};
    else
      throw config_error("unknown diagnose.rho: " + rho_kind);
    const auto rep = automorphy::sbc0_membership(trace, rho, q_list, slope_tol);
    j["trace"] = trace_kind;
    j["rho"] = rho_kind;
    j["report"] = ordered_json::parse(rep.to_json());
    passed = rep.member;
  } else if (mode == "distribution") {
    auto bits = build_scenario(cfg);
    auto opts = sim_options(cfg);
    if (opts.snapshot_stride == 0) opts.snapshot_stride = 1;
    const auto res = solver::simulate(bits.problem, opts);
    measure::MeasurePath path;
    path.times = res.snapshot_times;
    for (const auto& m : res.snapshots) {
      // 1-D projection onto the first coordinate for the d_BL estimate
      std::vector<double> first;
      first.reserve(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) first.push_back(m.sample(i)[0]);
      path.measures.emplace_back(1, std::move(first));
    }
    const auto shifts = cfg.get_double_list("diagnose.shift_list", {});
    if (shifts.empty())
      throw config_error("diagnose.shift_list required for distribution mode");
    const double g0 = cfg.get_double("diagnose.grid_t0", opts.t0);
    const double g1 = cfg.get_double("diagnose.grid_t1", opts.t0 + 1.0);
    std::vector<double> grid;
    for (double t : path.times)
      if (t >= g0 - 1e-12 && t <= g1 + 1e-12) grid.push_back(t);
    if (grid.empty()) throw config_error("diagnose: empty distribution grid");
    const double tol = cfg.get_double("diagnose.tol", 0.1);
    measure::DblOptions dict;
    dict.centers = static_cast<std::size_t>(cfg.get_int("diagnose.dbl_centers", 129));
    dict.widths = cfg.get_double_list("diagnose.dbl_widths", dict.widths);
    const auto rep = automorphy::aa_distribution_test(path, shifts, grid, tol, dict);
    j["projection"] = "coordinate_1";
    j["dbl_centers"] = dict.centers;
    j["report"] = ordered_json::parse(rep.to_json());
    passed = rep.passed;
  } else if (mode == "bi_automorphy") {
    const auto modes = static_cast<std::size_t>(cfg.get_int("scenario.modes", 16));
    auto fam = std::make_shared<const evolution::SpectralHeatFamily>(modes);
    auto spec = evolution::heat_family_spec(fam);
    Config shifted = cfg;
    if (!cfg.has("diagnose.shift_family"))
      shifted.set("diagnose.shift_family", "pi_convergents");
    if (!cfg.has("diagnose.shift_count")) shifted.set("diagnose.shift_count", "4");
    const auto shifts = shift_family(shifted);
    GaussianStream g(stream_seed(static_cast<std::uint64_t>(cfg.get_int("run.seed", 1)),
                                 0xB1A, 0, 0));
    const auto n_probes = static_cast<std::size_t>(cfg.get_int("diagnose.probes", 4));
    std::vector<std::vector<double>> probes(n_probes, std::vector<double>(modes));
    for (auto& p : probes) {
      for (auto& v : p) v = g.normal();
      const double norm = std::sqrt(squared_norm(p));
      for (auto& v : p) v /= norm;
    }
    const std::vector<std::pair<double, double>> pairs = {
        {0.0, -0.5}, {0.5, 0.0}, {1.0, 0.25}, {2.0, 1.0}};
    const double tol = cfg.get_double("diagnose.tol", 1e-6);
    const auto rep = evolution::check_bi_automorphy(spec, shifts, probes, pairs, tol);
    j["modes"] = modes;
    j["report"] = ordered_json::parse(rep.to_json());
    passed = rep.subsequence_below_tol;
  } else {
    throw config_error("diagnose.mode must be recurrence | distribution | sbc0 | bi_automorphy");
  }

  j["passed"] = passed;
  const std::string path = dir + "/diagnosis.json";
  write_file(path, j.dump(2) + "\n");
  result.files.push_back(path);
  result.exit_code = passed ? kExitOk : kExitConditionFail;
  result.summary_json = j.dump(2);
  return result;
}

CommandResult run_command(const std::string& name, const Config& cfg) {
  try {
    if (name == "fbm") return cmd_fbm(cfg);
    if (name == "check") return cmd_check(cfg);
    if (name == "simulate") return cmd_simulate(cfg);
    if (name == "diagnose") return cmd_diagnose(cfg);
    throw config_error("unknown command: " + name);
  } catch (const config_error& e) {
    CommandResult r;
    r.exit_code = kExitConfigError;
    ordered_json j;
    j["error"] = e.what();
    r.summary_json = j.dump(2);
    return r;
  } catch (const blowup_error& e) {
    CommandResult r;
    r.exit_code = kExitBlowup;
    ordered_json j;
    j["error"] = e.what();
    r.summary_json = j.dump(2);
    return r;
  } catch (const std::invalid_argument& e) {
    CommandResult r;
    r.exit_code = kExitConfigError;
    ordered_json j;
    j["error"] = e.what();
    r.summary_json = j.dump(2);
    return r;
  } catch (const std::exception& e) {
    CommandResult r;
    r.exit_code = kExitConfigError;
    ordered_json j;
    j["error"] = e.what();
    r.summary_json = j.dump(2);
    return r;
  }
}

}  // namespace meanfield::cli
