#include "meanfield.h"

#include <cmath>
#include <cstring>
#include <string>

#include "meanfield/commands.hpp"
#include "meanfield/conditions.hpp"
#include "meanfield/config.hpp"
#include "meanfield/fbm.hpp"
#include "meanfield/measure.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Exceptions must not cross the C boundary.
template <typename Fn>
mf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const meanfield::config_error& e) {
    set_error(e.what());
    return MF_CONFIG_ERROR;
  } catch (const meanfield::blowup_error& e) {
    set_error(e.what());
    return MF_RUNTIME_BLOWUP;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MF_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return MF_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MF_IO_ERROR;
  }
}

}  // namespace

struct mf_config {
  meanfield::cli::Config cfg;
};

struct mf_result {
  meanfield::cli::CommandResult res;
};

extern "C" {

const char* mf_last_error(void) { return g_last_error.c_str(); }

double mf_fbm_cov(double t, double s, double hurst) {
  try {
    return meanfield::fbm::fbm_cov(t, s, meanfield::fbm::HurstParameter(hurst));
  } catch (const std::exception& e) {
    set_error(e.what());
    return std::nan("");
  }
}

mf_status mf_fractional_kernel(double u, double hurst, double* out) {
  if (!out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    *out = meanfield::fbm::fractional_kernel(u, meanfield::fbm::HurstParameter(hurst));
    return MF_OK;
  });
}

mf_status mf_fgn_autocov(long lag, double hurst, double dt, double* out) {
  if (!out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    *out = meanfield::fbm::fgn_autocov(lag, meanfield::fbm::HurstParameter(hurst), dt);
    return MF_OK;
  });
}

mf_status mf_fgn_generate(size_t n, double hurst, double dt, uint64_t seed,
                          double* out_values) {
  if (!out_values) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    const auto seq = meanfield::fbm::generate_fgn(
        n, meanfield::fbm::HurstParameter(hurst), dt, seed);
    std::memcpy(out_values, seq.values.data(), n * sizeof(double));
    return MF_OK;
  });
}

mf_status mf_fbm_path(size_t n_increments, double hurst, double dt, uint64_t seed,
                      double* out_values) {
  if (!out_values) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    const auto path = meanfield::fbm::cumulate_to_fbm(meanfield::fbm::generate_fgn(
        n_increments, meanfield::fbm::HurstParameter(hurst), dt, seed));
    std::memcpy(out_values, path.values.data(), (n_increments + 1) * sizeof(double));
    return MF_OK;
  });
}

mf_status mf_beta_constants(double k, double m, double delta, double ctilde2,
                            double hurst, mf_constants* out) {
  if (!out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    const auto c = meanfield::solver::beta_constants(k, m, delta, ctilde2, hurst);
    out->k = c.k;
    out->m = c.m;
    out->delta = c.delta;
    out->ctilde2 = c.ctilde2;
    out->hurst = c.hurst;
    out->beta1 = c.beta1;
    out->beta2_defined = c.beta2.has_value() ? 1 : 0;
    out->beta2 = c.beta2.value_or(std::nan(""));
    out->c_delta_h = c.c_delta_h.value_or(std::nan(""));
    return MF_OK;
  });
}

mf_status mf_check_conditions(const mf_constants* c, mf_condition_report* out) {
  if (!c || !out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    const auto cc = meanfield::solver::beta_constants(c->k, c->m, c->delta, c->ctilde2,
                                                      c->hurst);
    const auto rep = meanfield::solver::check_existence_conditions(cc);
    out->cond1_lhs = rep.cond1_lhs;
    out->cond1_holds = rep.cond1 == meanfield::solver::Verdict::holds ? 1 : 0;
    out->cond1p_lhs = rep.cond1p_lhs.value_or(std::nan(""));
    out->cond1p_verdict = rep.cond1p == meanfield::solver::Verdict::holds    ? 1
                          : rep.cond1p == meanfield::solver::Verdict::fails ? 0
                                                                            : -1;
    out->cond2_lhs = rep.cond2_lhs;
    out->cond2_holds = rep.cond2 == meanfield::solver::Verdict::holds ? 1 : 0;
    return MF_OK;
  });
}

mf_status mf_example1_k(double c1, double c2, double c3, double* out) {
  if (!out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    *out = meanfield::solver::example1_lipschitz_k(c1, c2, c3);
    return MF_OK;
  });
}

mf_status mf_example2_constants(double g1_weighted_norm, double g2_sup_norm, double nu,
                                double* out_k1, double* out_k2) {
  if (!out_k1 || !out_k2) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    const auto e = meanfield::solver::example2_constants(g1_weighted_norm, g2_sup_norm, nu);
    *out_k1 = e.k1;
    *out_k2 = e.k2;
    return MF_OK;
  });
}

mf_status mf_wasserstein2_1d(const double* a, size_t na, const double* b, size_t nb,
                             double* out) {
  if (!a || !b || !out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    meanfield::measure::EmpiricalMeasure ma(1, std::vector<double>(a, a + na));
    meanfield::measure::EmpiricalMeasure mb(1, std::vector<double>(b, b + nb));
    *out = meanfield::measure::wasserstein2_1d(ma, mb);
    return MF_OK;
  });
}

mf_status mf_wasserstein2_exact(const double* a, const double* b, size_t n, size_t dim,
                                double* out) {
  if (!a || !b || !out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    meanfield::measure::EmpiricalMeasure ma(dim, std::vector<double>(a, a + n * dim));
    meanfield::measure::EmpiricalMeasure mb(dim, std::vector<double>(b, b + n * dim));
    *out = meanfield::measure::wasserstein2_exact(ma, mb);
    return MF_OK;
  });
}

mf_status mf_wasserstein2_coupling_bound(const double* a, const double* b, size_t n,
                                         size_t dim, double* out) {
  if (!a || !b || !out) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    meanfield::measure::EmpiricalMeasure ma(dim, std::vector<double>(a, a + n * dim));
    meanfield::measure::EmpiricalMeasure mb(dim, std::vector<double>(b, b + n * dim));
    *out = meanfield::measure::wasserstein2_coupling_bound(ma, mb);
    return MF_OK;
  });
}

mf_config* mf_config_new(void) {
  try {
    return new mf_config{};
  } catch (...) {
    return nullptr;
  }
}

void mf_config_free(mf_config* cfg) { delete cfg; }

mf_status mf_config_load(mf_config* cfg, const char* path) {
  if (!cfg || !path) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    cfg->cfg = meanfield::cli::Config::from_file(path);
    return MF_OK;
  });
}

mf_status mf_config_set(mf_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return MF_INVALID_ARGUMENT;
  return guarded([&] {
    cfg->cfg.set(key, value);
    return MF_OK;
  });
}

mf_status mf_run_command(const mf_config* cfg, const char* command, mf_result** out) {
  if (!cfg || !command || !out) return MF_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    auto res = meanfield::cli::run_command(command, cfg->cfg);
    *out = new mf_result{std::move(res)};
    return MF_OK;
  });
}

mf_status mf_result_status(const mf_result* res) {
  if (!res) return MF_INVALID_ARGUMENT;
  switch (res->res.exit_code) {
    case meanfield::cli::kExitOk: return MF_OK;
    case meanfield::cli::kExitConditionFail: return MF_CONDITION_FAIL;
    case meanfield::cli::kExitIndeterminate: return MF_INDETERMINATE;
    case meanfield::cli::kExitBlowup: return MF_RUNTIME_BLOWUP;
    default: return MF_CONFIG_ERROR;
  }
}

const char* mf_result_json(const mf_result* res) {
  return res ? res->res.summary_json.c_str() : "";
}

size_t mf_result_file_count(const mf_result* res) {
  return res ? res->res.files.size() : 0;
}

const char* mf_result_file(const mf_result* res, size_t index) {
  if (!res || index >= res->res.files.size()) return "";
  return res->res.files[index].c_str();
}

void mf_result_free(mf_result* res) { delete res; }

}  // extern "C"
