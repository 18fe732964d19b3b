#include "meanfield.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

TEST_CASE("scalar helpers") {
  CHECK(mf_fbm_cov(1, 2, 0.75) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::isnan(mf_fbm_cov(1, 2, 0.2)));  // invalid hurst
  CHECK(std::string(mf_last_error()).find("Hurst") != std::string::npos);

  double v = 0.0;
  CHECK(mf_fractional_kernel(1.0, 0.75, &v) == MF_OK);
  CHECK(v == doctest::Approx(0.375));
  CHECK(mf_fractional_kernel(0.0, 0.75, &v) == MF_INVALID_ARGUMENT);
  CHECK(mf_fractional_kernel(1.0, 0.75, nullptr) == MF_INVALID_ARGUMENT);

  CHECK(mf_fgn_autocov(1, 0.75, 1.0, &v) == MF_OK);
  CHECK(v == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)));
  CHECK(mf_fgn_autocov(0, 0.75, -1.0, &v) == MF_INVALID_ARGUMENT);
}

TEST_CASE("fgn generation through the C surface") {
  std::vector<double> a(128), b(128);
  REQUIRE(mf_fgn_generate(a.size(), 0.7, 0.5, 77, a.data()) == MF_OK);
  REQUIRE(mf_fgn_generate(b.size(), 0.7, 0.5, 77, b.data()) == MF_OK);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);

  std::vector<double> path(129);
  REQUIRE(mf_fbm_path(128, 0.7, 0.5, 77, path.data()) == MF_OK);
  CHECK(path[0] == 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i];
    CHECK(path[i + 1] == doctest::Approx(acc).epsilon(1e-12));
  }
  CHECK(mf_fgn_generate(0, 0.7, 0.5, 1, a.data()) == MF_INVALID_ARGUMENT);
}

TEST_CASE("constants and conditions structs") {
  mf_constants c{};
  REQUIRE(mf_beta_constants(0.01, 1.0, M_PI * M_PI - 1.0, 1.0, 0.8, &c) == MF_OK);
  CHECK(c.beta2_defined == 1);
  CHECK(c.beta1 == doctest::Approx(0.004509783998380721));
  CHECK(c.beta2 == doctest::Approx(0.0051129332824396785));
  CHECK(c.c_delta_h == doctest::Approx(0.4722348940770616));

  mf_condition_report rep{};
  REQUIRE(mf_check_conditions(&c, &rep) == MF_OK);
  CHECK(rep.cond1_holds == 1);
  CHECK(rep.cond1p_verdict == 1);
  CHECK(rep.cond1_lhs == doctest::Approx(1.3816728959958149e-3));
  CHECK(rep.cond1p_lhs == doctest::Approx(5.767879186273699e-4));

  // H = 0.7: beta2 undefined, cond1+ indeterminate
  REQUIRE(mf_beta_constants(0.01, 1.0, 1.0, 1.0, 0.7, &c) == MF_OK);
  CHECK(c.beta2_defined == 0);
  REQUIRE(mf_check_conditions(&c, &rep) == MF_OK);
  CHECK(rep.cond1p_verdict == -1);

  CHECK(mf_beta_constants(0.01, 1.0, -1.0, 1.0, 0.8, &c) == MF_INVALID_ARGUMENT);

  double k = 0.0;
  REQUIRE(mf_example1_k(0.01, 0.01, 0.01, &k) == MF_OK);
  CHECK(k == doctest::Approx(0.01));
  double k1 = 0.0, k2 = 0.0;
  REQUIRE(mf_example2_constants(1.0, 1.0, 8.0, &k1, &k2) == MF_OK);
  CHECK(k1 == doctest::Approx(1.0));
  CHECK(k2 == doctest::Approx(1.0));
}

TEST_CASE("wasserstein through the C surface") {
  const double a[] = {0.0, 1.0};
  const double b[] = {1.0, 2.0};
  double v = 0.0;
  REQUIRE(mf_wasserstein2_1d(a, 2, b, 2, &v) == MF_OK);
  CHECK(v == doctest::Approx(1.0));
  const double p[] = {0.0, 0.0, 1.0, 0.0};  // two samples in R^2
  const double q[] = {1.0, 0.0, 0.0, 0.0};
  REQUIRE(mf_wasserstein2_exact(p, q, 2, 2, &v) == MF_OK);
  CHECK(v == doctest::Approx(0.0));
  REQUIRE(mf_wasserstein2_coupling_bound(p, q, 2, 2, &v) == MF_OK);
  CHECK(v == doctest::Approx(1.0));  // paired order is not optimal
}

TEST_CASE("config and command round trip") {
  const fs::path dir = fs::temp_directory_path() / "mf_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  mf_config* cfg = mf_config_new();
  REQUIRE(cfg != nullptr);
  CHECK(mf_config_set(cfg, "fbm.n", "32") == MF_OK);
  CHECK(mf_config_set(cfg, "fbm.h", "0.75") == MF_OK);
  CHECK(mf_config_set(cfg, "fbm.validation_paths", "64") == MF_OK);
  CHECK(mf_config_set(cfg, "fbm.validation_lags", "3") == MF_OK);
  CHECK(mf_config_set(cfg, "run.seed", "5") == MF_OK);
  CHECK(mf_config_set(cfg, "output.dir", dir.string().c_str()) == MF_OK);
  CHECK(mf_config_set(cfg, "bogus.key", "1") == MF_CONFIG_ERROR);
  CHECK(std::string(mf_last_error()).find("unknown config key") != std::string::npos);

  mf_result* res = nullptr;
  REQUIRE(mf_run_command(cfg, "fbm", &res) == MF_OK);
  REQUIRE(res != nullptr);
  CHECK(mf_result_status(res) == MF_OK);
  CHECK(std::string(mf_result_json(res)).find("\"pass\"") != std::string::npos);
  REQUIRE(mf_result_file_count(res) == 2);
  CHECK(fs::exists(mf_result_file(res, 0)));
  CHECK(fs::exists(mf_result_file(res, 1)));
  mf_result_free(res);

  // bad command surfaces as a config-error result
  res = nullptr;
  REQUIRE(mf_run_command(cfg, "nope", &res) == MF_OK);
  CHECK(mf_result_status(res) == MF_CONFIG_ERROR);
  mf_result_free(res);

  mf_config_free(cfg);
  fs::remove_all(dir);
}

TEST_CASE("config load from file") {
  const fs::path dir = fs::temp_directory_path() / "mf_capi_cfg";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg_path = dir / "exp.cfg";
  {
    std::ofstream f(cfg_path);
    f << "[scenario]\nkind = constants\nk = 0.01\nm = 1\ndelta = 5\nhurst = 0.8\n";
    f << "[output]\ndir = " << (dir / "out").string() << "\n";
  }
  mf_config* cfg = mf_config_new();
  REQUIRE(mf_config_load(cfg, cfg_path.string().c_str()) == MF_OK);
  CHECK(mf_config_load(cfg, "/nonexistent/path.cfg") == MF_CONFIG_ERROR);
  REQUIRE(mf_config_load(cfg, cfg_path.string().c_str()) == MF_OK);

  mf_result* res = nullptr;
  REQUIRE(mf_run_command(cfg, "check", &res) == MF_OK);
  CHECK(mf_result_status(res) == MF_OK);
  mf_result_free(res);
  mf_config_free(cfg);
  fs::remove_all(dir);
}
