// Exercises the shared library exactly as an external client would: only
// the C header, no C++ internals.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "relaylab.h"

namespace {

std::string out_dir() {
  return (std::filesystem::temp_directory_path() / "relaylab_capi_test")
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version and error channel behave like a library should") {
  const char* v = rl_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) >= 5);  // at least x.y.z
  CHECK(std::string(rl_last_error()).empty());
}

TEST_CASE("handles are created by experiment name and rejected otherwise") {
  rl_config* cfg = rl_config_create("custom");
  REQUIRE(cfg != nullptr);
  rl_config_destroy(cfg);

  rl_config* bad = rl_config_create("fig9");
  CHECK(bad == nullptr);
  CHECK(std::string(rl_last_error()).find("fig9") != std::string::npos);

  CHECK(rl_config_create(nullptr) == nullptr);
  rl_config_destroy(nullptr);  // must be a harmless no-op
}

TEST_CASE("key setting reports config errors without killing the handle") {
  rl_config* cfg = rl_config_create("custom");
  REQUIRE(cfg != nullptr);

  CHECK(rl_config_set(cfg, "system.zeta", "0.002") == RL_OK);
  CHECK(std::string(rl_last_error()).empty());

  CHECK(rl_config_set(cfg, "system.nope", "1") == RL_ERR_CONFIG);
  CHECK(std::string(rl_last_error()).find("system.nope") != std::string::npos);

  CHECK(rl_config_set(cfg, "system.zeta", "banana") == RL_ERR_CONFIG);
  CHECK(rl_config_set(nullptr, "system.zeta", "1e-3") == RL_ERR_CONFIG);
  CHECK(rl_config_set(cfg, nullptr, "1") == RL_ERR_CONFIG);

  // The handle still works after failures.
  CHECK(rl_config_set(cfg, "system.zeta", "0.001") == RL_OK);
  rl_config_destroy(cfg);
}

TEST_CASE("file loading applies values and surfaces io failures") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "relaylab_capi_cfg.ini")
          .string();
  {
    std::ofstream out(path);
    out << "[system]\nzeta = 4e-3\n";
  }
  rl_config* cfg = rl_config_create("custom");
  REQUIRE(cfg != nullptr);
  CHECK(rl_config_load_file(cfg, path.c_str()) == RL_OK);
  CHECK(rl_config_load_file(cfg, "/no/such/file.ini") == RL_ERR_IO);
  CHECK(std::string(rl_last_error()).find("file.ini") != std::string::npos);
  rl_config_destroy(cfg);
  std::filesystem::remove(path);
}

TEST_CASE("closed-form evaluation fills all terms under either rule") {
  rl_config* cfg = rl_config_create("custom");
  REQUIRE(cfg != nullptr);

  rl_terms sim_rule{}, headroom_rule{}, config_rule{};
  REQUIRE(rl_analytic_eval(cfg, 0, &sim_rule) == RL_OK);
  REQUIRE(rl_analytic_eval(cfg, 1, &headroom_rule) == RL_OK);
  REQUIRE(rl_analytic_eval(cfg, -1, &config_rule) == RL_OK);

  for (const rl_terms* t : {&sim_rule, &headroom_rule}) {
    CHECK(t->pa >= 0.0);
    CHECK(t->j >= 0.0);
    CHECK(t->k >= 0.0);
    CHECK(t->total == doctest::Approx(t->pa + t->j + t->k));
    CHECK(t->total >= 0.0);
    CHECK(t->total <= 1.0);
    CHECK(t->clamped == 0);
  }
  // The two saturation conventions agree closely but not exactly.
  CHECK(sim_rule.total != headroom_rule.total);
  CHECK(std::fabs(sim_rule.total - headroom_rule.total) < 1e-3);
  // Default config carries the simulator's convention.
  CHECK(config_rule.total == sim_rule.total);

  CHECK(rl_analytic_eval(cfg, 0, nullptr) == RL_ERR_CONFIG);
  CHECK(rl_analytic_eval(nullptr, 0, &sim_rule) == RL_ERR_CONFIG);

  // An impossible geometry surfaces as a config error, not a crash.
  CHECK(rl_config_set(cfg, "system.alpha", "2") == RL_OK);
  CHECK(rl_analytic_eval(cfg, 0, &sim_rule) == RL_ERR_CONFIG);
  CHECK(std::string(rl_last_error()).size() > 0);
  rl_config_destroy(cfg);
}

TEST_CASE("monte carlo evaluation returns coherent estimates") {
  rl_config* cfg = rl_config_create("custom");
  REQUIRE(cfg != nullptr);
  REQUIRE(rl_config_set(cfg, "experiment.n_slots", "4000") == RL_OK);

  rl_estimate est{};
  REQUIRE(rl_simulate_eval(cfg, &est) == RL_OK);
  CHECK(est.n_slots == 4000);
  for (double p : {est.active, est.passive, est.optimal, est.random_sel}) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  for (double se : {est.active_se, est.passive_se, est.optimal_se, est.random_se})
    CHECK(se >= 0.0);
  CHECK(est.optimal >= est.active);
  CHECK(est.optimal >= est.passive);

  // Same handle, same seed: bitwise repeatable.
  rl_estimate again{};
  REQUIRE(rl_simulate_eval(cfg, &again) == RL_OK);
  CHECK(again.optimal == est.optimal);
  CHECK(again.active_se == est.active_se);

  CHECK(rl_simulate_eval(cfg, nullptr) == RL_ERR_CONFIG);
  CHECK(rl_simulate_eval(nullptr, &est) == RL_ERR_CONFIG);
  rl_config_destroy(cfg);
}

TEST_CASE("experiment runs write the canned outputs") {
  std::filesystem::remove_all(out_dir());
  rl_config* cfg = rl_config_create("fig2");
  REQUIRE(cfg != nullptr);
  REQUIRE(rl_config_set(cfg, "experiment.grid", "1e-3,5e-3") == RL_OK);
  REQUIRE(rl_config_set(cfg, "experiment.n_slots", "1500") == RL_OK);
  REQUIRE(rl_config_set(cfg, "experiment.replications", "1") == RL_OK);
  REQUIRE(rl_config_set(cfg, "experiment.horizon", "200") == RL_OK);
  REQUIRE(rl_config_set(cfg, "experiment.out_dir", out_dir().c_str()) == RL_OK);

  REQUIRE(rl_run(cfg) == RL_OK);
  const std::string csv = slurp(out_dir() + "/fig2_seed1.csv");
  CHECK(csv.substr(0, csv.find('\n')) ==
        "zeta,estimator,estimate,std_error,replications");
  CHECK(std::filesystem::exists(out_dir() + "/fig2_seed1.svg"));

  CHECK(rl_run(nullptr) == RL_ERR_CONFIG);
  rl_config_destroy(cfg);

  // A custom config has no canned experiment to run.
  rl_config* custom = rl_config_create("custom");
  REQUIRE(custom != nullptr);
  CHECK(rl_run(custom) == RL_ERR_CONFIG);
  rl_config_destroy(custom);

  std::filesystem::remove_all(out_dir());
}
