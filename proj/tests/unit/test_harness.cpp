#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "echolab/error.hpp"
#include "echolab/harness.hpp"

using namespace echolab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_echo() {
  return ExperimentConfig::parse_string(
      "[experiment]\nkind = rotor-echo\nT = 10\nseed = 3\n\n"
      "[rotor]\nN = 1024\nK = 10\nsigma = 1.1\nmembers = 8\n\n"
      "[classical]\ntrajectories = 2000\ngamma = 2\n\n[fit]\nt_min = 1\nt_max = 5\n");
}
}  // namespace

TEST_CASE("csv format") {
  DecaySeries s;
  s.times = {0, 1};
  s.values = {1.0, 0.25};
  CHECK(format_csv(s) ==
        "t,value,stderr\n"
        "0.000000000000e+00,1.000000000000e+00,0.000000000000e+00\n"
        "1.000000000000e+00,2.500000000000e-01,0.000000000000e+00\n");
}

TEST_CASE("csv round trip") {
  DecaySeries s;
  s.times = {0, 1, 2};
  s.values = {1.0, 1.0 / 3.0, 1e-9};
  s.stderrs = {0.0, 1e-3, 2e-10};
  const fs::path p = "harness_roundtrip.csv";
  std::ofstream(p) << format_csv(s);
  const auto r = read_csv(p);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.values[i] == doctest::Approx(s.values[i]).epsilon(1e-11));
    CHECK(r.stderrs[i] == doctest::Approx(s.stderrs[i]).epsilon(1e-11));
  }
  std::ofstream("harness_bad.csv") << "time,x\n1,2\n";
  CHECK_THROWS_AS(read_csv("harness_bad.csv"), InvalidArgument);
  CHECK_THROWS_AS(read_csv("harness_missing.csv"), InvalidArgument);
}

TEST_CASE("rotor echo bundle layout") {
  const auto b = run(small_echo());
  CHECK(b.kind == "rotor-echo");
  REQUIRE(b.find("coherent"));
  REQUIRE(b.find("classical"));
  CHECK(b.find("coherent")->series.size() == 11);
  std::vector<std::string> keys;
  for (const auto& [k, v] : b.summary.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"schema_version", "code_version", "experiment", "series", "results", "config"});
  CHECK(b.summary["schema_version"] == kSummarySchemaVersion);
  CHECK(b.summary["config"]["rotor"]["sigma"] == "1.1");
  CHECK(b.summary["results"].contains("rate_comparison"));
}

TEST_CASE("reruns are byte identical") {
  const auto cfg = small_echo();
  write_bundle(run(cfg), "harness_run_a", true);
  write_bundle(run(cfg), "harness_run_b", true);
  for (const auto& entry : fs::directory_iterator("harness_run_a")) {
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(fs::path("harness_run_b") / entry.path().filename()));
  }
  CHECK(fs::exists("harness_run_a/plot.gp"));
  CHECK(fs::exists("harness_run_a/summary.json"));
}

TEST_CASE("rate comparison on synthetic fits") {
  RateFit q, c;
  q.rate = c.rate = 1.1;
  CHECK(compare_rates(q, c, 10.0).ratio == doctest::Approx(1.0));
  CHECK(compare_rates(q, c, 10.0).follows_classical);
  c.rate = 1.61;
  CHECK_FALSE(compare_rates(q, c, 10.0).follows_classical);
  q.rate = 1.0;
  q.rate_stderr = 0.01;
  c.rate = 1.1;
  auto r = compare_rates(q, c, 10.0);
  CHECK(r.follows_classical);
  CHECK(r.ratio == doctest::Approx(1.0 / 1.1));
  CHECK(r.lyapunov == doctest::Approx(std::log(5.0)));
  CHECK(r.distinct_from_lyapunov);
  c.rate = 1.5;
  CHECK_FALSE(compare_rates(q, c, 10.0).follows_classical);
  q.rate = std::log(5.0) + 0.005;
  CHECK_FALSE(compare_rates(q, c, 10.0).distinct_from_lyapunov);
  CHECK_THROWS_AS(compare_rates(ResultBundle{}), Error);
}

TEST_CASE("module errors carry the experiment name") {
  auto cfg = ExperimentConfig::parse_string(
      "[experiment]\nkind = glauber-populations\n[glauber]\nweight = gaussian\ndelta = 1\nhbar = 0.1\nn_max = 5\n");
  try {
    run(cfg);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).rfind("glauber-populations: ", 0) == 0);
  }
  cfg.set("glauber", "delta", "-1");
  try {
    run(cfg);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "glauber.weight");
  }
  cfg.set("glauber", "weight", "cubic");
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("glauber run reports populations") {
  const auto b = run(ExperimentConfig::load("preset:glauber-ring"));
  const auto* s = b.find("populations");
  REQUIRE(s);
  CHECK(s->series.values[4] == doctest::Approx(0.19536681).epsilon(1e-6));
}
