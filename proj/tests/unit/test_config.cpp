#include <doctest.h>

#include "echolab/config.hpp"
#include "echolab/error.hpp"

using namespace echolab;

namespace {
const char* kSample = R"([experiment]
kind = rotor-echo
T = 14
; comment lines are ignored

[rotor]
N = 2048
sigma = 1.10
peres = off
region = 0.2, 0.3, 0.3, 0.4
)";

std::string field_of(const std::string& text) {
  try {
    ExperimentConfig::parse_string(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}
}  // namespace

TEST_CASE("typed access") {
  const auto c = ExperimentConfig::parse_string(kSample);
  CHECK(c.kind() == "rotor-echo");
  CHECK(c.integer("experiment", "T") == 14);
  CHECK(c.number("rotor", "sigma") == doctest::Approx(1.1));
  CHECK_FALSE(c.flag("rotor", "peres"));
  CHECK(c.list("rotor", "region") == std::vector<double>{0.2, 0.3, 0.3, 0.4});
  CHECK(c.number("rotor", "K", 10.0) == 10.0);
  CHECK_FALSE(c.has("rotor", "K"));
  CHECK_THROWS_AS(c.number("rotor", "K"), ConfigError);
}

TEST_CASE("echo keeps order and verbatim text") {
  const auto c = ExperimentConfig::parse_string(kSample);
  const auto e = c.echo();
  CHECK(e.dump() ==
        R"({"experiment":{"kind":"rotor-echo","T":"14"},"rotor":{"N":"2048","sigma":"1.10","peres":"off","region":"0.2, 0.3, 0.3, 0.4"}})");
  const auto again = ExperimentConfig::parse_string(c.to_ini());
  CHECK(again.echo() == e);
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of("[experiment]\nkind = rotor-echo\n[rotor]\nkick = 3\n") == "rotor.kick");
  CHECK(field_of("[experiment]\nkind = rotor-echo\n[nonsense]\nx = 1\n") == "nonsense");
  CHECK(field_of("[rotor]\nN = 4\n") == "experiment.kind");
  CHECK(field_of("[experiment]\nkind = teleport\n") == "experiment.kind");
  const auto c = ExperimentConfig::parse_string("[experiment]\nkind = osc-fgr\nT = 1.5\n[oscillator]\nsigma = 1,x\n");
  try {
    c.integer("experiment", "T");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "experiment.T");
  }
  CHECK_THROWS_AS(c.list("oscillator", "sigma"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load("preset:unknown"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("overrides") {
  auto c = ExperimentConfig::parse_string(kSample);
  c.set("experiment", "seed", "42");
  c.set("rotor", "N", "512");
  c.set("fit", "t_min", "1");
  CHECK(c.integer("experiment", "seed") == 42);
  CHECK(c.integer("rotor", "N") == 512);
  CHECK(c.number("fit", "t_min") == 1.0);
  CHECK_THROWS_AS(c.set("rotor", "bogus", "1"), ConfigError);
}

TEST_CASE("flags accept common spellings") {
  auto c = ExperimentConfig::parse_string(kSample);
  for (const char* on : {"on", "TRUE", "yes", "1"}) {
    c.set("rotor", "peres", on);
    CHECK(c.flag("rotor", "peres"));
  }
  c.set("rotor", "peres", "maybe");
  CHECK_THROWS_AS(c.flag("rotor", "peres"), ConfigError);
}

TEST_CASE("every preset parses") {
  CHECK(presets().size() >= 10);
  for (const auto& p : presets()) {
    CAPTURE(p.name);
    CHECK_NOTHROW(ExperimentConfig::load("preset:" + p.name));
  }
}
