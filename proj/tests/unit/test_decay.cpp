#include <doctest.h>

#include <cmath>
#include <random>

#include "echolab/decay.hpp"
#include "echolab/error.hpp"

using namespace echolab;

namespace {
DecaySeries exponential(double rate, int T, double amplitude = 1.0) {
  DecaySeries s;
  for (int t = 0; t <= T; ++t) {
    s.times.push_back(t);
    s.values.push_back(amplitude * std::exp(-rate * t));
  }
  return s;
}
}  // namespace

TEST_CASE("exact exponential is recovered") {
  const auto f = fit_decay_rate(exponential(1.1, 10, 0.7), {2, 8});
  CHECK(f.rate == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(0.7)).epsilon(1e-10));
  CHECK(f.points == 7);
  CHECK(f.residual < 1e-12);
  CHECK(f.rate_stderr < 1e-10);
}

TEST_CASE("constant series has zero rate") {
  const auto f = fit_decay_rate(exponential(0.0, 10), {2, 8});
  CHECK(f.rate == 0.0);
  CHECK_FALSE(std::signbit(f.rate));
}

TEST_CASE("noisy exponential within its error") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto s = exponential(1.61, 40);
  for (auto& t : s.times) t *= 0.25;
  for (std::size_t i = 0; i < s.size(); ++i) s.values[i] = std::exp(-1.61 * s.times[i] + noise(rng));
  const auto f = fit_decay_rate(s, {1, 9});
  CHECK(f.rate == doctest::Approx(1.61).epsilon(0.02));
  CHECK(std::abs(f.rate - 1.61) < 4 * f.rate_stderr + 1e-3);
}

TEST_CASE("fit_line oracle") {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 2, 5};
  const auto l = fit_line(x, y);
  // Closed form: slope = Sxy / Sxx with centred sums.
  CHECK(l.slope == doctest::Approx(1.1));
  CHECK(l.intercept == doctest::Approx(2.75 - 1.1 * 1.5));
}

TEST_CASE("fit errors") {
  auto s = exponential(1.0, 10);
  CHECK_THROWS_AS(fit_decay_rate(s, {2, 3}), InsufficientData);
  s.values[4] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(s, {2, 8}), FitDomainError);
  s.values[4] = -1.0;
  CHECK_THROWS_AS(fit_decay_rate(s, {2, 8}), FitDomainError);
  const std::vector<double> x = {1, 1, 1};
  CHECK_THROWS_AS(fit_line(x, x), InsufficientData);
  CHECK_THROWS_AS(window_mean(s, {20, 30}), InsufficientData);
}

TEST_CASE("window mean") {
  DecaySeries s;
  for (int t = 0; t <= 5; ++t) {
    s.times.push_back(t);
    s.values.push_back(t);
  }
  CHECK(window_mean(s, {2, 4}) == doctest::Approx(3.0));
}
