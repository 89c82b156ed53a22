#include <catch_amalgamated.hpp>

#include <jumpscope/differentiator.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace jumpscope;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Worst |f_j - f'(x)| over the four extreme endpoint noise patterns.
template <typename F, typename D>
double worst_endpoint_error(F f, D df, double x, double h, double delta) {
  double worst = 0.0;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      const double v = ((f(x + h) + s1 * delta) - (f(x - h) + s2 * delta)) / (2.0 * h);
      worst = std::max(worst, std::abs(v - df(x)));
    }
  return worst;
}

}  // namespace

TEST_CASE("central difference is exact for quadratics", "[differentiator]") {
  const FunctionSource src([](double x) { return x * x; }, 1e-6);
  CHECK(central_difference(src, 0.5, 0.1) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("central difference of a noisy constant stays within delta/h", "[differentiator]") {
  const double delta = 0.01, h = 0.05;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-delta, delta);
  for (int trial = 0; trial < 1000; ++trial) {
    const double left = noise(rng), right = noise(rng);
    const FunctionSource src([=](double x) { return 3.0 + (x < 0.5 ? left : right); }, delta);
    const double v = central_difference(src, 0.5, h);
    CHECK(std::abs(v) <= delta / h + 1e-12);
  }
  // extreme pattern attains the bound
  const FunctionSource worst([=](double x) { return 3.0 + (x < 0.5 ? -delta : delta); }, delta);
  CHECK(central_difference(worst, 0.5, h) == Approx(delta / h));
}

TEST_CASE("sine with worst-case endpoint noise stays under sqrt(2 M2 delta)", "[differentiator]") {
  const double delta = 1e-4;
  const double m2 = 4.0 * kPi * kPi;
  const auto policy = make_step_policy(SmoothnessClass::smooth(2.0 * kPi, m2), delta);
  const auto f = [](double x) { return std::sin(2.0 * kPi * x); };
  const auto df = [](double x) { return 2.0 * kPi * std::cos(2.0 * kPi * x); };

  double worst = 0.0;
  for (std::size_t j = 1; j <= 50; ++j)
    worst = std::max(worst, worst_endpoint_error(f, df, static_cast<double>(j) * policy.h, policy.h, delta));

  // frozen from the brute-force oracle above
  CHECK(worst == Approx(0.04463824585404552).epsilon(1e-9));
  CHECK(policy.epsilon == Approx(0.08885765876316733).epsilon(1e-12));
  CHECK(worst <= error_bound(policy));
}

TEST_CASE("derivative table on h = 0.1", "[differentiator]") {
  const DetectionGrid grid(0.1);
  const FunctionSource constant([](double) { return 7.0; }, 1e-3);
  const auto t0 = derivative_table(constant, grid, 0.5);
  REQUIRE(t0.size() == 9);
  for (std::size_t k = 0; k < t0.size(); ++k) {
    CHECK(t0[k].index == k + 1);
    CHECK(t0[k].x == Approx(0.1 * static_cast<double>(k + 1)));
    CHECK(t0[k].value == 0.0);
    CHECK(t0[k].bound == 0.5);
  }

  const FunctionSource linear([](double x) { return 3.0 * x; }, 1e-3);
  for (double h : {0.1, 0.03, 0.0071}) {
    for (const auto& e : derivative_table(linear, DetectionGrid(h), 0.0))
      CHECK(e.value == Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("table bound is the policy error bound", "[differentiator]") {
  const auto policy = make_step_policy(SmoothnessClass::smooth(1.0, 4.0), 0.02);
  const FunctionSource src([](double x) { return x; }, 0.02);
  for (const auto& e : derivative_table(src, DetectionGrid(policy.h), policy))
    CHECK(e.bound == Approx(0.4));
}

TEST_CASE("error bounds per class", "[differentiator]") {
  CHECK(error_bound(make_step_policy(SmoothnessClass::smooth(1.0, 4.0), 0.02)) == Approx(0.4).epsilon(1e-14));

  const double frac = error_bound(make_step_policy(SmoothnessClass::fractional(1.5, 1.0, 1.0), 1e-3));
  CHECK(frac == Approx(1.5 * std::cbrt(4.0) * 0.1).epsilon(1e-12));
  CHECK(frac == Approx(0.2381).epsilon(1e-4));

  const auto lin = make_step_policy(SmoothnessClass::linear(2.0), 0.01, 10.0);
  CHECK(error_bound(lin) == Approx(0.2).epsilon(1e-14));
  CHECK(error_bound(lin) == Approx(lin.m1() / lin.t).epsilon(1e-14));
}

TEST_CASE("fractional bound at order 2 is twice the smooth bound", "[differentiator]") {
  const double delta = 1e-4, m2 = 3.0;
  const double smooth = error_bound(make_step_policy(SmoothnessClass::smooth(1.0, m2), delta));
  const double frac = error_bound(make_step_policy(SmoothnessClass::fractional(2.0, m2, 1.0), delta));
  CHECK(frac == Approx(2.0 * smooth).epsilon(1e-12));
  CHECK(frac == Approx(std::sqrt(8.0 * m2 * delta)).epsilon(1e-12));
}

TEST_CASE("queries leaving the domain are rejected", "[differentiator]") {
  const FunctionSource src([](double x) { return x; }, 1e-3);
  CHECK_THROWS_AS(central_difference(src, 0.05, 0.1), Error);
  CHECK_THROWS_AS(central_difference(src, 0.95, 0.1), Error);
  try {
    (void)central_difference(src, 0.05, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  CHECK_NOTHROW(central_difference(src, 0.1, 0.1));
}

TEST_CASE("property: worst-case guarantee on quadratics", "[differentiator][property]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> logd(-8.0, -3.0);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    const double delta = std::pow(10.0, logd(rng));
    const double c2 = coef(rng), c1 = coef(rng), c0 = coef(rng);
    const double m2 = std::max(2.0 * std::abs(c2), 1e-3);
    const auto policy = make_step_policy(SmoothnessClass::smooth(1.0, m2), delta);
    const double h = policy.h;
    const double x = h + unit(rng) * (1.0 - 2.0 * h);
    const auto f = [&](double y) { return c0 + y * (c1 + c2 * y); };
    const auto df = [&](double y) { return c1 + 2.0 * c2 * y; };
    const double err = worst_endpoint_error(f, df, x, h, delta);
    CHECK(err <= delta / h + m2 * h / 2.0 + 1e-12 * (1.0 + std::abs(df(x))));
    CHECK(err <= error_bound(policy) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("property: reflection flips the sign", "[differentiator][property]") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = unit(rng), b = unit(rng), c = unit(rng);
    const double delta = 1e-4;
    const auto noise = [=](double x) { return delta * std::sin(97.0 * x + 13.0 * a); };
    const auto f = [=](double x) { return a * x * x * x - b * x + c + noise(x); };
    const FunctionSource src(f, delta);
    const FunctionSource reflected([=](double x) { return f(1.0 - x); }, delta);
    const double h = 0.01 + 0.1 * unit(rng);
    const double x = h + unit(rng) * (1.0 - 2.0 * h);
    CHECK(central_difference(reflected, 1.0 - x, h) ==
          Approx(-central_difference(src, x, h)).margin(1e-9));
  }
}

TEST_CASE("property: consistent scaling leaves h fixed and scales values", "[differentiator][property]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> scale(0.1, 50.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double c = scale(rng);
    const double delta = 1e-4, m2 = 2.0;
    const auto p1 = make_step_policy(SmoothnessClass::smooth(1.0, m2), delta);
    const auto pc = make_step_policy(SmoothnessClass::smooth(c, c * m2), c * delta);
    CHECK(pc.h == Approx(p1.h).epsilon(1e-12));
    CHECK(pc.epsilon == Approx(c * p1.epsilon).epsilon(1e-12));

    const auto f = [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; };
    const FunctionSource s1(f, delta);
    const FunctionSource sc([&](double x) { return c * f(x); }, c * delta);
    const auto t1 = derivative_table(s1, DetectionGrid(p1.h), p1);
    const auto tc = derivative_table(sc, DetectionGrid(pc.h), pc);
    REQUIRE(t1.size() == tc.size());
    for (std::size_t k = 0; k < t1.size(); k += 7) CHECK(tc[k].value == Approx(c * t1[k].value).epsilon(1e-9));
  }
}
