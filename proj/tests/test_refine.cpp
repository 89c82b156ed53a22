#include <catch_amalgamated.hpp>

#include <jumpscope/detector.hpp>
#include <jumpscope/synth.hpp>

#include <cmath>
#include <random>

using namespace jumpscope;
using Catch::Approx;

namespace {

ErrorCode refine_error(const NoisySource& src, Interval bracket, const RefineParams& p) {
  try {
    (void)refine_jump_location(src, bracket, p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected refinement to fail");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("unit step refines to 1e-4", "[refine]") {
  const double delta = 0.001;
  const auto [signal, truth] = build_signal(step_spec(0.5, 1.0));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto src = add_noise(signal, delta, UniformNoise{}, seed);
    const auto r = refine_jump_location(src, {0.43, 0.57}, {delta, 0.0, 0.0, 1e-4});
    CHECK(r.interval.width() <= 1e-4 + 1e-15);
    CHECK(r.interval.contains(0.5));
    CHECK_FALSE(r.floor_reached);
    CHECK(std::abs(r.increment - 1.0) <= 2.0 * delta);
    CHECK(r.size_lower_bound > 4.0 * delta);
    CHECK(r.curvature_test);
    CHECK(r.iterations > 0);
  }
}

TEST_CASE("a jump of 3 delta is not refinable", "[refine]") {
  const double delta = 0.001;
  const auto [signal, truth] = build_signal(step_spec(0.5, 3.0 * delta));
  std::vector<NoiseModel> models{NoNoise{}, UniformNoise{},
                                 AdversarialNoise{[](double x) { return x >= 0.5; }},
                                 AdversarialNoise{[](double x) { return x < 0.5; }}};
  for (const auto& model : models) {
    const auto src = add_noise(signal, delta, model, 1);
    CHECK(refine_error(src, {0.4, 0.6}, {delta, 0.0, 0.0, 1e-4}) == ErrorCode::NotRefinable);
  }
}

TEST_CASE("sampled sources stop at four grid spacings", "[refine]") {
  std::vector<double> values(101);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = static_cast<double>(k) * 0.01 >= 0.503 ? 1.0 : 0.0;
  const SampledGridSource src(values, 0.001, 0.0);
  const auto r = refine_jump_location(src, {0.4, 0.6}, {src.delta(), 0.0, 0.0, 1e-4});
  CHECK(r.floor_reached);
  CHECK(r.interval.width() <= 0.04 + 1e-12);
  CHECK(r.interval.width() >= 0.02 - 1e-12);
  CHECK(r.interval.contains(0.51));  // first node carrying the new value
}

TEST_CASE("refinement of a sloped step stays sound", "[refine]") {
  const double delta = 1e-4, m1 = 2.0;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double xj = 0.3 + 0.4 * unit(rng);
    const double p = (unit(rng) < 0.5 ? -1.0 : 1.0) * delta * (10.0 + 100.0 * unit(rng));
    const double slope = m1 * (2.0 * unit(rng) - 1.0);
    const auto src = add_noise([=](double x) { return slope * x + (x >= xj ? p : 0.0); }, delta, UniformNoise{},
                               static_cast<std::uint64_t>(trial));
    const auto r = refine_jump_location(src, {xj - 0.004, xj + 0.003}, {delta, m1, 0.0, 1e-5});
    CHECK(r.interval.contains(xj));
    CHECK(r.interval.width() <= 1e-5 + 1e-15);
    CHECK(r.size_lower_bound <= std::abs(p));
  }
}

TEST_CASE("refinement argument checks", "[refine]") {
  const auto [signal, truth] = build_signal(step_spec(0.5, 1.0));
  const auto src = add_noise(signal, 1e-3, NoNoise{});
  CHECK(refine_error(src, {0.6, 0.4}, {1e-3, 0.0, 0.0, 1e-4}) == ErrorCode::OutOfDomain);
  CHECK(refine_error(src, {0.4, 1.4}, {1e-3, 0.0, 0.0, 1e-4}) == ErrorCode::OutOfDomain);
  CHECK(refine_error(src, {0.4, 0.6}, {0.0, 0.0, 0.0, 1e-4}) == ErrorCode::InvalidArgument);
  CHECK(refine_error(src, {0.4, 0.6}, {1e-3, 0.0, 0.0, 0.0}) == ErrorCode::InvalidArgument);
  // bracket without the jump
  CHECK(refine_error(src, {0.1, 0.3}, {1e-3, 0.0, 0.0, 1e-4}) == ErrorCode::NotRefinable);
}
