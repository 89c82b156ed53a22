#include <catch_amalgamated.hpp>

#include <jumpscope/differentiator.hpp>
#include <jumpscope/serialize.hpp>
#include <jumpscope/synth.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace jumpscope;
using Catch::Approx;

namespace {

ErrorCode spec_error(const PieceSpec& spec) {
  try {
    (void)build_signal(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected InvalidSpec");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("unit step ground truth", "[synth]") {
  PieceSpec spec;
  spec.breakpoints = {0.0, 0.5, 1.0};
  spec.pieces = {Piece::affine(0.0, 0.0), Piece::affine(0.0, 1.0)};
  spec.joins = {Join{JoinKind::Jump, 1.0}};
  const auto [f, truth] = build_signal(spec);
  REQUIRE(truth.events.size() == 1);
  CHECK(truth.events[0].kind == EventKind::Jump);
  CHECK(truth.events[0].location == 0.5);
  CHECK(truth.events[0].size == 1.0);
  CHECK(truth.m1_true == 0.0);
  CHECK(truth.m2_true == 0.0);
  CHECK(f(0.4999) == 0.0);
  CHECK(f(0.5) == 1.0);  // f(b) = f(b+0)
}

TEST_CASE("hat ground truth", "[synth]") {
  PieceSpec spec;
  spec.breakpoints = {0.0, 0.5, 1.0};
  spec.pieces = {Piece::affine(1.0, 0.0), Piece::affine(-1.0, 1.0)};
  spec.joins = {Join{JoinKind::Kink, -2.0}};
  const auto [f, truth] = build_signal(spec);
  REQUIRE(truth.events.size() == 1);
  CHECK(truth.events[0].kind == EventKind::Kink);
  CHECK(truth.events[0].size == -2.0);
  CHECK(truth.m1_true == 1.0);
  CHECK(f(0.5) == Approx(0.5));
}

TEST_CASE("parabola ground truth", "[synth]") {
  const auto [f, truth] = build_signal(parabola_spec(1.0, 0.5));
  REQUIRE(truth.events.size() == 1);
  CHECK(truth.events[0].kind == EventKind::CriticalPoint);
  CHECK(truth.events[0].location == Approx(0.5).epsilon(1e-14));
  CHECK(truth.m2_true == Approx(2.0));
  CHECK(truth.m1_true == Approx(1.0));
}

TEST_CASE("sine ground truth is analytic", "[synth]") {
  PieceSpec spec;
  spec.breakpoints = {0.0, 1.0};
  spec.pieces = {Piece::sine(1.0, 1.0)};
  const auto [f, truth] = build_signal(spec);
  const double w = 2.0 * std::numbers::pi;
  CHECK(truth.m1_true == Approx(w));
  CHECK(truth.m2_true == Approx(w * w));
  REQUIRE(truth.events.size() == 2);
  CHECK(truth.events[0].location == Approx(0.25));
  CHECK(truth.events[1].location == Approx(0.75));
}

TEST_CASE("invalid specs", "[synth]") {
  PieceSpec unordered;
  unordered.breakpoints = {0.0, 0.6, 0.4, 1.0};
  unordered.pieces = {Piece::affine(0, 0), Piece::affine(0, 0), Piece::affine(0, 0)};
  unordered.joins = {Join{JoinKind::C2, 0}, Join{JoinKind::C2, 0}};
  CHECK(spec_error(unordered) == ErrorCode::InvalidSpec);

  PieceSpec wrong_size = step_spec(0.5, 1.0);
  wrong_size.joins[0].size = 0.9;
  CHECK(spec_error(wrong_size) == ErrorCode::InvalidSpec);

  PieceSpec broken_kink = hat_spec(1.0, 0.5);
  broken_kink.pieces[1].intercept += 0.1;
  CHECK(spec_error(broken_kink) == ErrorCode::InvalidSpec);

  PieceSpec jump_flagged_c2 = step_spec(0.5, 1.0);
  jump_flagged_c2.joins[0].kind = JoinKind::C2;
  CHECK(spec_error(jump_flagged_c2) == ErrorCode::InvalidSpec);

  PieceSpec short_domain = step_spec(0.5, 1.0);
  short_domain.breakpoints.back() = 0.9;
  CHECK(spec_error(short_domain) == ErrorCode::InvalidSpec);
}

TEST_CASE("noise models", "[synth][noise]") {
  const auto exact = [](double x) { return std::exp(x); };
  SECTION("zero delta is the exact signal") {
    for (const auto& model : {NoiseModel{UniformNoise{}}, NoiseModel{CheckerNoise{0.01}},
                              NoiseModel{AdversarialNoise{[](double) { return true; }}}}) {
      const auto src = add_noise(exact, 0.0, model, 5);
      for (double x : {0.0, 0.123, 0.5, 1.0}) CHECK(src.eval(x) == exact(x));
    }
  }
  SECTION("checker noise on a constant gives f_j = +-delta/h") {
    const double delta = 1e-3, h = 0.02;
    const auto src = add_noise([](double) { return 4.0; }, delta, CheckerNoise{h});
    for (const auto& e : derivative_table(src, DetectionGrid(h), 0.0))
      CHECK(std::abs(e.value) == Approx(delta / h).epsilon(1e-9));
  }
  SECTION("uniform noise is deterministic in (seed, x)") {
    const auto a = add_noise(exact, 1e-3, UniformNoise{}, 17);
    const auto b = add_noise(exact, 1e-3, UniformNoise{}, 17);
    const auto c = add_noise(exact, 1e-3, UniformNoise{}, 18);
    CHECK(a.eval(0.3) == a.eval(0.3));
    CHECK(a.eval(0.3) == b.eval(0.3));
    CHECK(a.eval(0.3) != c.eval(0.3));
  }
  SECTION("adversarial noise follows the sign function") {
    const auto src = add_noise([](double) { return 0.0; }, 0.5, AdversarialNoise{[](double x) { return x > 0.5; }});
    CHECK(src.eval(0.7) == 0.5);
    CHECK(src.eval(0.2) == -0.5);
  }
  SECTION("bad noise arguments") {
    CHECK_THROWS_AS(add_noise(exact, -1.0, UniformNoise{}), Error);
    CHECK_THROWS_AS(add_noise(exact, 1.0, CheckerNoise{0.0}), Error);
    CHECK_THROWS_AS(add_noise(exact, 1.0, AdversarialNoise{}), Error);
  }
}

TEST_CASE("property: noise stays within delta", "[synth][noise][property]") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto exact = [](double x) { return std::cos(3.0 * x); };
  const double delta = 2.5e-3;
  std::vector<NoiseModel> models{NoNoise{}, UniformNoise{}, CheckerNoise{0.013},
                                 AdversarialNoise{[](double x) { return std::sin(50.0 * x) > 0.0; }}};
  for (const auto& model : models) {
    const auto src = add_noise(exact, delta, model, 3);
    for (int i = 0; i < 100000; ++i) {
      const double x = unit(rng);
      // one ulp of the sum is allowed
      REQUIRE(std::abs(src.eval(x) - exact(x)) <= delta + 4.0 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("property: identical inputs answer bitwise identically", "[synth][noise][property]") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto corpus = random_corpus(5, 8, corpus_constraints_for(1e-4));
  for (const auto& entry : corpus) {
    const auto [s1, t1] = build_signal(entry.spec);
    const auto [s2, t2] = build_signal(entry.spec);
    const auto a = add_noise(s1, 1e-4, UniformNoise{}, 99);
    const auto b = add_noise(s2, 1e-4, UniformNoise{}, 99);
    for (int i = 0; i < 1000; ++i) {
      const double x = unit(rng);
      REQUIRE(std::bit_cast<std::uint64_t>(a.eval(x)) == std::bit_cast<std::uint64_t>(b.eval(x)));
    }
  }
}

TEST_CASE("random corpus determinism and feasibility", "[synth][corpus]") {
  auto c = corpus_constraints_for(1e-3);
  const auto a = random_corpus(1, 7, c);
  const auto b = random_corpus(1, 7, c);
  REQUIRE(a.size() == 1);
  CHECK(dump(to_json(a[0].spec)) == dump(to_json(b[0].spec)));

  auto infeasible = c;
  infeasible.min_separation = 1.5;
  try {
    (void)random_corpus(1, 7, infeasible);
    FAIL("expected ConstraintsInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstraintsInfeasible);
  }
}

TEST_CASE("default corpus of 200 respects separation and floors", "[synth][corpus]") {
  const double delta = 1e-4;
  const auto c = corpus_constraints_for(delta);
  const double h_max = std::sqrt(2.0 * delta / 1.0);
  CHECK(c.min_separation == Approx(4.0 * h_max));
  const auto corpus = random_corpus(200, 2024, c);
  REQUIRE(corpus.size() == 200);
  std::size_t jumps = 0, kinks = 0;
  for (const auto& entry : corpus) {
    const auto& ev = entry.truth.events;
    CHECK(ev.size() <= 7);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (i > 0) CHECK(ev[i].location - ev[i - 1].location >= 4.0 * h_max);
      if (ev[i].kind == EventKind::Jump) CHECK(std::abs(ev[i].size) >= c.p_min);
      if (ev[i].kind == EventKind::Kink) CHECK(std::abs(ev[i].size) >= c.kink_min);
    }
    const auto nj = entry.truth.of_kind(EventKind::Jump).size();
    const auto nk = entry.truth.of_kind(EventKind::Kink).size();
    CHECK(nj <= 3);
    CHECK(nk <= 2);
    CHECK(entry.truth.of_kind(EventKind::CriticalPoint).size() <= 2);
    jumps += nj;
    kinks += nk;
    CHECK(entry.truth.m1_true <= c.m1_cap);
    CHECK(entry.truth.m2_true <= c.m2_cap);
  }
  CHECK(jumps > 100);
  CHECK(kinks > 50);
}

TEST_CASE("property: sampled f'' never exceeds m2_true", "[synth][property]") {
  const auto corpus = random_corpus(30, 61, corpus_constraints_for(1e-4));
  std::vector<PieceSpec> specs;
  for (const auto& e : corpus) specs.push_back(e.spec);
  PieceSpec sine;
  sine.breakpoints = {0.0, 1.0};
  sine.pieces = {Piece::sine(0.7, 1.3, 0.4, 0.1)};
  specs.push_back(sine);
  for (const auto& spec : specs) {
    const auto [f, truth] = build_signal(spec);
    const auto& b = spec.breakpoints;
    for (int i = 0; i <= 10000; ++i) {
      const double x = static_cast<double>(i) / 10000.0;
      if (std::any_of(b.begin() + 1, b.end() - 1, [x](double y) { return x == y; })) continue;
      REQUIRE(std::abs(f.second_derivative(x)) <= truth.m2_true + 1e-9);
      REQUIRE(std::abs(f.derivative(x)) <= truth.m1_true + 1e-9);
    }
  }
}

TEST_CASE("kink and critical family", "[synth][corpus]") {
  const auto family = kink_critical_family(10, 3);
  REQUIRE(family.size() == 40);
  for (std::size_t i = 0; i < 30; ++i) {
    REQUIRE(family[i].truth.events.size() == 1);
    CHECK(family[i].truth.events[0].kind == EventKind::Kink);
  }
  for (std::size_t i = 30; i < 40; ++i) {
    REQUIRE(family[i].truth.events.size() == 1);
    CHECK(family[i].truth.events[0].kind == EventKind::CriticalPoint);
  }
}

TEST_CASE("spec JSON round trip", "[synth][json]") {
  const auto corpus = random_corpus(10, 5, corpus_constraints_for(1e-4));
  for (const auto& entry : corpus) {
    const Json j = to_json(entry.spec);
    const auto back = spec_from_json(Json::parse(j.dump()));
    CHECK(dump(to_json(back)) == dump(j));
  }
  PieceSpec mixed;
  mixed.breakpoints = {0.0, 0.5, 1.0};
  mixed.pieces = {Piece::sine(1.0, 0.5, 0.0, 0.0), Piece::affine(0.0, 2.0)};
  mixed.joins = {Join{JoinKind::Jump, 2.0 - std::sin(std::numbers::pi * 0.5)}};
  const auto back = spec_from_json(Json::parse(to_json(mixed).dump()));
  CHECK(back.pieces[0].kind == PieceKind::Sine);
  CHECK(back.pieces[1].kind == PieceKind::Affine);

  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"breakpoints": [0, 1]})")), Error);
  const auto whole = corpus_from_json(corpus_to_json(corpus));
  REQUIRE(whole.size() == corpus.size());
  CHECK(whole[3].truth.events.size() == corpus[3].truth.events.size());
}
