#pragma once

// Piecewise-smooth test signals with exact ground truth, sup-norm bounded
// noise, and reproducible random corpora.

#include <jumpscope/error.hpp>
#include <jumpscope/model.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jumpscope {

// ---------------------------------------------------------------------------
// Pieces
// ---------------------------------------------------------------------------

enum class PieceKind { Poly, Affine, Sine };

/// One smooth primitive, expressed in the global abscissa x.
///   Poly:   c0 + c1 x + c2 x^2 + c3 x^3
///   Affine: slope x + intercept
///   Sine:   amplitude sin(2 pi frequency x + phase) + offset
struct Piece {
  PieceKind kind = PieceKind::Poly;
  std::array<double, 4> coeffs{};
  double slope = 0.0;
  double intercept = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double offset = 0.0;

  static Piece poly(std::array<double, 4> c) {
    Piece p;
    p.kind = PieceKind::Poly;
    p.coeffs = c;
    return p;
  }
  static Piece affine(double slope, double intercept) {
    Piece p;
    p.kind = PieceKind::Affine;
    p.slope = slope;
    p.intercept = intercept;
    return p;
  }
  static Piece sine(double amplitude, double frequency, double phase = 0.0, double offset = 0.0) {
    Piece p;
    p.kind = PieceKind::Sine;
    p.amplitude = amplitude;
    p.frequency = frequency;
    p.phase = phase;
    p.offset = offset;
    return p;
  }

  double omega() const noexcept { return 2.0 * std::numbers::pi * frequency; }

  double value(double x) const noexcept {
    switch (kind) {
      case PieceKind::Poly: return coeffs[0] + x * (coeffs[1] + x * (coeffs[2] + x * coeffs[3]));
      case PieceKind::Affine: return slope * x + intercept;
      case PieceKind::Sine: return amplitude * std::sin(omega() * x + phase) + offset;
    }
    return 0.0;
  }

  double d1(double x) const noexcept {
    switch (kind) {
      case PieceKind::Poly: return coeffs[1] + x * (2.0 * coeffs[2] + 3.0 * coeffs[3] * x);
      case PieceKind::Affine: return slope;
      case PieceKind::Sine: return amplitude * omega() * std::cos(omega() * x + phase);
    }
    return 0.0;
  }

  double d2(double x) const noexcept {
    switch (kind) {
      case PieceKind::Poly: return 2.0 * coeffs[2] + 6.0 * coeffs[3] * x;
      case PieceKind::Affine: return 0.0;
      case PieceKind::Sine: {
        const double w = omega();
        return -amplitude * w * w * std::sin(w * x + phase);
      }
    }
    return 0.0;
  }

  /// sup |f'| over [lo, hi], computed from the closed form.
  double sup_abs_d1(double lo, double hi) const {
    double best = std::max(std::abs(d1(lo)), std::abs(d1(hi)));
    if (kind == PieceKind::Poly && coeffs[3] != 0.0) {
      const double v = -coeffs[2] / (3.0 * coeffs[3]);
      if (v > lo && v < hi) best = std::max(best, std::abs(d1(v)));
    } else if (kind == PieceKind::Sine && has_phase_point(lo, hi, 0.0)) {
      best = std::max(best, std::abs(amplitude * omega()));
    }
    return best;
  }

  /// sup |f''| over [lo, hi].
  double sup_abs_d2(double lo, double hi) const {
    double best = std::max(std::abs(d2(lo)), std::abs(d2(hi)));
    if (kind == PieceKind::Sine && has_phase_point(lo, hi, std::numbers::pi / 2.0)) {
      const double w = omega();
      best = std::max(best, std::abs(amplitude * w * w));
    }
    return best;
  }

  /// Sign-changing zeros of f' strictly inside (lo, hi), ascending.
  std::vector<double> critical_points(double lo, double hi) const {
    std::vector<double> roots;
    auto keep = [&](double r) {
      if (r > lo && r < hi) roots.push_back(r);
    };
    switch (kind) {
      case PieceKind::Affine: break;
      case PieceKind::Poly: {
        const double a = 3.0 * coeffs[3], b = 2.0 * coeffs[2], c = coeffs[1];
        if (a == 0.0) {
          if (b != 0.0) keep(-c / b);
        } else {
          const double disc = b * b - 4.0 * a * c;
          if (disc > 0.0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            keep(q / a);
            if (q != 0.0) keep(c / q);
          }
        }
        break;
      }
      case PieceKind::Sine: {
        const double w = omega();
        if (w == 0.0 || amplitude == 0.0) break;
        // w x + phase = pi/2 + k pi
        const double lo_arg = std::min(w * lo, w * hi) + phase;
        const double hi_arg = std::max(w * lo, w * hi) + phase;
        const double k0 = std::ceil((lo_arg - std::numbers::pi / 2.0) / std::numbers::pi);
        for (double k = k0;; k += 1.0) {
          const double arg = std::numbers::pi / 2.0 + k * std::numbers::pi;
          if (arg > hi_arg) break;
          keep((arg - phase) / w);
        }
        break;
      }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }

 private:
  // Whether w x + phase hits base + k pi for some x in [lo, hi].
  bool has_phase_point(double lo, double hi, double base) const {
    const double w = omega();
    if (w == 0.0) return false;
    const double a = std::min(w * lo, w * hi) + phase - base;
    const double b = std::max(w * lo, w * hi) + phase - base;
    return std::floor(b / std::numbers::pi) >= std::ceil(a / std::numbers::pi);
  }
};

// ---------------------------------------------------------------------------
// Specs and ground truth
// ---------------------------------------------------------------------------

enum class JoinKind { Jump, Kink, C2 };

/// Behaviour at an interior breakpoint. size is p = f(b+0) - f(b-0) for a
/// Jump and P = f'(b+0) - f'(b-0) for a Kink.
struct Join {
  JoinKind kind = JoinKind::C2;
  double size = 0.0;
};

struct PieceSpec {
  std::vector<double> breakpoints;  // 0 = b_0 < ... < b_n = 1
  std::vector<Piece> pieces;        // n pieces
  std::vector<Join> joins;          // n - 1 interior joins

  /// Throws InvalidSpec on ordering or continuity-flag mismatch.
  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
    if (pieces.empty()) fail("spec needs at least one piece");
    if (breakpoints.size() != pieces.size() + 1) fail("need exactly one more breakpoint than pieces");
    if (joins.size() != pieces.size() - 1) fail("need exactly one join per interior breakpoint");
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) fail("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i] < breakpoints[i + 1])) fail("breakpoints must be strictly increasing");

    for (std::size_t i = 0; i < joins.size(); ++i) {
      const double b = breakpoints[i + 1];
      const Piece& l = pieces[i];
      const Piece& r = pieces[i + 1];
      const double dv = r.value(b) - l.value(b);
      const double dd = r.d1(b) - l.d1(b);
      const double vtol = 1e-12 * (1.0 + std::abs(l.value(b)) + std::abs(r.value(b)));
      const double dtol = 1e-12 * (1.0 + std::abs(l.d1(b)) + std::abs(r.d1(b)));
      const std::string where = " at breakpoint " + std::to_string(b);
      switch (joins[i].kind) {
        case JoinKind::Jump:
          if (std::abs(dv - joins[i].size) > vtol) fail("declared jump does not match the pieces" + where);
          if (joins[i].size == 0.0) fail("jump of size zero" + where);
          break;
        case JoinKind::Kink:
          if (std::abs(dv) > vtol) fail("kink join is not value-continuous" + where);
          if (std::abs(dd - joins[i].size) > dtol) fail("declared derivative jump does not match the pieces" + where);
          if (joins[i].size == 0.0) fail("kink of size zero" + where);
          break;
        case JoinKind::C2: {
          const double d2tol = 1e-9 * (1.0 + std::abs(l.d2(b)) + std::abs(r.d2(b)));
          if (std::abs(dv) > vtol || std::abs(dd) > dtol || std::abs(r.d2(b) - l.d2(b)) > d2tol)
            fail("C2 join is not twice continuously differentiable" + where);
          break;
        }
      }
    }
  }
};

struct TruthEvent {
  EventKind kind = EventKind::Jump;
  double location = 0.0;
  double size = 0.0;  // p for a jump, signed P for a kink, 0 for a critical point
};

struct GroundTruth {
  std::vector<TruthEvent> events;  // sorted by location
  double m1_true = 0.0;
  double m2_true = 0.0;

  std::vector<TruthEvent> of_kind(EventKind kind) const {
    std::vector<TruthEvent> out;
    for (const auto& e : events)
      if (e.kind == kind) out.push_back(e);
    return out;
  }
};

/// Exact evaluator for a validated spec. f(b) = f(b+0) at breakpoints.
class Signal {
 public:
  explicit Signal(PieceSpec spec) : spec_(std::make_shared<const PieceSpec>(std::move(spec))) {}

  double operator()(double x) const { return piece_at(x).value(x); }
  double derivative(double x) const { return piece_at(x).d1(x); }
  double second_derivative(double x) const { return piece_at(x).d2(x); }
  const PieceSpec& spec() const noexcept { return *spec_; }

 private:
  const Piece& piece_at(double x) const {
    const auto& b = spec_->breakpoints;
    auto it = std::upper_bound(b.begin(), b.end(), x);
    std::size_t idx = it == b.begin() ? 0 : static_cast<std::size_t>(it - b.begin()) - 1;
    idx = std::min(idx, spec_->pieces.size() - 1);
    return spec_->pieces[idx];
  }

  std::shared_ptr<const PieceSpec> spec_;
};

inline std::pair<Signal, GroundTruth> build_signal(const PieceSpec& spec) {
  spec.validate();
  GroundTruth truth;
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const double lo = spec.breakpoints[i];
    const double hi = spec.breakpoints[i + 1];
    const Piece& piece = spec.pieces[i];
    truth.m1_true = std::max(truth.m1_true, piece.sup_abs_d1(lo, hi));
    truth.m2_true = std::max(truth.m2_true, piece.sup_abs_d2(lo, hi));
    for (double r : piece.critical_points(lo, hi))
      truth.events.push_back({EventKind::CriticalPoint, r, 0.0});
    if (i + 1 < spec.pieces.size()) {
      const Join& join = spec.joins[i];
      if (join.kind == JoinKind::Jump) truth.events.push_back({EventKind::Jump, hi, join.size});
      if (join.kind == JoinKind::Kink) truth.events.push_back({EventKind::Kink, hi, join.size});
    }
  }
  std::sort(truth.events.begin(), truth.events.end(),
            [](const TruthEvent& a, const TruthEvent& b) { return a.location < b.location; });
  return {Signal(spec), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

struct NoNoise {};
/// Values in [-delta, delta], a deterministic function of (seed, x).
struct UniformNoise {};
/// +delta when positive(x), -delta otherwise.
struct AdversarialNoise {
  std::function<bool(double)> positive;
};
/// Sign pattern + + - - repeating over the nodes k*step, so that both
/// f(x+h) - f(x-h) and the pair difference of f_j pick up the full 2 delta.
struct CheckerNoise {
  double step = 0.0;
};

using NoiseModel = std::variant<NoNoise, UniformNoise, AdversarialNoise, CheckerNoise>;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double hashed_unit(std::uint64_t seed, double x) noexcept {
  if (x == 0.0) x = 0.0;  // fold -0.0 onto +0.0
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ bits);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Exact evaluator plus bounded noise; satisfies SignalSource.
class NoisySource {
 public:
  NoisySource(std::function<double(double)> exact, double delta, NoiseModel model,
              std::uint64_t seed = 0)
      : exact_(std::move(exact)), delta_(delta), model_(std::move(model)), seed_(seed) {
    if (!exact_) throw Error(ErrorCode::InvalidArgument, "NoisySource needs an evaluator");
    if (!(delta_ >= 0.0) || !std::isfinite(delta_))
      throw Error(ErrorCode::InvalidArgument, "noise bound must be non-negative and finite");
    if (const auto* c = std::get_if<CheckerNoise>(&model_); c && !(c->step > 0.0))
      throw Error(ErrorCode::InvalidArgument, "checker noise needs a positive step");
    if (const auto* a = std::get_if<AdversarialNoise>(&model_); a && !a->positive)
      throw Error(ErrorCode::InvalidArgument, "adversarial noise needs a sign function");
  }

  double eval(double x) const { return exact_(x) + noise(x); }
  double delta() const noexcept { return delta_; }
  double resolution() const noexcept { return 0.0; }

  double noise(double x) const {
    if (delta_ == 0.0) return 0.0;
    return std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, NoNoise>) {
            return 0.0;
          } else if constexpr (std::is_same_v<M, UniformNoise>) {
            return delta_ * (2.0 * detail::hashed_unit(seed_, x) - 1.0);
          } else if constexpr (std::is_same_v<M, AdversarialNoise>) {
            return m.positive(x) ? delta_ : -delta_;
          } else {
            const long long k = std::llround(x / m.step);
            return ((k % 4) + 4) % 4 < 2 ? delta_ : -delta_;
          }
        },
        model_);
  }

 private:
  std::function<double(double)> exact_;
  double delta_;
  NoiseModel model_;
  std::uint64_t seed_;
};

inline NoisySource add_noise(std::function<double(double)> evaluator, double delta,
                             NoiseModel model, std::uint64_t seed = 0) {
  return NoisySource(std::move(evaluator), delta, std::move(model), seed);
}

// ---------------------------------------------------------------------------
// Random corpora
// ---------------------------------------------------------------------------

struct CorpusConstraints {
  double min_separation = 0.0;  // between any two ground-truth events
  double edge_margin = 0.0;     // distance of every event from 0 and 1
  double p_min = 0.0;           // |jump| floor
  double kink_min = 0.0;        // |derivative jump| floor
  double m1_cap = 2.0;
  double m2_cap = 4.0;
  int max_jumps = 3;
  int max_kinks = 2;
  int max_critical = 2;
};

/// Floors matched to detection at noise level delta with M1 <= m1_cap and
/// M2 taken as max(true M2, m2_floor) <= max(m2_cap, m2_floor).
inline CorpusConstraints corpus_constraints_for(double delta, double m1_cap = 2.0,
                                                double m2_cap = 4.0, double m2_floor = 1.0,
                                                double jump_factor = 4.0) {
  if (!(delta > 0.0) || !(m1_cap > 0.0) || !(m2_cap > 0.0) || !(m2_floor > 0.0))
    throw Error(ErrorCode::InvalidArgument, "corpus parameters must be positive");
  const double h_max = std::sqrt(2.0 * delta / m2_floor);
  const double eps_max = std::sqrt(2.0 * std::max(m2_cap, m2_floor) * delta);
  CorpusConstraints c;
  c.min_separation = 4.0 * h_max;
  c.edge_margin = 3.0 * h_max;
  c.p_min = 2.0 * (jump_factor + 1.0) * (m1_cap * h_max + delta);
  c.kink_min = 16.0 * eps_max;
  c.m1_cap = m1_cap;
  c.m2_cap = m2_cap;
  return c;
}

struct CorpusEntry {
  PieceSpec spec;
  GroundTruth truth;
};

namespace detail {

// f(x) = a + b u + g u^2 + c u^3 with u = x - m, in global coefficients.
inline Piece local_cubic(double m, double a, double b, double g, double c) {
  return Piece::poly({a - b * m + g * m * m - c * m * m * m, b - 2.0 * g * m + 3.0 * c * m * m,
                      g - 3.0 * c * m, c});
}

inline bool corpus_entry_ok(const GroundTruth& truth, const CorpusConstraints& c) {
  if (truth.m1_true > c.m1_cap || truth.m2_true > c.m2_cap) return false;
  int critical = 0;
  for (std::size_t i = 0; i < truth.events.size(); ++i) {
    const auto& e = truth.events[i];
    if (e.location < c.edge_margin || e.location > 1.0 - c.edge_margin) return false;
    if (i > 0 && e.location - truth.events[i - 1].location < c.min_separation) return false;
    if (e.kind == EventKind::Jump && std::abs(e.size) < c.p_min) return false;
    if (e.kind == EventKind::Kink && std::abs(e.size) < c.kink_min) return false;
    if (e.kind == EventKind::CriticalPoint) ++critical;
  }
  return critical <= c.max_critical;
}

}  // namespace detail

/// n reproducible specs of cubic pieces joined by jumps and kinks, each with
/// 0-3 jumps, 0-2 kinks and 0-2 critical points satisfying the constraints.
inline std::vector<CorpusEntry> random_corpus(std::size_t n, std::uint64_t seed,
                                              const CorpusConstraints& c) {
  if (!(c.min_separation > 0.0) || c.min_separation > 1.0 || !(c.edge_margin >= 0.0) ||
      2.0 * c.edge_margin >= 1.0)
    throw Error(ErrorCode::ConstraintsInfeasible, "separation or edge margin does not fit [0,1]");
  if (!(c.m1_cap > 0.0) || !(c.m2_cap > 0.0) || c.max_jumps < 0 || c.max_kinks < 0)
    throw Error(ErrorCode::ConstraintsInfeasible, "caps must be positive");
  if (c.kink_min > 1.6 * c.m1_cap)
    throw Error(ErrorCode::ConstraintsInfeasible, "kink floor exceeds what the slope cap allows");

  std::vector<CorpusEntry> corpus;
  corpus.reserve(n);
  constexpr int kAttempts = 20000;

  for (std::size_t s = 0; s < n; ++s) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(s + 1)));
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto count = [&](int hi) { return std::uniform_int_distribution<int>(0, hi)(rng); };
    auto sign = [&]() { return uni(0.0, 1.0) < 0.5 ? -1.0 : 1.0; };

    bool done = false;
    for (int attempt = 0; attempt < kAttempts && !done; ++attempt) {
      const int jumps = count(c.max_jumps);
      const int kinks = count(c.max_kinks);
      std::vector<JoinKind> kinds(static_cast<std::size_t>(jumps), JoinKind::Jump);
      kinds.insert(kinds.end(), static_cast<std::size_t>(kinks), JoinKind::Kink);
      std::shuffle(kinds.begin(), kinds.end(), rng);

      std::vector<double> cuts;
      bool placed = true;
      for (std::size_t k = 0; k < kinds.size() && placed; ++k) {
        placed = false;
        for (int tries = 0; tries < 200; ++tries) {
          const double x = uni(c.edge_margin, 1.0 - c.edge_margin);
          if (std::all_of(cuts.begin(), cuts.end(),
                          [&](double y) { return std::abs(x - y) >= c.min_separation; })) {
            cuts.push_back(x);
            placed = true;
            break;
          }
        }
      }
      if (!placed) continue;
      std::sort(cuts.begin(), cuts.end());

      PieceSpec spec;
      spec.breakpoints.push_back(0.0);
      spec.breakpoints.insert(spec.breakpoints.end(), cuts.begin(), cuts.end());
      spec.breakpoints.push_back(1.0);

      auto random_shape = [&](double& g, double& cub) {
        g = uni(-0.4, 0.4) * c.m2_cap;
        cub = uni(0.0, 1.0) < 0.5 ? 0.0 : uni(-0.05, 0.05) * c.m2_cap;
      };

      for (std::size_t i = 0; i + 1 < spec.breakpoints.size(); ++i) {
        const double lo = spec.breakpoints[i];
        const double hi = spec.breakpoints[i + 1];
        const double m = 0.5 * (lo + hi);
        double g = 0.0, cub = 0.0;
        random_shape(g, cub);
        if (i == 0) {
          spec.pieces.push_back(detail::local_cubic(m, uni(-1.0, 1.0), uni(-0.8, 0.8) * c.m1_cap, g, cub));
          continue;
        }
        const Piece left = spec.pieces.back();
        const double b = lo;
        const double u = b - m;
        double slope = uni(-0.8, 0.8) * c.m1_cap;
        double target = left.value(b);
        const JoinKind kind = kinds[i - 1];
        if (kind == JoinKind::Jump) {
          target += sign() * uni(c.p_min, std::max(2.0 * c.p_min, 1.0));
        } else {
          const double gl = left.d1(b);
          const double dir = gl > 0.0 ? -1.0 : gl < 0.0 ? 1.0 : sign();
          const double mag = uni(c.kink_min, std::max(c.kink_min, 0.8 * c.m1_cap + std::abs(gl)));
          slope = gl + dir * mag - 2.0 * g * u - 3.0 * cub * u * u;
        }
        Piece piece = detail::local_cubic(m, 0.0, slope, g, cub);
        piece.coeffs[0] += target - piece.value(b);
        spec.pieces.push_back(piece);
        const Piece& right = spec.pieces.back();
        spec.joins.push_back(kind == JoinKind::Jump ? Join{kind, right.value(b) - left.value(b)}
                                                    : Join{kind, right.d1(b) - left.d1(b)});
      }

      try {
        auto built = build_signal(spec);
        if (!detail::corpus_entry_ok(built.second, c)) continue;
        corpus.push_back({std::move(spec), std::move(built.second)});
        done = true;
      } catch (const Error&) {
        continue;
      }
    }
    if (!done)
      throw Error(ErrorCode::ConstraintsInfeasible,
                  "could not draw signal " + std::to_string(s) + " satisfying the constraints");
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Fixed families
// ---------------------------------------------------------------------------

/// Hat a|x - c|: a kink at c with derivative jump 2a.
inline PieceSpec hat_spec(double a, double c) {
  PieceSpec spec;
  spec.breakpoints = {0.0, c, 1.0};
  spec.pieces = {Piece::affine(-a, a * c), Piece::affine(a, -a * c)};
  spec.joins = {Join{JoinKind::Kink, spec.pieces[1].d1(c) - spec.pieces[0].d1(c)}};
  return spec;
}

/// Parabola k (x - x0)^2: a critical point at x0 with f'' = 2k.
inline PieceSpec parabola_spec(double k, double x0) {
  PieceSpec spec;
  spec.breakpoints = {0.0, 1.0};
  spec.pieces = {Piece::poly({k * x0 * x0, -2.0 * k * x0, k, 0.0})};
  return spec;
}

/// Unit-style step: value `lo` before x0 and `lo + p` from x0 on.
inline PieceSpec step_spec(double x0, double p, double lo = 0.0) {
  PieceSpec spec;
  spec.breakpoints = {0.0, x0, 1.0};
  spec.pieces = {Piece::affine(0.0, lo), Piece::affine(0.0, lo + p)};
  spec.joins = {Join{JoinKind::Jump, spec.pieces[1].value(x0) - spec.pieces[0].value(x0)}};
  return spec;
}

/// Hats a|x - c| for each slope and parabolas k (x - x0)^2, `per_family`
/// random placements each.
inline std::vector<CorpusEntry> kink_critical_family(std::size_t per_family, std::uint64_t seed,
                                                     std::vector<double> slopes = {0.3, 1.0, 3.0}) {
  std::mt19937_64 rng(detail::splitmix64(seed));
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::vector<CorpusEntry> out;
  for (double a : slopes) {
    for (std::size_t i = 0; i < per_family; ++i) {
      auto spec = hat_spec(a, uni(0.25, 0.75));
      auto truth = build_signal(spec).second;
      out.push_back({std::move(spec), std::move(truth)});
    }
  }
  for (std::size_t i = 0; i < per_family; ++i) {
    auto spec = parabola_spec(uni(0.5, 3.0), uni(0.3, 0.7));
    auto truth = build_signal(spec).second;
    out.push_back({std::move(spec), std::move(truth)});
  }
  return out;
}

}  // namespace jumpscope
