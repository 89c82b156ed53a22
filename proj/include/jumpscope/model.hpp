#pragma once

// Domain types shared by the differentiator, the detector and the signal
// synthesizer: signal sources, smoothness classes, step policies, the
// detection grid and detected events.

#include <jumpscope/error.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jumpscope {

/// Slack used when deciding whether a computed abscissa still lies in [0,1].
inline constexpr double kDomainSlack = 1e-12;

// ---------------------------------------------------------------------------
// Signal sources
// ---------------------------------------------------------------------------

/// A point-queryable noisy function on [0,1] together with its sup-norm
/// noise bound. eval() must be deterministic and safe to call concurrently.
template <typename S>
concept SignalSource = requires(const S& s, double x) {
  { s.eval(x) } -> std::convertible_to<double>;
  { s.delta() } -> std::convertible_to<double>;
};

/// Smallest abscissa difference the source can resolve (0 for analytic
/// sources, the grid spacing for sampled ones).
template <SignalSource S>
double query_resolution(const S& src) {
  if constexpr (requires { { src.resolution() } -> std::convertible_to<double>; }) {
    return src.resolution();
  } else {
    return 0.0;
  }
}

/// Analytic source: any callable plus the declared noise bound.
class FunctionSource {
 public:
  FunctionSource(std::function<double(double)> fn, double delta)
      : fn_(std::move(fn)), delta_(delta) {
    if (!fn_) throw Error(ErrorCode::InvalidArgument, "FunctionSource needs a callable");
    if (!(delta_ > 0.0) || !std::isfinite(delta_))
      throw Error(ErrorCode::InvalidArgument, "noise bound delta must be positive and finite");
  }

  double eval(double x) const { return fn_(x); }
  double delta() const noexcept { return delta_; }
  double resolution() const noexcept { return 0.0; }

 private:
  std::function<double(double)> fn_;
  double delta_;
};

/// Source backed by values on the uniform grid x_k = k/K, k = 0..K.
/// Queries snap to the nearest node; the abscissa quantization is absorbed
/// into the reported noise bound as delta_raw + M1*dx/2.
class SampledGridSource {
 public:
  SampledGridSource(std::vector<double> values, double delta_raw, double m1)
      : values_(std::move(values)), delta_raw_(delta_raw), m1_(m1) {
    if (values_.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "a sampled grid needs at least two samples");
    if (!(delta_raw_ > 0.0) || !std::isfinite(delta_raw_))
      throw Error(ErrorCode::InvalidArgument, "noise bound delta must be positive and finite");
    if (!(m1_ >= 0.0) || !std::isfinite(m1_))
      throw Error(ErrorCode::InvalidArgument, "M1 must be non-negative and finite");
    dx_ = 1.0 / static_cast<double>(values_.size() - 1);
  }

  double eval(double x) const {
    if (!(x >= -kDomainSlack && x <= 1.0 + kDomainSlack))
      throw Error(ErrorCode::OutOfDomain, "query outside [0,1]: " + std::to_string(x));
    const auto last = static_cast<long long>(values_.size() - 1);
    const long long k = std::clamp(std::llround(x / dx_), 0LL, last);
    return values_[static_cast<std::size_t>(k)];
  }

  double delta() const noexcept { return delta_raw_ + m1_ * dx_ / 2.0; }
  double delta_raw() const noexcept { return delta_raw_; }
  double m1() const noexcept { return m1_; }
  double dx() const noexcept { return dx_; }
  double resolution() const noexcept { return dx_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
  double delta_raw_;
  double m1_;
  double dx_ = 0.0;
};

/// Noise bound every downstream guarantee must use for a sampled source.
inline double effective_delta(const SampledGridSource& src) noexcept { return src.delta(); }

/// Same rule for callers that only hold the raw numbers (dx = 0 for an
/// analytic source leaves delta unchanged).
inline double effective_delta(double delta_raw, double dx, double m1) noexcept {
  return delta_raw + m1 * dx / 2.0;
}

// ---------------------------------------------------------------------------
// Smoothness classes and step policies
// ---------------------------------------------------------------------------

enum class SmoothnessKind { Smooth, Fractional, Linear };

constexpr std::string_view to_string(SmoothnessKind kind) noexcept {
  switch (kind) {
    case SmoothnessKind::Smooth: return "smooth";
    case SmoothnessKind::Fractional: return "fractional";
    case SmoothnessKind::Linear: return "linear";
  }
  return "unknown";
}

/// A-priori bounds on the pieces of f. m0 is carried for completeness only;
/// no estimate depends on it.
struct SmoothnessClass {
  SmoothnessKind kind = SmoothnessKind::Smooth;
  std::optional<double> m0;
  double m1 = 0.0;
  double m2 = 0.0;
  double a = 2.0;   // fractional order, Fractional only
  double ma = 0.0;  // bound on the order-a norm, Fractional only

  static SmoothnessClass smooth(double m1, double m2) {
    SmoothnessClass c;
    c.kind = SmoothnessKind::Smooth;
    c.m1 = m1;
    c.m2 = m2;
    return c;
  }

  static SmoothnessClass fractional(double a, double ma, double m1) {
    SmoothnessClass c;
    c.kind = SmoothnessKind::Fractional;
    c.a = a;
    c.ma = ma;
    c.m1 = m1;
    return c;
  }

  static SmoothnessClass linear(double m1) {
    SmoothnessClass c;
    c.kind = SmoothnessKind::Linear;
    c.m1 = m1;
    c.m2 = 0.0;
    return c;
  }

  /// Throws InvalidClass when the variant's invariants do not hold.
  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidClass, msg); };
    if (!std::isfinite(m1) || m1 < 0.0) fail("M1 must be finite and non-negative");
    if (m0 && (!std::isfinite(*m0) || *m0 < 0.0)) fail("M0 must be finite and non-negative");
    switch (kind) {
      case SmoothnessKind::Smooth:
        if (!(m2 > 0.0) || !std::isfinite(m2)) fail("smooth class requires M2 > 0");
        break;
      case SmoothnessKind::Fractional:
        if (!(a > 1.0 && a <= 2.0)) fail("fractional order must lie in (1, 2]");
        if (!(ma > 0.0) || !std::isfinite(ma)) fail("fractional class requires Ma > 0");
        break;
      case SmoothnessKind::Linear:
        if (m2 != 0.0) fail("linear class requires M2 = 0");
        if (!(m1 > 0.0)) fail("linear class requires M1 > 0");
        break;
    }
  }
};

/// Step size and error scale for one smoothness class at one noise level.
///
/// For the linear class `h` is the jump-detection step delta/(2 M1) and
/// `slope_h` the slope-estimation step t*delta/M1; `epsilon` is 0 there
/// because the curvature term is absent.
struct StepPolicy {
  SmoothnessClass cls;
  double delta = 0.0;
  double h = 0.0;
  double epsilon = 0.0;
  double t = 10.0;
  double slope_h = 0.0;

  SmoothnessKind kind() const noexcept { return cls.kind; }
  double m1() const noexcept { return cls.m1; }

  /// Step of the grid that carries the reported derivative table.
  double derivative_step() const noexcept {
    return cls.kind == SmoothnessKind::Linear ? slope_h : h;
  }
};

namespace detail {

inline double fractional_step(double a, double ma, double delta) {
  const double ca = std::pow(2.0 / (ma * (a - 1.0)), 1.0 / a);
  return ca * std::pow(delta, 1.0 / a);
}

inline double fractional_bound(double a, double ma, double delta) {
  return a * std::pow(ma, 1.0 / a) * std::pow(2.0 / (a - 1.0), (a - 1.0) / a) *
         std::pow(delta, (a - 1.0) / a);
}

}  // namespace detail

inline StepPolicy make_step_policy(const SmoothnessClass& cls, double delta, double t = 10.0) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorCode::InvalidArgument, "noise bound delta must be positive and finite");
  cls.validate();

  StepPolicy p;
  p.cls = cls;
  p.delta = delta;
  p.t = t;
  switch (cls.kind) {
    case SmoothnessKind::Smooth:
      p.h = std::sqrt(2.0 * delta / cls.m2);
      p.epsilon = std::sqrt(2.0 * cls.m2 * delta);
      break;
    case SmoothnessKind::Fractional:
      p.h = detail::fractional_step(cls.a, cls.ma, delta);
      p.epsilon = detail::fractional_bound(cls.a, cls.ma, delta);
      break;
    case SmoothnessKind::Linear:
      if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::InvalidArgument, "slope confidence t must be positive");
      p.h = delta / (2.0 * cls.m1);
      p.slope_h = t * delta / cls.m1;
      p.epsilon = 0.0;
      break;
  }

  if (!(2.0 * p.h < 1.0))
    throw Error(ErrorCode::DomainTooSmall,
                "step h = " + std::to_string(p.h) + " does not fit [0,1] (need 2h < 1)");
  if (cls.kind == SmoothnessKind::Linear && !(2.0 * p.slope_h < 1.0))
    throw Error(ErrorCode::DomainTooSmall,
                "slope step " + std::to_string(p.slope_h) + " does not fit [0,1] (need 2h < 1)");
  return p;
}

// ---------------------------------------------------------------------------
// Detection grid
// ---------------------------------------------------------------------------

/// Nodes x_j = j*h for j = 1..max_index, where max_index is the largest j
/// with j*h + h <= 1. Node j owns the window I_j = (jh - h, jh + h).
struct DetectionGrid {
  double h = 0.0;
  std::size_t max_index = 0;

  explicit DetectionGrid(double step) : h(step) {
    if (!(step > 0.0) || !(2.0 * step < 1.0))
      throw Error(ErrorCode::DomainTooSmall, "grid step must satisfy 0 < 2h < 1");
    const auto cells = static_cast<std::size_t>(std::floor((1.0 + kDomainSlack) / step));
    max_index = cells - 1;
  }

  std::size_t size() const noexcept { return max_index; }
  double node(std::size_t j) const noexcept { return static_cast<double>(j) * h; }
  double window_lo(std::size_t j) const noexcept { return node(j) - h; }
  double window_hi(std::size_t j) const noexcept { return node(j) + h; }
};

// ---------------------------------------------------------------------------
// Derivative estimates and events
// ---------------------------------------------------------------------------

struct DerivativeEstimate {
  std::size_t index = 0;  // grid node j
  double x = 0.0;
  double value = 0.0;     // f_j = [f(x+h) - f(x-h)] / (2h)
  double bound = 0.0;     // sup error on smooth regions
};

enum class EventKind { Jump, Kink, CriticalPoint };

constexpr std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Jump: return "jump";
    case EventKind::Kink: return "kink";
    case EventKind::CriticalPoint: return "critical_point";
  }
  return "unknown";
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool overlaps(const Interval& o) const noexcept { return lo < o.hi && o.lo < hi; }
};

/// A detected feature. `size` is the jump estimate for a Jump, the signed
/// derivative-jump estimate for a Kink, and absent for a CriticalPoint.
struct Event {
  EventKind kind = EventKind::Jump;
  Interval interval;
  double location = 0.0;
  std::optional<double> size;
  std::optional<double> size_error_bound;
  std::size_t representative = 0;    // node (Jump) or left node of the pair (Kink)
  std::vector<double> diagnostics;   // f_j values that triggered the event
};

}  // namespace jumpscope
