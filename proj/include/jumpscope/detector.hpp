#pragma once

// Classification of grid nodes into smooth regions, jumps of f, kinks of f'
// and critical points, with size estimates and their guaranteed error
// bounds, assembled into a DetectionReport.

#include <jumpscope/differentiator.hpp>
#include <jumpscope/model.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jumpscope {

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

/// Decision thresholds, all in the units of f_j.
///
/// smooth_ceiling is the largest |f_j| a window free of jumps can produce:
/// M1 + delta/h. jump_threshold exceeds it by the factor kappa (smooth and
/// fractional classes) or is the 4*delta increment rule of the linear class.
/// kink_threshold is the largest |f_{j+1} - f_j| a window with a bounded
/// second derivative can produce, noise included. sign_floor is the sup
/// error of f_j, above which sign(f_j) = sign(f'). rounding is the
/// floating-point error one f_j may carry on top of all of these; detect sets
/// it from the sample magnitudes.
struct Thresholds {
  double jump_factor = 4.0;
  double smooth_ceiling = 0.0;
  double jump_threshold = 0.0;
  double kink_threshold = 0.0;
  double critical_threshold = 0.0;
  double sign_floor = 0.0;
  double p_min = 0.0;  // smallest jump guaranteed to be flagged
  double rounding = 0.0;
};

inline Thresholds make_thresholds(const StepPolicy& policy, double jump_factor = 4.0) {
  if (!(jump_factor > 1.0) || !std::isfinite(jump_factor))
    throw Error(ErrorCode::InvalidArgument, "jump factor kappa must be > 1");

  const double h = policy.h;
  const double delta = policy.delta;
  const double m1 = policy.m1();

  Thresholds th;
  th.jump_factor = jump_factor;
  th.smooth_ceiling = m1 + delta / h;

  switch (policy.kind()) {
    case SmoothnessKind::Smooth:
    case SmoothnessKind::Fractional: {
      th.jump_threshold = jump_factor * th.smooth_ceiling;
      // Exact pair difference is bounded by the modulus of f' over one step
      // (M2 h, or Ma h^(a-1)); four noisy samples add at most 2 delta / h.
      const double curvature = policy.kind() == SmoothnessKind::Smooth
                                   ? policy.cls.m2 * h
                                   : policy.cls.ma * std::pow(h, policy.cls.a - 1.0);
      th.kink_threshold = curvature + 2.0 * delta / h;
      th.critical_threshold = th.kink_threshold;
      th.sign_floor = error_bound(policy);
      break;
    }
    case SmoothnessKind::Linear:
      // |f(jh+h) - f(jh-h)| > 2 delta + 4 M1 h, expressed in f_j units.
      th.jump_threshold = (2.0 * delta + 4.0 * m1 * h) / (2.0 * h);
      break;
  }
  // A window holding a jump p has |f_j| >= |p|/(2h) - smooth_ceiling.
  th.p_min = 2.0 * h * th.jump_threshold + 2.0 * delta + 2.0 * m1 * h;
  return th;
}

// ---------------------------------------------------------------------------
// Jumps of f
// ---------------------------------------------------------------------------

namespace detail {

// Worst cases attain the bounds exactly (quadratics under checker noise), so
// rounding alone must not flip a comparison: a relative slack plus the
// absolute allowance carried by the operands.
inline constexpr double kBoundSlack = 1e-9;

inline bool exceeds(double value, double bound, double allowance = 0.0) noexcept {
  return std::abs(value) > bound * (1.0 + kBoundSlack) + allowance;
}

}  // namespace detail

/// Nodes j (grid indices, 1-based) with |f_j| above the jump threshold.
inline std::vector<std::size_t> flag_jump_nodes(std::span<const DerivativeEstimate> table,
                                                const Thresholds& th) {
  std::vector<std::size_t> flags;
  for (const auto& e : table)
    if (detail::exceeds(e.value, th.jump_threshold, th.rounding)) flags.push_back(e.index);
  return flags;
}

/// Maximal run of consecutive flagged indices.
struct FlagRun {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t representative = 0;
  Interval interval;
};

namespace detail {

template <typename Score>
std::vector<FlagRun> group_runs(std::span<const std::size_t> sorted, Score score) {
  std::vector<FlagRun> runs;
  for (std::size_t k = 0; k < sorted.size();) {
    std::size_t end = k + 1;
    while (end < sorted.size() && sorted[end] == sorted[end - 1] + 1) ++end;
    FlagRun run;
    run.first = sorted[k];
    run.last = sorted[end - 1];
    run.representative = run.first;
    double best = score(run.first);
    for (std::size_t i = k + 1; i < end; ++i) {
      const double s = score(sorted[i]);
      if (s > best) {  // strict: ties keep the smaller index
        best = s;
        run.representative = sorted[i];
      }
    }
    runs.push_back(run);
    k = end;
  }
  return runs;
}

inline const DerivativeEstimate& at_node(std::span<const DerivativeEstimate> table,
                                         std::size_t j) {
  return table[j - table.front().index];
}

}  // namespace detail

/// Consecutive flagged nodes belong to one jump (adjacent windows overlap).
/// The run reports the hull of its windows and its argmax-|f_j| node.
inline std::vector<FlagRun> merge_flags(std::span<const std::size_t> flags,
                                        const DetectionGrid& grid,
                                        std::span<const DerivativeEstimate> table) {
  if (flags.empty()) return {};
  auto runs = detail::group_runs(
      flags, [&](std::size_t j) { return std::abs(detail::at_node(table, j).value); });
  for (auto& r : runs) r.interval = {grid.window_lo(r.first), grid.window_hi(r.last)};
  return runs;
}

struct SizeEstimate {
  double size = 0.0;
  double bound = 0.0;
};

/// Jump size from the increment across the representative window.
template <SignalSource S>
SizeEstimate estimate_jump(const S& src, std::size_t j, const StepPolicy& policy) {
  const double h = policy.h;
  const double x = static_cast<double>(j) * h;
  const double size = src.eval(std::min(x + h, 1.0)) - src.eval(std::max(x - h, 0.0));
  const double m1 = policy.m1();
  const double bound = policy.kind() == SmoothnessKind::Linear
                           ? 2.0 * policy.delta + 4.0 * m1 * h
                           : 2.0 * policy.delta + 2.0 * m1 * h;
  return {size, bound};
}

// ---------------------------------------------------------------------------
// Kinks of f' and critical points
// ---------------------------------------------------------------------------

/// Estimate of the jump of f' from the pair (j, j+1); the bound applies to
/// the magnitude: | |P| - |P_hat| | <= 7 eps.
inline SizeEstimate estimate_derivative_jump(std::span<const DerivativeEstimate> table,
                                             std::size_t j, const StepPolicy& policy) {
  const double fj = detail::at_node(table, j).value;
  const double fj1 = detail::at_node(table, j + 1).value;
  return {2.0 * (fj1 - fj), 7.0 * error_bound(policy)};
}

/// Classifies adjacent pairs away from jump runs (and their one-node
/// collars) into kinks, and sign changes of f' into critical points.
///
/// A pair whose difference exceeds kink_threshold cannot lie in a window
/// with bounded f'' and becomes a kink; consecutive kink pairs merge into one
/// event represented by the largest difference. A critical point is reported
/// between two consecutive sign-trusted nodes (|f_j| > sign_floor) of
/// opposite sign when no pair between them exceeds critical_threshold.
inline std::vector<Event> classify_kinks(std::span<const DerivativeEstimate> table,
                                         std::span<const FlagRun> jump_runs,
                                         const Thresholds& th, const DetectionGrid& grid) {
  std::vector<Event> events;
  const std::size_t n = table.size();
  if (n < 2) return events;
  const std::size_t base = table.front().index;

  std::vector<bool> excluded(n, false);
  for (const auto& run : jump_runs) {
    const std::size_t lo = run.first > base ? run.first - 1 : base;
    const std::size_t hi = std::min(run.last + 1, base + n - 1);
    for (std::size_t j = lo; j <= hi; ++j) excluded[j - base] = true;
  }

  auto diff = [&](std::size_t i) { return table[i + 1].value - table[i].value; };

  std::vector<bool> kink_pair(n - 1, false);
  std::vector<std::size_t> kink_nodes;  // left node index of each kink pair
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (excluded[i] || excluded[i + 1]) continue;
    if (detail::exceeds(diff(i), th.kink_threshold, 2.0 * th.rounding)) {
      kink_pair[i] = true;
      kink_nodes.push_back(table[i].index);
    }
  }

  const auto kink_runs = detail::group_runs(
      std::span<const std::size_t>(kink_nodes), [&](std::size_t j) { return std::abs(diff(j - base)); });
  for (const auto& run : kink_runs) {
    Event ev;
    ev.kind = EventKind::Kink;
    ev.interval = {grid.window_lo(run.first), grid.window_hi(run.last + 1)};
    ev.location = ev.interval.midpoint();
    ev.representative = run.representative;
    ev.diagnostics = {detail::at_node(table, run.representative).value,
                      detail::at_node(table, run.representative + 1).value};
    events.push_back(std::move(ev));
  }

  // Nodes whose windows may straddle a kink, plus a one-node collar, cannot
  // anchor a sign change of f'.
  std::vector<bool> blocked = excluded;
  for (const auto& run : kink_runs) {
    const std::size_t lo = run.first - base > 0 ? run.first - base - 1 : 0;
    const std::size_t hi = std::min(run.last - base + 2, n - 1);
    for (std::size_t i = lo; i <= hi; ++i) blocked[i] = true;
  }

  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < n; ++i) {
    if (blocked[i]) {
      prev.reset();
      continue;
    }
    const double v = table[i].value;
    if (!detail::exceeds(v, th.sign_floor, th.rounding)) continue;
    if (prev && (table[*prev].value > 0.0) != (v > 0.0)) {
      bool smooth_span = true;
      for (std::size_t k = *prev; k < i; ++k)
        if (kink_pair[k] || detail::exceeds(diff(k), th.critical_threshold, 2.0 * th.rounding))
          smooth_span = false;
      if (smooth_span) {
        Event ev;
        ev.kind = EventKind::CriticalPoint;
        ev.interval = {table[*prev].x, table[i].x};
        ev.location = ev.interval.midpoint();
        ev.representative = table[*prev].index;
        ev.diagnostics = {table[*prev].value, v};
        events.push_back(std::move(ev));
      }
    }
    prev = i;
  }

  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.location < b.location; });
  return events;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

struct DetectOptions {
  double jump_factor = 4.0;
  double t = 10.0;             // slope confidence, linear class only
  bool classify_kinks = true;  // must be false for the linear class
};

struct MaskedNode {
  std::size_t index = 0;
  double x = 0.0;
  double value = 0.0;
  EventKind reason = EventKind::Jump;
};

struct DetectionReport {
  StepPolicy policy;
  Thresholds thresholds;
  double derivative_step = 0.0;
  bool kinks_classified = true;
  std::vector<DerivativeEstimate> derivative;  // nodes in S_delta
  std::vector<Event> events;
  std::vector<MaskedNode> masked;
  std::vector<std::string> warnings;

  std::size_t count(EventKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        events.begin(), events.end(), [kind](const Event& e) { return e.kind == kind; }));
  }
  std::size_t jump_count() const { return count(EventKind::Jump); }
};

namespace detail {

/// Makes sorted events pairwise disjoint. Jump intervals are kept intact;
/// any other overlap is split at the midpoint of the overlap.
inline void separate_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.location < b.location; });
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    Event& left = events[i];
    Event& right = events[i + 1];
    if (!left.interval.overlaps(right.interval)) continue;
    if (left.kind == EventKind::Jump && right.kind != EventKind::Jump) {
      right.interval.lo = left.interval.hi;
    } else if (right.kind == EventKind::Jump && left.kind != EventKind::Jump) {
      left.interval.hi = right.interval.lo;
    } else {
      const double cut = 0.5 * (right.interval.lo + left.interval.hi);
      left.interval.hi = cut;
      right.interval.lo = cut;
    }
  }
  std::erase_if(events, [](const Event& e) { return !(e.interval.hi > e.interval.lo); });
  for (auto& e : events) e.location = e.interval.midpoint();
}

}  // namespace detail

template <SignalSource S>
DetectionReport detect(const S& src, const SmoothnessClass& cls, const DetectOptions& opts = {}) {
  const double delta = src.delta();
  if (cls.kind == SmoothnessKind::Linear && opts.classify_kinks)
    throw Error(ErrorCode::ModeUnsupportedKinks,
                "kink classification needs M2 > 0; disable it for the linear class");

  DetectionReport report;
  report.policy = make_step_policy(cls, delta, opts.t);
  report.thresholds = make_thresholds(report.policy, opts.jump_factor);
  report.kinks_classified = opts.classify_kinks;
  const StepPolicy& policy = report.policy;
  const DetectionGrid grid(policy.h);

  // Each sample is good to a few ulps of its magnitude (more for sources
  // that compute it); divided by h this outgrows the relative slack once
  // delta is small.
  double magnitude = 0.0;
  for (std::size_t k = 0; k <= grid.max_index + 1; ++k)
    magnitude = std::max(magnitude, std::abs(src.eval(std::min(grid.node(k), 1.0))));
  report.thresholds.rounding = 16.0 * DBL_EPSILON * magnitude / policy.h;
  const Thresholds& th = report.thresholds;

  // On the linear class the detection step is tuned for jumps, not slopes,
  // and its values are only good to the noise term delta/h.
  const double table_bound =
      policy.kind() == SmoothnessKind::Linear ? delta / policy.h : error_bound(policy);
  const auto table = derivative_table(src, grid, table_bound);

  const auto flags = flag_jump_nodes(table, th);
  const auto runs = merge_flags(flags, grid, table);

  std::vector<Event> events;
  for (const auto& run : runs) {
    const auto est = estimate_jump(src, run.representative, policy);
    Event ev;
    ev.kind = EventKind::Jump;
    ev.interval = run.interval;
    ev.location = run.interval.midpoint();
    ev.size = est.size;
    ev.size_error_bound = est.bound;
    ev.representative = run.representative;
    for (std::size_t j = run.first; j <= run.last; ++j)
      ev.diagnostics.push_back(detail::at_node(table, j).value);
    events.push_back(std::move(ev));
  }

  if (opts.classify_kinks) {
    auto features = classify_kinks(table, runs, th, grid);
    for (auto& ev : features) {
      if (ev.kind == EventKind::Kink) {
        const auto est = estimate_derivative_jump(table, ev.representative, policy);
        ev.size = est.size;
        ev.size_error_bound = est.bound;
      }
      events.push_back(std::move(ev));
    }
  } else if (cls.kind == SmoothnessKind::Linear) {
    report.warnings.emplace_back("kink detection disabled in linear mode");
  }

  detail::separate_events(events);
  report.events = std::move(events);

  // The reported derivative lives on the slope grid for the linear class and
  // on the detection grid otherwise.
  report.derivative_step = policy.derivative_step();
  const DetectionGrid out_grid(report.derivative_step);
  const auto out_table = policy.kind() == SmoothnessKind::Linear
                             ? derivative_table(src, out_grid, error_bound(policy))
                             : table;
  for (const auto& e : out_table) {
    const Interval window{e.x - out_grid.h, e.x + out_grid.h};
    const Event* hit = nullptr;
    for (const auto& ev : report.events) {
      if (ev.kind == EventKind::CriticalPoint) continue;
      if (window.overlaps(ev.interval)) {
        hit = &ev;
        break;
      }
    }
    if (hit)
      report.masked.push_back({e.index, e.x, e.value, hit->kind});
    else
      report.derivative.push_back(e);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Localization to arbitrary accuracy
// ---------------------------------------------------------------------------

struct RefineParams {
  double delta = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double target_width = 1e-4;
};

struct RefineResult {
  Interval interval;
  bool floor_reached = false;  // stopped at 4x the source resolution
  double increment = 0.0;      // f(hi) - f(lo) over the final bracket
  double size_lower_bound = 0.0;
  bool curvature_test = false;  // |increment| - 2 h M1 > 2 delta + M2 h^2, h = width/2
  std::size_t iterations = 0;
};

/// Shrinks a bracket holding one discontinuity of f. A sub-bracket of width
/// w survives when |f(hi) - f(lo)| > 2 delta + M1 w, which no smooth
/// sub-bracket can satisfy; the bracket itself need not pass. The result
/// must certify |p| > 4 delta.
template <SignalSource S>
RefineResult refine_jump_location(const S& src, Interval bracket, const RefineParams& p) {
  if (!(p.delta > 0.0) || !(p.m1 >= 0.0) || !(p.m2 >= 0.0) || !(p.target_width > 0.0))
    throw Error(ErrorCode::InvalidArgument, "refinement needs delta > 0, M1, M2 >= 0, target > 0");
  if (!(bracket.lo >= -kDomainSlack && bracket.hi <= 1.0 + kDomainSlack && bracket.lo < bracket.hi))
    throw Error(ErrorCode::OutOfDomain, "bracket must be a non-empty sub-interval of [0,1]");

  const double res = query_resolution(src);
  auto snap = [res](double x) { return res > 0.0 ? std::round(x / res) * res : x; };
  if (res > 0.0) {
    bracket.lo = std::floor(bracket.lo / res + 1e-9) * res;
    bracket.hi = std::ceil(bracket.hi / res - 1e-9) * res;
  }
  bracket.lo = std::max(bracket.lo, 0.0);
  bracket.hi = std::min(bracket.hi, 1.0);

  const double floor_width = 4.0 * res;
  const double stop = std::max(p.target_width, floor_width);

  auto increment = [&](const Interval& iv) { return src.eval(iv.hi) - src.eval(iv.lo); };
  auto passes = [&](const Interval& iv, double inc) {
    return std::abs(inc) > 2.0 * p.delta + p.m1 * iv.width();
  };

  RefineResult out;
  Interval cur = bracket;
  double inc = increment(cur);

  while (cur.width() > stop) {
    bool found = false;
    for (std::size_t k = 2; cur.width() / static_cast<double>(k) >= 0.5 * stop; k *= 2) {
      std::optional<Interval> best;
      double best_inc = 0.0;
      const double w = cur.width() / static_cast<double>(k);
      for (std::size_t i = 0; i < k; ++i) {
        Interval sub{snap(cur.lo + static_cast<double>(i) * w),
                     i + 1 == k ? cur.hi : snap(cur.lo + static_cast<double>(i + 1) * w)};
        if (!(sub.hi > sub.lo)) continue;
        const double s = increment(sub);
        if (passes(sub, s) && (!best || std::abs(s) > std::abs(best_inc))) {
          best = sub;
          best_inc = s;
        }
      }
      if (best) {
        cur = *best;
        inc = best_inc;
        found = true;
        break;
      }
    }
    ++out.iterations;
    if (!found)
      throw Error(ErrorCode::NotRefinable, "no sub-bracket separates the jump from smooth variation");
  }

  out.interval = cur;
  out.increment = inc;
  out.size_lower_bound = std::abs(inc) - 2.0 * p.delta - p.m1 * cur.width();
  if (!(out.size_lower_bound > 4.0 * p.delta))
    throw Error(ErrorCode::NotRefinable, "jump cannot be certified above the 4*delta floor");
  out.floor_reached = floor_width > p.target_width;
  const double half = 0.5 * cur.width();
  out.curvature_test =
      std::abs(inc) - 2.0 * half * p.m1 > 2.0 * p.delta + p.m2 * half * half;
  return out;
}

}  // namespace jumpscope
