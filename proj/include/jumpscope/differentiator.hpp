#pragma once

// Stable derivative estimate of noisy data by a central difference whose
// step is tied to the noise level, plus its guaranteed sup-norm error.

#include <jumpscope/model.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace jumpscope {

/// [f(x+h) - f(x-h)] / (2h). Throws OutOfDomain if x +- h leaves [0,1].
template <SignalSource S>
double central_difference(const S& src, double x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step h must be positive");
  const double right = x + h;
  const double left = x - h;
  if (left < -kDomainSlack || right > 1.0 + kDomainSlack)
    throw Error(ErrorCode::OutOfDomain, "central difference at x = " + std::to_string(x) +
                                            " with h = " + std::to_string(h) + " leaves [0,1]");
  return (src.eval(std::min(right, 1.0)) - src.eval(std::max(left, 0.0))) / (2.0 * h);
}

/// Sup-norm error of the estimate on regions free of discontinuities.
inline double error_bound(const StepPolicy& policy) {
  switch (policy.kind()) {
    case SmoothnessKind::Smooth:
      return std::sqrt(2.0 * policy.cls.m2 * policy.delta);
    case SmoothnessKind::Fractional:
      return detail::fractional_bound(policy.cls.a, policy.cls.ma, policy.delta);
    case SmoothnessKind::Linear:
      // Curvature term vanishes; only the noise term delta/h remains, taken
      // at the slope-estimation step.
      return policy.delta / policy.slope_h;
  }
  return 0.0;
}

/// One estimate per grid node, in index order. Discontinuities are not
/// masked here; the detector needs the raw values around them.
template <SignalSource S>
std::vector<DerivativeEstimate> derivative_table(const S& src, const DetectionGrid& grid,
                                                 double bound) {
  std::vector<DerivativeEstimate> table;
  table.reserve(grid.size());
  for (std::size_t j = 1; j <= grid.max_index; ++j) {
    const double x = grid.node(j);
    table.push_back({j, x, central_difference(src, x, grid.h), bound});
  }
  return table;
}

template <SignalSource S>
std::vector<DerivativeEstimate> derivative_table(const S& src, const DetectionGrid& grid,
                                                 const StepPolicy& policy) {
  return derivative_table(src, grid, error_bound(policy));
}

}  // namespace jumpscope
