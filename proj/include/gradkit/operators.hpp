#pragma once

#include "gradkit/grid.hpp"

namespace gradkit {

/// Forward differences with unit spacing: p = z(u+1,v) - z(u,v), q = z(u,v+1) - z(u,v).
/// Samples whose forward neighbor is outside the mask are left as not-a-value.
template <typename Scalar>
GradientField<Scalar> fd_gradient(const ScalarGrid<Scalar>& z, const DomainMask& mask) {
  if (!mask.same_shape(z)) throw UsageError("fd_gradient: z and mask dimensions differ");
  const Scalar nan = ScalarGrid<Scalar>::not_a_value();
  ScalarGrid<Scalar> p(z.width(), z.height(), nan), q(z.width(), z.height(), nan);
  for (Index v = 0; v < z.height(); ++v) {
    for (Index u = 0; u < z.width(); ++u) {
      if (!mask.contains(u, v)) continue;
      if (mask.contains(u + 1, v)) p(u, v) = z(u + 1, v) - z(u, v);
      if (mask.contains(u, v + 1)) q(u, v) = z(u, v + 1) - z(u, v);
    }
  }
  return {std::move(p), std::move(q), mask};
}

/// Centered divergence (p(u+1)-p(u-1))/2 + (q(v+1)-q(v-1))/2 on interior pixels only.
template <typename Scalar>
ScalarGrid<Scalar> central_divergence(const GradientField<Scalar>& g) {
  const auto& mask = g.mask;
  ScalarGrid<Scalar> out(g.width(), g.height(), ScalarGrid<Scalar>::not_a_value());
  for (Index v = 0; v < g.height(); ++v) {
    for (Index u = 0; u < g.width(); ++u) {
      if (!mask.is_interior(u, v)) continue;
      out(u, v) = (g.p(u + 1, v) - g.p(u - 1, v)) / Scalar(2) + (g.q(u, v + 1) - g.q(u, v - 1)) / Scalar(2);
    }
  }
  return out;
}

/// Five-point Laplacian on interior pixels only.
template <typename Scalar>
ScalarGrid<Scalar> discrete_laplacian(const ScalarGrid<Scalar>& z, const DomainMask& mask) {
  if (!mask.same_shape(z)) throw UsageError("discrete_laplacian: z and mask dimensions differ");
  ScalarGrid<Scalar> out(z.width(), z.height(), ScalarGrid<Scalar>::not_a_value());
  for (Index v = 0; v < z.height(); ++v) {
    for (Index u = 0; u < z.width(); ++u) {
      if (!mask.is_interior(u, v)) continue;
      out(u, v) = z(u + 1, v) + z(u - 1, v) + z(u, v + 1) + z(u, v - 1) - Scalar(4) * z(u, v);
    }
  }
  return out;
}

}  // namespace gradkit
