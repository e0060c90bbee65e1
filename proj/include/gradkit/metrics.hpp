#pragma once

#include <algorithm>
#include <cmath>

#include "gradkit/grid.hpp"
#include "gradkit/iterative_poisson.hpp"
#include "gradkit/spectral_poisson.hpp"

namespace gradkit {

/// Discrete curl energy: sum over pixels with both forward neighbors inside of
/// [(p(u,v+1) - p(u,v)) - (q(u+1,v) - q(u,v))]^2.
///
/// Terms whose samples are not-a-value are skipped; fd_gradient leaves p(u,v+1)
/// undefined when (u+1,v+1) is outside the mask.
template <typename Scalar>
Scalar e_int(const GradientField<Scalar>& g) {
  const auto& mask = g.mask;
  Scalar e = 0;
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u) {
      if (!mask.contains(u, v) || !mask.contains(u + 1, v) || !mask.contains(u, v + 1)) continue;
      const Scalar t = (g.p(u, v + 1) - g.p(u, v)) - (g.q(u + 1, v) - g.q(u, v));
      if (std::isfinite(t)) e += t * t;
    }
  return e;
}

template <typename Scalar>
struct AlignedError {
  Scalar rmse;
  Scalar offset;  // additive constant (or multiplicative scale for rmse_scale_aligned)
};

/// RMSE after shifting z by the least-squares constant kappa = mean(z_gt - z).
template <typename Scalar>
AlignedError<Scalar> rmse_offset_aligned(const ScalarGrid<Scalar>& z, const ScalarGrid<Scalar>& z_gt,
                                         const DomainMask& mask) {
  if (!z.same_shape(z_gt) || !mask.same_shape(z)) throw UsageError("rmse_offset_aligned: dimension mismatch");
  Scalar kappa = 0;
  Index count = 0;
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v)) {
        kappa += z_gt(u, v) - z(u, v);
        ++count;
      }
  kappa /= Scalar(count);
  Scalar sq = 0;
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v)) {
        const Scalar d = z(u, v) + kappa - z_gt(u, v);
        sq += d * d;
      }
  return {std::sqrt(sq / Scalar(count)), kappa};
}

/// Depth-domain RMSE after the positive scale s = exp(mean(ln z_gt - ln z)), for
/// perspective reconstructions that are known only up to a factor.
template <typename Scalar>
AlignedError<Scalar> rmse_scale_aligned(const ScalarGrid<Scalar>& z, const ScalarGrid<Scalar>& z_gt,
                                        const DomainMask& mask) {
  if (!z.same_shape(z_gt) || !mask.same_shape(z)) throw UsageError("rmse_scale_aligned: dimension mismatch");
  Scalar log_ratio = 0;
  Index count = 0;
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v)) {
        if (!(z(u, v) > 0) || !(z_gt(u, v) > 0)) throw DataError("rmse_scale_aligned: nonpositive depth");
        log_ratio += std::log(z_gt(u, v)) - std::log(z(u, v));
        ++count;
      }
  const Scalar s = std::exp(log_ratio / Scalar(count));
  Scalar sq = 0;
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v)) {
        const Scalar d = s * z(u, v) - z_gt(u, v);
        sq += d * d;
      }
  return {std::sqrt(sq / Scalar(count)), s};
}

/// Max-norm residual of the per-pixel equations assembled by the solver matching `bc`:
/// natural -> masked least-squares normal equations; periodic -> wrapped stencil;
/// dirichlet -> interior stencil with b^D; neumann -> reflective stencil with b^N.
template <typename Scalar>
Scalar stencil_residual(const ScalarGrid<Scalar>& z, const GradientField<Scalar>& g, const BoundarySpec<Scalar>& bc) {
  if (!g.mask.same_shape(z)) throw UsageError("stencil_residual: dimension mismatch");
  bc.validate(g.width(), g.height());
  const Index m = g.width(), n = g.height();
  Scalar worst = 0;
  switch (bc.kind) {
    case BoundaryKind::natural:
      return system_residual(assemble_system(g), z);
    case BoundaryKind::periodic: {
      const auto r = periodic_rhs(g);
      for (Index v = 0; v < n; ++v)
        for (Index u = 0; u < m; ++u) {
          const Scalar lap = z((u + 1) % m, v) + z((u + m - 1) % m, v) + z(u, (v + 1) % n) + z(u, (v + n - 1) % n) -
                             Scalar(4) * z(u, v);
          worst = std::max(worst, std::abs(lap - r(v, u)));
        }
      return worst;
    }
    case BoundaryKind::dirichlet: {
      const auto& bd = *bc.data;
      const auto r = dirichlet_rhs(g, bd);
      // Ring values enter through r; interior unknowns see the ring as zero.
      const auto at = [&](Index u, Index v) {
        return (u == 0 || v == 0 || u == m - 1 || v == n - 1) ? Scalar(0) : z(u, v);
      };
      for (Index v = 1; v < n - 1; ++v)
        for (Index u = 1; u < m - 1; ++u) {
          const Scalar lap = at(u + 1, v) + at(u - 1, v) + at(u, v + 1) + at(u, v - 1) - Scalar(4) * z(u, v);
          worst = std::max(worst, std::abs(lap - r(v - 1, u - 1)));
        }
      return worst;
    }
    case BoundaryKind::neumann: {
      const auto r = neumann_rhs(g, *bc.data);
      for (Index v = 0; v < n; ++v)
        for (Index u = 0; u < m; ++u) {
          const Index ul = u == 0 ? 0 : u - 1, ur = u == m - 1 ? m - 1 : u + 1;
          const Index vd = v == 0 ? 0 : v - 1, vu = v == n - 1 ? n - 1 : v + 1;
          const Scalar lap = z(ur, v) + z(ul, v) + z(u, vu) + z(u, vd) - Scalar(4) * z(u, v);
          worst = std::max(worst, std::abs(lap - r(v, u)));
        }
      return worst;
    }
  }
  return worst;
}

}  // namespace gradkit
