#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "gradkit/grid.hpp"

namespace gradkit {

enum class SweepOrder { row_major, column_major };

namespace detail {

// Trapezoidal increment z(to) - z(from) along one axis edge.
template <typename Scalar>
Scalar edge_increment(const GradientField<Scalar>& g, const Pixel& from, const Pixel& to) {
  if (to.v == from.v) {
    const Scalar avg = (g.p(from) + g.p(to)) / Scalar(2);
    return to.u > from.u ? avg : -avg;
  }
  const Scalar avg = (g.q(from) + g.q(to)) / Scalar(2);
  return to.v > from.v ? avg : -avg;
}

enum class StepPreference { along_v, along_u, random };

// Integrates over a monotone-staircase tree rooted at `origin`: every pixel is reached
// from its neighbor one step closer to the origin along u or along v. Pixels of the
// origin's component with no such neighbor are filled afterwards by breadth-first chaining.
template <typename Scalar>
ScalarGrid<Scalar> integrate_staircase(const GradientField<Scalar>& g, Pixel origin, StepPreference pref,
                                       std::mt19937_64* rng) {
  const auto& mask = g.mask;
  if (!mask.contains(origin)) throw UsageError("integrate_path: origin is outside the mask");

  const ComponentLabels comps = label_components(mask);
  const int comp = comps.label(origin.v, origin.u);

  std::vector<Pixel> order;
  for (Index v = 0; v < mask.height(); ++v)
    for (Index u = 0; u < mask.width(); ++u)
      if (comps.label(v, u) == comp) order.push_back({u, v});
  const auto dist = [&](const Pixel& px) { return std::abs(px.u - origin.u) + std::abs(px.v - origin.v); };
  std::stable_sort(order.begin(), order.end(), [&](const Pixel& a, const Pixel& b) { return dist(a) < dist(b); });

  ScalarGrid<Scalar> z(g.width(), g.height(), ScalarGrid<Scalar>::not_a_value());
  FlagArray done = FlagArray::Constant(g.height(), g.width(), false);
  z(origin) = Scalar(0);
  done(origin.v, origin.u) = true;

  const auto step = [](Index a, Index target) { return a > target ? a - 1 : a + 1; };
  for (const Pixel& px : order) {
    if (px == origin) continue;
    const bool can_u = px.u != origin.u && done(px.v, step(px.u, origin.u));
    const bool can_v = px.v != origin.v && done(step(px.v, origin.v), px.u);
    if (!can_u && !can_v) continue;
    bool use_u;
    if (can_u && can_v) {
      switch (pref) {
        case StepPreference::along_v: use_u = false; break;
        case StepPreference::along_u: use_u = true; break;
        default: use_u = ((*rng)() & 1u) != 0; break;
      }
    } else {
      use_u = can_u;
    }
    const Pixel pred = use_u ? Pixel{step(px.u, origin.u), px.v} : Pixel{px.u, step(px.v, origin.v)};
    z(px) = z(pred) + edge_increment(g, pred, px);
    done(px.v, px.u) = true;
  }

  std::deque<Pixel> queue;
  for (const Pixel& px : order)
    if (done(px.v, px.u)) queue.push_back(px);
  while (!queue.empty()) {
    const Pixel cur = queue.front();
    queue.pop_front();
    for (const auto& [du, dv] : kNeighborOffsets) {
      const Pixel nb{cur.u + du, cur.v + dv};
      if (!mask.contains(nb) || done(nb.v, nb.u)) continue;
      z(nb) = z(cur) + edge_increment(g, cur, nb);
      done(nb.v, nb.u) = true;
      queue.push_back(nb);
    }
  }
  return z;
}

}  // namespace detail

/// Integrates g along axis-aligned paths from `origin`, where z(origin) = 0.
///
/// row_major walks the origin's row first, then every column out from it; column_major
/// is the transpose. Each step adds the trapezoidal edge average of p or q. The output
/// covers the origin's connected component; other pixels stay not-a-value.
template <typename Scalar>
ScalarGrid<Scalar> integrate_path(const GradientField<Scalar>& g, Pixel origin, SweepOrder order) {
  return detail::integrate_staircase(
      g, origin, order == SweepOrder::row_major ? detail::StepPreference::along_v : detail::StepPreference::along_u,
      nullptr);
}

/// Mean of the row-major sweep, the column-major sweep and (n_paths - 2) random
/// monotone staircase sweeps drawn from `seed`.
///
/// The staircase ensemble stands in for the multi-path averaging schemes found in the
/// literature, which do not pin down a specific path family.
template <typename Scalar>
ScalarGrid<Scalar> integrate_multipath(const GradientField<Scalar>& g, Pixel origin, int n_paths,
                                       std::uint64_t seed) {
  if (n_paths < 2) throw UsageError("integrate_multipath: n_paths must be >= 2");
  ScalarGrid<Scalar> sum = integrate_path(g, origin, SweepOrder::row_major);
  sum.array() += integrate_path(g, origin, SweepOrder::column_major).array();
  for (int k = 2; k < n_paths; ++k) {
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(sseq);
    sum.array() += detail::integrate_staircase(g, origin, detail::StepPreference::random, &rng).array();
  }
  sum.array() /= Scalar(n_paths);
  return sum;
}

}  // namespace gradkit
