#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gradkit/grid.hpp"

namespace gradkit {

/// Pixels whose depth is prescribed; they are removed from the unknowns.
template <typename Scalar>
struct PinnedValues {
  FlagArray pinned;
  ScalarGrid<Scalar> values;
};

/// Normal equations of the discrete least-squares functional over a masked grid.
///
/// Every inside, non-pinned pixel is one unknown with the equation
///   sum_{edges e at pixel} (z_neighbor - z_pixel) = rhs_pixel,
/// where an edge exists iff both endpoints are inside, and rhs collects +avg for the
/// +u/+v edges and -avg for the -u/-v edges (avg = edge mean of p or q). Links to pinned
/// neighbors are folded into `rhs` as -z_pinned.
template <typename Scalar>
struct PoissonSystem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  GradientField<Scalar> data;
  RasterArray<Index> unknown_of_pixel;    // -1 for outside or pinned pixels
  std::vector<Pixel> pixels;              // pixel of each unknown
  std::vector<std::array<Index, 4>> links;  // neighbor unknowns in +u,-u,+v,-v order, -1 if absent
  std::vector<int> diagonal;              // number of incident edges
  Vector rhs;
  std::optional<PinnedValues<Scalar>> pins;

  Index unknowns() const { return static_cast<Index>(pixels.size()); }

  /// Sparse form A with A z = rhs: A_ii = -diagonal_i, A_ij = 1 for linked neighbors.
  Eigen::SparseMatrix<Scalar> matrix() const {
    std::vector<Eigen::Triplet<Scalar>> trip;
    trip.reserve(pixels.size() * 5);
    for (Index i = 0; i < unknowns(); ++i) {
      trip.emplace_back(i, i, -Scalar(diagonal[i]));
      for (Index j : links[i])
        if (j >= 0) trip.emplace_back(i, j, Scalar(1));
    }
    Eigen::SparseMatrix<Scalar> a(unknowns(), unknowns());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
  }

  Vector gather(const ScalarGrid<Scalar>& z) const {
    Vector x(unknowns());
    for (Index i = 0; i < unknowns(); ++i) x[i] = z(pixels[i]);
    return x;
  }
};

template <typename Scalar>
PoissonSystem<Scalar> assemble_system(const GradientField<Scalar>& g,
                                      std::optional<PinnedValues<Scalar>> pins = std::nullopt) {
  const auto& mask = g.mask;
  if (pins && (pins->pinned.rows() != g.height() || pins->pinned.cols() != g.width() || !mask.same_shape(pins->values)))
    throw UsageError("assemble_system: pinned values dimension mismatch");
  const auto is_pinned = [&](Index u, Index v) { return pins && pins->pinned(v, u); };

  PoissonSystem<Scalar> sys{g, RasterArray<Index>::Constant(g.height(), g.width(), -1), {}, {}, {}, {}, pins};
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u)
      if (mask.contains(u, v) && !is_pinned(u, v)) {
        sys.unknown_of_pixel(v, u) = static_cast<Index>(sys.pixels.size());
        sys.pixels.push_back({u, v});
      }

  const Index n = sys.unknowns();
  sys.links.assign(n, {-1, -1, -1, -1});
  sys.diagonal.assign(n, 0);
  sys.rhs = PoissonSystem<Scalar>::Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const Pixel px = sys.pixels[i];
    for (int k = 0; k < 4; ++k) {
      const auto [du, dv] = kNeighborOffsets[k];
      const Index nu = px.u + du, nv = px.v + dv;
      if (!mask.contains(nu, nv)) continue;
      const Scalar avg = du != 0 ? (g.p(px) + g.p(nu, nv)) / Scalar(2) : (g.q(px) + g.q(nu, nv)) / Scalar(2);
      const bool forward = du + dv > 0;
      sys.rhs[i] += forward ? avg : -avg;
      ++sys.diagonal[i];
      if (is_pinned(nu, nv))
        sys.rhs[i] -= pins->values(nu, nv);
      else
        sys.links[i][k] = sys.unknown_of_pixel(nv, nu);
    }
  }
  return sys;
}

/// Discrete least-squares energy: squared edge residuals over all edges inside the mask.
template <typename Scalar>
Scalar energy_F_L2(const ScalarGrid<Scalar>& z, const GradientField<Scalar>& g) {
  if (!g.mask.same_shape(z)) throw UsageError("energy_F_L2: dimension mismatch");
  const auto& mask = g.mask;
  Scalar e = 0;
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u) {
      if (!mask.contains(u, v)) continue;
      if (mask.contains(u + 1, v)) {
        const Scalar r = z(u + 1, v) - z(u, v) - (g.p(u + 1, v) + g.p(u, v)) / Scalar(2);
        e += r * r;
      }
      if (mask.contains(u, v + 1)) {
        const Scalar r = z(u, v + 1) - z(u, v) - (g.q(u, v + 1) + g.q(u, v)) / Scalar(2);
        e += r * r;
      }
    }
  return e;
}

enum class IterativeMethod { jacobi, gauss_seidel, sor };

template <typename Scalar>
struct SolverConfig {
  IterativeMethod method = IterativeMethod::gauss_seidel;
  // Over-relaxation for sor; damping for jacobi (1 = plain Jacobi). Ignored by gauss_seidel.
  double relaxation = 1.0;
  // Max-update stopping threshold; <= 0 selects 1e-8 * max(1, |rhs|_inf).
  double tol = 0.0;
  long max_iters = 100000;
  std::optional<ScalarGrid<Scalar>> initial;

  void validate() const {
    if (!(relaxation > 0.0 && relaxation < 2.0)) throw ConfigError("SolverConfig: relaxation must lie in (0, 2)");
    if (max_iters < 1) throw ConfigError("SolverConfig: max_iters must be >= 1");
    if (std::isnan(tol)) throw ConfigError("SolverConfig: tol is NaN");
  }
};

struct SolveReport {
  long iterations = 0;
  double max_update = 0.0;
  double energy = 0.0;
  bool converged = false;
};

template <typename Scalar>
struct IterativeResult {
  ScalarGrid<Scalar> depth;
  SolveReport report;
};

namespace detail {

// Unknowns grouped per connected component of the link graph, with whether the
// component touches a pinned pixel (then it carries no free additive constant).
template <typename Scalar>
struct UnknownComponents {
  std::vector<std::vector<Index>> members;
  std::vector<bool> anchored;
};

template <typename Scalar>
UnknownComponents<Scalar> unknown_components(const PoissonSystem<Scalar>& sys) {
  UnknownComponents<Scalar> out;
  std::vector<int> comp(sys.unknowns(), -1);
  std::vector<Index> stack;
  for (Index s = 0; s < sys.unknowns(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.members.size());
    out.members.emplace_back();
    out.anchored.push_back(false);
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index i = stack.back();
      stack.pop_back();
      out.members[id].push_back(i);
      int linked = 0;
      for (Index j : sys.links[i])
        if (j >= 0) {
          ++linked;
          if (comp[j] < 0) {
            comp[j] = id;
            stack.push_back(j);
          }
        }
      if (linked < sys.diagonal[i]) out.anchored[id] = true;
    }
  }
  return out;
}

template <typename Scalar, typename Vector>
void remove_component_means(const UnknownComponents<Scalar>& comps, const PoissonSystem<Scalar>& sys, Vector& x) {
  for (std::size_t c = 0; c < comps.members.size(); ++c) {
    const auto& mem = comps.members[c];
    if (comps.anchored[c]) continue;
    if (mem.size() == 1 && sys.diagonal[mem[0]] == 0) continue;  // isolated pixel keeps its initial value
    Scalar mean = 0;
    for (Index i : mem) mean += x[i];
    mean /= Scalar(mem.size());
    for (Index i : mem) x[i] -= mean;
  }
}

}  // namespace detail

/// Iteratively solves the assembled normal equations.
///
/// Gauss-Seidel and SOR sweep in red-black order ((u+v) even first), so the sweep
/// schedule is fixed. Free components are re-centered to zero mean every 1000 iterations
/// and at output. Non-convergence is reported, not thrown.
template <typename Scalar>
IterativeResult<Scalar> solve(const PoissonSystem<Scalar>& sys, const SolverConfig<Scalar>& cfg) {
  cfg.validate();
  using Vector = typename PoissonSystem<Scalar>::Vector;
  const Index n = sys.unknowns();
  const auto& g = sys.data;

  Vector x = Vector::Zero(n);
  if (cfg.initial) {
    if (!g.mask.same_shape(*cfg.initial)) throw UsageError("solve: initial grid dimension mismatch");
    x = sys.gather(*cfg.initial);
  }
  const Scalar rhs_inf = n ? sys.rhs.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar tol = cfg.tol > 0 ? Scalar(cfg.tol) : Scalar(1e-8) * std::max(Scalar(1), rhs_inf);
  const auto comps = detail::unknown_components(sys);

  std::vector<Index> red, black;
  for (Index i = 0; i < n; ++i) ((sys.pixels[i].u + sys.pixels[i].v) % 2 == 0 ? red : black).push_back(i);

  const auto relaxed_value = [&](const Vector& src, Index i) {
    Scalar s = -sys.rhs[i];
    for (Index j : sys.links[i])
      if (j >= 0) s += src[j];
    return s / Scalar(sys.diagonal[i]);
  };

  SolveReport report;
  Vector next(n);
  const Scalar omega = Scalar(cfg.relaxation);
  for (long it = 1; it <= cfg.max_iters; ++it) {
    Scalar max_update = 0;
    if (cfg.method == IterativeMethod::jacobi) {
      for (Index i = 0; i < n; ++i) {
        if (sys.diagonal[i] == 0) {
          next[i] = x[i];
          continue;
        }
        next[i] = x[i] + omega * (relaxed_value(x, i) - x[i]);
        max_update = std::max(max_update, std::abs(next[i] - x[i]));
      }
      x.swap(next);
    } else {
      const Scalar w = cfg.method == IterativeMethod::sor ? omega : Scalar(1);
      for (const auto* color : {&red, &black})
        for (Index i : *color) {
          if (sys.diagonal[i] == 0) continue;
          const Scalar delta = w * (relaxed_value(x, i) - x[i]);
          x[i] += delta;
          max_update = std::max(max_update, std::abs(delta));
        }
    }
    report.iterations = it;
    report.max_update = static_cast<double>(max_update);
    if (!(max_update >= tol)) {  // also stops on NaN
      report.converged = max_update < tol;
      break;
    }
    if (it % 1000 == 0) detail::remove_component_means(comps, sys, x);
  }
  detail::remove_component_means(comps, sys, x);

  ScalarGrid<Scalar> z(g.width(), g.height(), ScalarGrid<Scalar>::not_a_value());
  for (Index i = 0; i < n; ++i) z(sys.pixels[i]) = x[i];
  if (sys.pins)
    for (Index v = 0; v < g.height(); ++v)
      for (Index u = 0; u < g.width(); ++u)
        if (g.mask.contains(u, v) && sys.pins->pinned(v, u)) z(u, v) = sys.pins->values(u, v);
  report.energy = static_cast<double>(energy_F_L2(z, g));
  return {std::move(z), report};
}

/// Max-norm residual of the assembled equations for a candidate solution.
template <typename Scalar>
Scalar system_residual(const PoissonSystem<Scalar>& sys, const ScalarGrid<Scalar>& z) {
  Scalar worst = 0;
  for (Index i = 0; i < sys.unknowns(); ++i) {
    Scalar lhs = -Scalar(sys.diagonal[i]) * z(sys.pixels[i]);
    for (Index j : sys.links[i])
      if (j >= 0) lhs += z(sys.pixels[j]);
    worst = std::max(worst, std::abs(lhs - sys.rhs[i]));
  }
  return worst;
}

}  // namespace gradkit
