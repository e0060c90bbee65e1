#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "gradkit/gradkit.hpp"

namespace testkit {

using namespace gradkit;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline ScalarGrid<double> random_grid(Index w, Index h, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarGrid<double> z(w, h);
  for (Index v = 0; v < h; ++v)
    for (Index u = 0; u < w; ++u) z(u, v) = d(rng);
  return z;
}

inline DomainMask disc_mask(Index size, double radius) {
  FlagArray f(size, size);
  const double c = (size - 1) / 2.0;
  for (Index v = 0; v < size; ++v)
    for (Index u = 0; u < size; ++u) f(v, u) = (u - c) * (u - c) + (v - c) * (v - c) <= radius * radius;
  return DomainMask(f);
}

inline double max_abs_diff(const ScalarGrid<double>& a, const ScalarGrid<double>& b, const DomainMask& mask) {
  double worst = 0;
  for (Index v = 0; v < mask.height(); ++v)
    for (Index u = 0; u < mask.width(); ++u)
      if (mask.contains(u, v)) worst = std::max(worst, std::abs(a(u, v) - b(u, v)));
  return worst;
}

inline ScalarGrid<double> minus_mean(ScalarGrid<double> z, const DomainMask& mask) {
  const double m = masked_mean(z, mask);
  z.array() -= m;
  return z;
}

inline double max_abs_diff_centered(const ScalarGrid<double>& a, const ScalarGrid<double>& b, const DomainMask& mask) {
  return max_abs_diff(minus_mean(a, mask), minus_mean(b, mask), mask);
}

// Least squares over the edge residuals written directly from the energy:
// one row per edge, z(to) - z(from) = edge average, plus one row pinning the mean.
// Solved densely with a complete orthogonal decomposition.
inline ScalarGrid<double> dense_least_squares(const GradientField<double>& g) {
  const auto& mask = g.mask;
  std::vector<Pixel> pixels;
  RasterArray<Index> id = RasterArray<Index>::Constant(g.height(), g.width(), -1);
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u)
      if (mask.contains(u, v)) {
        id(v, u) = Index(pixels.size());
        pixels.push_back({u, v});
      }
  const Index n = Index(pixels.size());
  std::vector<std::tuple<Index, Index, double>> edges;
  for (const auto& px : pixels) {
    if (mask.contains(px.u + 1, px.v))
      edges.emplace_back(id(px.v, px.u), id(px.v, px.u + 1), 0.5 * (g.p(px.u, px.v) + g.p(px.u + 1, px.v)));
    if (mask.contains(px.u, px.v + 1))
      edges.emplace_back(id(px.v, px.u), id(px.v + 1, px.u), 0.5 * (g.q(px.u, px.v) + g.q(px.u, px.v + 1)));
  }
  Mat a = Mat::Zero(Index(edges.size()) + 1, n);
  Vec b = Vec::Zero(Index(edges.size()) + 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [from, to, val] = edges[e];
    a(Index(e), from) = -1;
    a(Index(e), to) = 1;
    b(Index(e)) = val;
  }
  a.row(Index(edges.size())).setOnes();
  const Vec x = a.completeOrthogonalDecomposition().solve(b);
  ScalarGrid<double> z(g.width(), g.height(), ScalarGrid<double>::not_a_value());
  for (Index i = 0; i < n; ++i) z(pixels[i]) = x[i];
  return z;
}

// Interior unknowns of a w x h lattice with the ring prescribed:
// z(u+1)+z(u-1)+z(v+1)+z(v-1)-4z = rhs, solved by dense LU.
inline ScalarGrid<double> dense_dirichlet(const RasterArray<double>& rhs_interior, const ScalarGrid<double>& ring) {
  const Index w = ring.width(), h = ring.height(), iw = w - 2, ih = h - 2, n = iw * ih;
  const auto idx = [&](Index u, Index v) { return (v - 1) * iw + (u - 1); };
  Mat a = Mat::Zero(n, n);
  Vec b(n);
  for (Index v = 1; v < h - 1; ++v)
    for (Index u = 1; u < w - 1; ++u) {
      const Index i = idx(u, v);
      a(i, i) = -4;
      b(i) = rhs_interior(v - 1, u - 1);
      const Index nb[4][2] = {{u + 1, v}, {u - 1, v}, {u, v + 1}, {u, v - 1}};
      for (const auto& [nu, nv] : nb) {
        if (nu == 0 || nv == 0 || nu == w - 1 || nv == h - 1)
          b(i) -= ring(nu, nv);
        else
          a(i, idx(nu, nv)) = 1;
      }
    }
  const Vec x = a.partialPivLu().solve(b);
  ScalarGrid<double> z = ring;
  for (Index v = 1; v < h - 1; ++v)
    for (Index u = 1; u < w - 1; ++u) z(u, v) = x(idx(u, v));
  return z;
}

// Reflective five-point stencil (ghost sample = edge sample) with a zero-mean row appended.
inline ScalarGrid<double> dense_reflective(const RasterArray<double>& rhs) {
  const Index m = rhs.cols(), n = rhs.rows(), N = m * n;
  Mat a = Mat::Zero(N + 1, N);
  Vec b = Vec::Zero(N + 1);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) {
      const Index i = v * m + u;
      b(i) = rhs(v, u);
      const Index nb[4][2] = {{std::min(u + 1, m - 1), v}, {std::max(u - 1, Index(0)), v},
                              {u, std::min(v + 1, n - 1)}, {u, std::max(v - 1, Index(0))}};
      for (const auto& [nu, nv] : nb) a(i, nv * m + nu) += 1;
      a(i, i) -= 4;
    }
  a.row(N).setOnes();
  const Vec x = a.completeOrthogonalDecomposition().solve(b);
  ScalarGrid<double> z(m, n);
  for (Index i = 0; i < N; ++i) z(i % m, i / m) = x(i);
  return z;
}

// Direct O(N^4) summations of the three transforms.
inline ComplexArray<double> direct_dft2(const RasterArray<double>& f) {
  const Index m = f.cols(), n = f.rows();
  ComplexArray<double> out(n, m);
  const double pi = std::numbers::pi;
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < m; ++k) {
      std::complex<double> s = 0;
      for (Index v = 0; v < n; ++v)
        for (Index u = 0; u < m; ++u)
          s += f(v, u) * std::polar(1.0, -2 * pi * (double(k * u) / m + double(l * v) / n));
      out(l, k) = s;
    }
  return out;
}

// f is (n-1) x (m-1) on integer nodes u = 1..m-1.
inline RasterArray<double> direct_sine2(const RasterArray<double>& f) {
  const Index m = f.cols() + 1, n = f.rows() + 1;
  RasterArray<double> out(n - 1, m - 1);
  const double pi = std::numbers::pi;
  for (Index l = 1; l < n; ++l)
    for (Index k = 1; k < m; ++k) {
      double s = 0;
      for (Index v = 1; v < n; ++v)
        for (Index u = 1; u < m; ++u) s += f(v - 1, u - 1) * std::sin(pi * k * u / m) * std::sin(pi * l * v / n);
      out(l - 1, k - 1) = s;
    }
  return out;
}

inline RasterArray<double> direct_cosine2(const RasterArray<double>& f) {
  const Index m = f.cols(), n = f.rows();
  RasterArray<double> out(n, m);
  const double pi = std::numbers::pi;
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < m; ++k) {
      double s = 0;
      for (Index v = 0; v < n; ++v)
        for (Index u = 0; u < m; ++u)
          s += f(v, u) * std::cos(pi * k * (2 * u + 1) / (2.0 * m)) * std::cos(pi * l * (2 * v + 1) / (2.0 * n));
      out(l, k) = s;
    }
  return out;
}

inline GradientField<double> full_field(const ScalarGrid<double>& p, const ScalarGrid<double>& q) {
  return {p, q, DomainMask::full(p.width(), p.height())};
}

inline GradientField<double> zero_field(Index w, Index h) { return full_field(ScalarGrid<double>(w, h), ScalarGrid<double>(w, h)); }

// p, q on a w x h grid whose centered divergence on the interior equals rhs_interior:
// p(u+1) = p(u-1) + 2 * (u-part), started from zeros; q carries nothing.
inline GradientField<double> field_with_divergence(const RasterArray<double>& rhs_interior) {
  const Index w = rhs_interior.cols() + 2, h = rhs_interior.rows() + 2;
  ScalarGrid<double> p(w, h, 0.0), q(w, h, 0.0);
  for (Index v = 1; v < h - 1; ++v)
    for (Index u = 1; u < w - 1; ++u) p(u + 1, v) = p(u - 1, v) + 2 * rhs_interior(v - 1, u - 1);
  return full_field(p, q);
}

inline RasterArray<double> interior_laplacian(const ScalarGrid<double>& z) {
  const Index w = z.width(), h = z.height();
  RasterArray<double> r(h - 2, w - 2);
  for (Index v = 1; v < h - 1; ++v)
    for (Index u = 1; u < w - 1; ++u) r(v - 1, u - 1) = z(u + 1, v) + z(u - 1, v) + z(u, v + 1) + z(u, v - 1) - 4 * z(u, v);
  return r;
}

inline RasterArray<double> wrapped_laplacian(const ScalarGrid<double>& z) {
  const Index m = z.width(), n = z.height();
  RasterArray<double> r(n, m);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u)
      r(v, u) = z((u + 1) % m, v) + z((u + m - 1) % m, v) + z(u, (v + 1) % n) + z(u, (v + n - 1) % n) - 4 * z(u, v);
  return r;
}

inline RasterArray<double> reflective_laplacian(const ScalarGrid<double>& z) {
  const Index m = z.width(), n = z.height();
  RasterArray<double> r(n, m);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u)
      r(v, u) = z(std::min(u + 1, m - 1), v) + z(std::max<Index>(u - 1, 0), v) + z(u, std::min(v + 1, n - 1)) +
                z(u, std::max<Index>(v - 1, 0)) - 4 * z(u, v);
  return r;
}

// Non-periodic smooth surface: ramp plus two bumps, with its analytic gradient.
inline SyntheticSurface<double> ramp_and_bumps(Index m, Index n, double tilt_u, double tilt_v, double c1, double c2) {
  ScalarGrid<double> z(m, n), p(m, n), q(m, n);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) {
      const double x = double(u) / m, y = double(v) / n;
      const double b1 = std::exp(-((x - 0.35) * (x - 0.35) + (y - 0.4) * (y - 0.4)) / 0.02);
      const double b2 = std::exp(-((x - 0.7) * (x - 0.7) + (y - 0.65) * (y - 0.65)) / 0.03);
      z(u, v) = tilt_u * u + tilt_v * v + c1 * b1 + c2 * b2;
      p(u, v) = tilt_u + (c1 * b1 * (-2 * (x - 0.35) / 0.02) + c2 * b2 * (-2 * (x - 0.7) / 0.03)) / m;
      q(u, v) = tilt_v + (c1 * b1 * (-2 * (y - 0.4) / 0.02) + c2 * b2 * (-2 * (y - 0.65) / 0.03)) / n;
    }
  return {z, full_field(p, q), DomainMask::full(m, n)};
}

}  // namespace testkit
