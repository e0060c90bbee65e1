#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "gradkit/grid.hpp"
#include "gradkit/transforms.hpp"

namespace gradkit {

enum class BoundaryKind { periodic, dirichlet, neumann, natural };

/// Boundary condition for the rectangular solvers. `data` is a grid the size of the
/// gradient field whose boundary ring carries b^D (dirichlet) or b^N = grad z . eta
/// (neumann, eta the outward normal; corners use the diagonal normal). Interior values
/// are ignored.
template <typename Scalar>
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::natural;
  std::optional<ScalarGrid<Scalar>> data;

  static BoundarySpec periodic() { return {BoundaryKind::periodic, std::nullopt}; }
  static BoundarySpec natural() { return {BoundaryKind::natural, std::nullopt}; }
  static BoundarySpec dirichlet(ScalarGrid<Scalar> values) { return {BoundaryKind::dirichlet, std::move(values)}; }
  static BoundarySpec neumann(ScalarGrid<Scalar> values) { return {BoundaryKind::neumann, std::move(values)}; }

  void validate(Index width, Index height) const {
    const bool needs = kind == BoundaryKind::dirichlet || kind == BoundaryKind::neumann;
    if (needs != data.has_value())
      throw ConfigError(needs ? "boundary condition requires boundary data" : "boundary condition takes no data");
    if (!data) return;
    if (data->width() != width || data->height() != height)
      throw ConfigError("boundary data dimensions differ from the gradient field");
    for (Index v = 0; v < height; ++v)
      for (Index u = 0; u < width; ++u)
        if ((u == 0 || v == 0 || u == width - 1 || v == height - 1) && !std::isfinite((*data)(u, v)))
          throw ConfigError("boundary data is not finite on the boundary ring");
  }
};

enum class SpectrumKind { fourier, sine, cosine };

template <typename Coeff>
struct SpectrumGrid {
  SpectrumKind kind;
  RasterArray<Coeff> coeffs;  // (rows = l, cols = k)
};

/// Fourier convention for the continuous projection: angular pulsations or cycles per
/// sample. `frequency_without_two_pi` reproduces a known implementation bug and exists
/// only for regression testing.
enum class FourierConvention { pulsation, frequency, frequency_without_two_pi };

namespace detail {

template <typename Scalar>
void require_rectangular(const GradientField<Scalar>& g, Index min_size, const char* who) {
  if (!g.mask.is_full())
    throw UnsupportedDomainError(std::string(who) + ": only full rectangular domains are supported");
  if (g.width() < min_size || g.height() < min_size)
    throw UnsupportedDomainError(std::string(who) + ": grid is too small");
}

inline Index signed_index(Index k, Index m) { return k <= m / 2 ? k : k - m; }

template <typename Scalar>
Scalar sin2(Scalar x) {
  const Scalar s = std::sin(x);
  return s * s;
}

}  // namespace detail

/// Frankot-Chellappa projection onto the Fourier basis, returning the complex inverse
/// transform (the real part is the depth; the imaginary part is round-off).
///
/// Signed indices map k > m/2 to k - m. At an even-length Nyquist index the odd
/// derivative multiplier is zeroed so that the spectrum stays Hermitian.
template <typename Scalar>
ComplexArray<Scalar> solve_fc_continuous_complex(const GradientField<Scalar>& g, FourierConvention convention,
                                                 TransformPath path = TransformPath::fast) {
  using C = std::complex<Scalar>;
  detail::require_rectangular(g, 1, "solve_fc_continuous");
  const Index m = g.width(), n = g.height();
  const auto ph = dft2<Scalar>(g.p.array(), path), qh = dft2<Scalar>(g.q.array(), path);
  ComplexArray<Scalar> zh = ComplexArray<Scalar>::Zero(n, m);
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const C j(0, 1);
  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < m; ++k) {
      if (k == 0 && l == 0) continue;
      const Scalar fu = Scalar(detail::signed_index(k, m)) / Scalar(m);
      const Scalar fv = Scalar(detail::signed_index(l, n)) / Scalar(n);
      const Scalar nu = (m % 2 == 0 && 2 * k == m) ? Scalar(0) : fu;
      const Scalar nv = (n % 2 == 0 && 2 * l == n) ? Scalar(0) : fv;
      switch (convention) {
        case FourierConvention::pulsation: {
          const Scalar wu = two_pi * fu, wv = two_pi * fv;
          zh(l, k) = (two_pi * nu * ph(l, k) + two_pi * nv * qh(l, k)) / (j * (wu * wu + wv * wv));
          break;
        }
        case FourierConvention::frequency:
          zh(l, k) = (nu * ph(l, k) + nv * qh(l, k)) / (two_pi * j * (fu * fu + fv * fv));
          break;
        case FourierConvention::frequency_without_two_pi:
          zh(l, k) = (nu * ph(l, k) + nv * qh(l, k)) / (j * (fu * fu + fv * fv));
          break;
      }
    }
  }
  return inverse_dft2<Scalar>(zh, path);
}

template <typename Scalar>
ScalarGrid<Scalar> solve_fc_continuous(const GradientField<Scalar>& g,
                                       FourierConvention convention = FourierConvention::pulsation,
                                       TransformPath path = TransformPath::fast) {
  return ScalarGrid<Scalar>(solve_fc_continuous_complex(g, convention, path).real().eval());
}

// --- discrete Poisson solvers on explicit right-hand sides -------------------------------

/// Spectrum of the wrapped five-point Poisson solution for an m x n right-hand side.
template <typename Scalar>
SpectrumGrid<std::complex<Scalar>> periodic_spectrum(const RasterArray<Scalar>& rhs,
                                                     TransformPath path = TransformPath::fast) {
  const Index m = rhs.cols(), n = rhs.rows();
  auto zh = dft2<Scalar>(rhs, path);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < m; ++k) {
      if (k == 0 && l == 0) {
        zh(l, k) = 0;
        continue;
      }
      zh(l, k) /= -Scalar(4) * (detail::sin2(pi * Scalar(k) / Scalar(m)) + detail::sin2(pi * Scalar(l) / Scalar(n)));
    }
  return {SpectrumKind::fourier, std::move(zh)};
}

/// Zero-mean z with wrapped Laplacian(z) = rhs - mean(rhs).
template <typename Scalar>
RasterArray<Scalar> poisson_periodic(const RasterArray<Scalar>& rhs, TransformPath path = TransformPath::fast) {
  return inverse_dft2<Scalar>(periodic_spectrum(rhs, path).coeffs, path).real();
}

/// Spectrum of the homogeneous-Dirichlet solution for an (m-1) x (n-1) interior right-hand side.
template <typename Scalar>
SpectrumGrid<Scalar> dirichlet_spectrum(const RasterArray<Scalar>& rhs_interior,
                                        TransformPath path = TransformPath::fast) {
  const Index m = rhs_interior.cols() + 1, n = rhs_interior.rows() + 1;
  auto zb = sine2<Scalar>(rhs_interior, path);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (Index l = 1; l < n; ++l)
    for (Index k = 1; k < m; ++k)
      zb(l - 1, k - 1) /=
          -Scalar(4) * (detail::sin2(pi * Scalar(k) / Scalar(2 * m)) + detail::sin2(pi * Scalar(l) / Scalar(2 * n)));
  return {SpectrumKind::sine, std::move(zb)};
}

template <typename Scalar>
RasterArray<Scalar> poisson_dirichlet(const RasterArray<Scalar>& rhs_interior,
                                      TransformPath path = TransformPath::fast) {
  return inverse_sine2<Scalar>(dirichlet_spectrum(rhs_interior, path).coeffs, path);
}

/// Spectrum of the reflective (homogeneous Neumann) solution; coefficient (0,0) is
/// indeterminate and set to zero.
template <typename Scalar>
SpectrumGrid<Scalar> neumann_spectrum(const RasterArray<Scalar>& rhs, TransformPath path = TransformPath::fast) {
  const Index m = rhs.cols(), n = rhs.rows();
  auto zc = cosine2<Scalar>(rhs, path);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < m; ++k) {
      if (k == 0 && l == 0) {
        zc(l, k) = 0;
        continue;
      }
      zc(l, k) /=
          -Scalar(4) * (detail::sin2(pi * Scalar(k) / Scalar(2 * m)) + detail::sin2(pi * Scalar(l) / Scalar(2 * n)));
    }
  return {SpectrumKind::cosine, std::move(zc)};
}

template <typename Scalar>
RasterArray<Scalar> poisson_neumann(const RasterArray<Scalar>& rhs, TransformPath path = TransformPath::fast) {
  return inverse_cosine2<Scalar>(neumann_spectrum(rhs, path).coeffs, path);
}

// --- right-hand side assembly --------------------------------------------------------------

/// Wrapped centered divergence over the whole rectangle.
template <typename Scalar>
RasterArray<Scalar> periodic_rhs(const GradientField<Scalar>& g) {
  const Index m = g.width(), n = g.height();
  RasterArray<Scalar> r(n, m);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u)
      r(v, u) = (g.p((u + 1) % m, v) - g.p((u + m - 1) % m, v)) / Scalar(2) +
                (g.q(u, (v + 1) % n) - g.q(u, (v + n - 1) % n)) / Scalar(2);
  return r;
}

/// Interior right-hand side: centered divergence minus b^D of every ring neighbor.
template <typename Scalar>
RasterArray<Scalar> dirichlet_rhs(const GradientField<Scalar>& g, const ScalarGrid<Scalar>& boundary) {
  const Index w = g.width(), h = g.height();
  RasterArray<Scalar> r(h - 2, w - 2);
  for (Index v = 1; v < h - 1; ++v)
    for (Index u = 1; u < w - 1; ++u) {
      Scalar val = (g.p(u + 1, v) - g.p(u - 1, v)) / Scalar(2) + (g.q(u, v + 1) - g.q(u, v - 1)) / Scalar(2);
      if (u == 1) val -= boundary(0, v);
      if (u == w - 2) val -= boundary(w - 1, v);
      if (v == 1) val -= boundary(u, 0);
      if (v == h - 2) val -= boundary(u, h - 1);
      r(v - 1, u - 1) = val;
    }
  return r;
}

/// b^N = g . eta on the boundary ring (eta the outward normal, diagonal at corners).
template <typename Scalar>
ScalarGrid<Scalar> natural_neumann_data(const GradientField<Scalar>& g) {
  const Index m = g.width(), n = g.height();
  ScalarGrid<Scalar> b(m, n, ScalarGrid<Scalar>::not_a_value());
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) {
      const int eu = u == 0 ? -1 : (u == m - 1 ? 1 : 0);
      const int ev = v == 0 ? -1 : (v == n - 1 ? 1 : 0);
      if (eu == 0 && ev == 0) continue;
      const Scalar norm = (eu != 0 && ev != 0) ? std::numbers::sqrt2_v<Scalar> : Scalar(1);
      b(u, v) = (Scalar(eu) * g.p(u, v) + Scalar(ev) * g.q(u, v)) / norm;
    }
  return b;
}

/// Right-hand side of the reflective stencil: centered divergence with the ghost samples
/// of p and q replaced by the edge value, minus b^N on edges and sqrt(2) b^N at corners.
template <typename Scalar>
RasterArray<Scalar> neumann_rhs(const GradientField<Scalar>& g, const ScalarGrid<Scalar>& bn) {
  const Index m = g.width(), n = g.height();
  RasterArray<Scalar> r(n, m);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) {
      const Index ul = u == 0 ? 0 : u - 1, ur = u == m - 1 ? m - 1 : u + 1;
      const Index vd = v == 0 ? 0 : v - 1, vu = v == n - 1 ? n - 1 : v + 1;
      Scalar val = (g.p(ur, v) - g.p(ul, v)) / Scalar(2) + (g.q(u, vu) - g.q(u, vd)) / Scalar(2);
      const bool edge_u = u == 0 || u == m - 1, edge_v = v == 0 || v == n - 1;
      if (edge_u && edge_v)
        val -= std::numbers::sqrt2_v<Scalar> * bn(u, v);
      else if (edge_u || edge_v)
        val -= bn(u, v);
      r(v, u) = val;
    }
  return r;
}

// --- gradient-field solvers ----------------------------------------------------------------

/// Discrete Fourier solver of the centered five-point Poisson equation (periodic).
template <typename Scalar>
ScalarGrid<Scalar> solve_scs_periodic(const GradientField<Scalar>& g, TransformPath path = TransformPath::fast) {
  using C = std::complex<Scalar>;
  detail::require_rectangular(g, 1, "solve_scs_periodic");
  const Index m = g.width(), n = g.height();
  const auto ph = dft2<Scalar>(g.p.array(), path), qh = dft2<Scalar>(g.q.array(), path);
  ComplexArray<Scalar> zh = ComplexArray<Scalar>::Zero(n, m);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const C j(0, 1);
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < m; ++k) {
      if (k == 0 && l == 0) continue;
      const Scalar su = std::sin(Scalar(2) * pi * Scalar(k) / Scalar(m));
      const Scalar sv = std::sin(Scalar(2) * pi * Scalar(l) / Scalar(n));
      const Scalar den = detail::sin2(pi * Scalar(k) / Scalar(m)) + detail::sin2(pi * Scalar(l) / Scalar(n));
      zh(l, k) = (su * ph(l, k) + sv * qh(l, k)) / (Scalar(4) * j * den);
    }
  return ScalarGrid<Scalar>(inverse_dft2<Scalar>(zh, path).real().eval());
}

/// Sine-transform solver with prescribed boundary values b^D on the ring of the
/// (m+1) x (n+1) lattice; the (m-1) x (n-1) interior points are the unknowns.
template <typename Scalar>
ScalarGrid<Scalar> solve_scs_dirichlet(const GradientField<Scalar>& g, const BoundarySpec<Scalar>& bc,
                                       TransformPath path = TransformPath::fast) {
  detail::require_rectangular(g, 3, "solve_scs_dirichlet");
  if (bc.kind != BoundaryKind::dirichlet) throw ConfigError("solve_scs_dirichlet: boundary kind must be dirichlet");
  bc.validate(g.width(), g.height());
  const auto& bd = *bc.data;
  const auto interior = poisson_dirichlet<Scalar>(dirichlet_rhs(g, bd), path);
  ScalarGrid<Scalar> z = bd;
  z.array().block(1, 1, interior.rows(), interior.cols()) = interior;
  return z;
}

/// Cosine-transform solver under a Neumann condition (given b^N, or the natural
/// condition b^N = g . eta). Output is zero-mean.
template <typename Scalar>
ScalarGrid<Scalar> solve_scs_neumann(const GradientField<Scalar>& g,
                                     const BoundarySpec<Scalar>& bc = BoundarySpec<Scalar>::natural(),
                                     TransformPath path = TransformPath::fast) {
  detail::require_rectangular(g, 2, "solve_scs_neumann");
  if (bc.kind != BoundaryKind::neumann && bc.kind != BoundaryKind::natural)
    throw ConfigError("solve_scs_neumann: boundary kind must be neumann or natural");
  bc.validate(g.width(), g.height());
  const ScalarGrid<Scalar> bn = bc.kind == BoundaryKind::natural ? natural_neumann_data(g) : *bc.data;
  return ScalarGrid<Scalar>(poisson_neumann<Scalar>(neumann_rhs(g, bn), path));
}

}  // namespace gradkit
