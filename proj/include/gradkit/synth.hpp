#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>

#include "gradkit/camera.hpp"
#include "gradkit/grid.hpp"

namespace gradkit {

enum class HarmonicFamily { cos_exp, sin_exp };

namespace surface {
struct Vase {};
struct Plane {
  double a = 0.0, b = 0.0;
};
struct PeaksSmooth {};
struct SineProduct {
  double kx = 1.0, ky = 1.0;
};
struct Harmonic {
  HarmonicFamily family = HarmonicFamily::cos_exp;
  double omega = 0.1;
};
}  // namespace surface

using SurfaceKind = std::variant<surface::Vase, surface::Plane, surface::PeaksSmooth, surface::SineProduct, surface::Harmonic>;

/// Ground-truth depth with its analytic gradient. `gradient.mask` is the full grid;
/// `silhouette` is the object's support (the full grid except for the vase).
template <typename Scalar>
struct SyntheticSurface {
  ScalarGrid<Scalar> depth;
  GradientField<Scalar> gradient;
  DomainMask silhouette;
};

namespace detail {

struct SurfaceSample {
  double z = 0, dzdu = 0, dzdv = 0;
  bool inside = true;
};

// Half surface of revolution lying on the ground z = 0, with a profile radius r(v)
// that swells in the middle and flares at the top.
inline SurfaceSample vase_sample(double u, double v, double m, double n) {
  const double pi = std::numbers::pi;
  const double t = (v - 0.15 * n) / (0.7 * n);
  if (t < 0.0 || t > 1.0) return {0, 0, 0, false};
  const double shape = 0.55 + 0.45 * std::sin(pi * t) * (1.0 - 0.35 * std::cos(3 * pi * t));
  const double r = 0.25 * m * shape;
  const double dshape_dt = 0.45 * (pi * std::cos(pi * t) * (1.0 - 0.35 * std::cos(3 * pi * t)) +
                                   std::sin(pi * t) * 0.35 * 3 * pi * std::sin(3 * pi * t));
  const double dr_dv = 0.25 * m * dshape_dt / (0.7 * n);
  const double x = u - m / 2.0;
  const double h2 = r * r - x * x;
  if (h2 <= 0.0) return {0, 0, 0, false};
  const double z = std::sqrt(h2);
  return {z, -x / z, r * dr_dv / z, true};
}

inline SurfaceSample peaks_sample(double u, double v, double m, double n) {
  const double su = 6.0 / (m - 1), sv = 6.0 / (n - 1);
  const double x = su * u - 3.0, y = sv * v - 3.0;
  const double ea = std::exp(-x * x - (y + 1) * (y + 1));
  const double eb = std::exp(-x * x - y * y);
  const double ec = std::exp(-(x + 1) * (x + 1) - y * y);
  const double poly = x / 5 - x * x * x - std::pow(y, 5);
  const double a = 3 * (1 - x) * (1 - x) * ea;
  const double b = -10 * poly * eb;
  const double c = -ec / 3;
  const double da_dx = ea * (-6 * (1 - x) - 6 * x * (1 - x) * (1 - x));
  const double da_dy = -2 * (y + 1) * a;
  const double db_dx = -10 * eb * ((0.2 - 3 * x * x) - 2 * x * poly);
  const double db_dy = -10 * eb * (-5 * std::pow(y, 4) - 2 * y * poly);
  const double dc_dx = -2 * (x + 1) * c;
  const double dc_dy = -2 * y * c;
  return {a + b + c, (da_dx + db_dx + dc_dx) * su, (da_dy + db_dy + dc_dy) * sv, true};
}

inline SurfaceSample harmonic_sample(HarmonicFamily family, double omega, double u, double v) {
  const double e = std::exp(omega * v), c = std::cos(omega * u), s = std::sin(omega * u);
  if (family == HarmonicFamily::cos_exp) return {c * e, -omega * s * e, omega * c * e, true};
  return {s * e, omega * c * e, omega * s * e, true};
}

}  // namespace detail

/// Samples depth and closed-form gradient at integer pixel coordinates (u, v).
///
/// Vase: ground z = 0; for v in [0.15n, 0.85n] and |u - m/2| < r(v) the depth is
/// sqrt(r^2 - (u - m/2)^2) with r(v) = 0.25 m (0.55 + 0.45 sin(pi t)(1 - 0.35 cos(3 pi t))),
/// t = (v - 0.15n)/(0.7n). Its silhouette is the strict interior, where the gradient is finite.
template <typename Scalar>
SyntheticSurface<Scalar> make_surface(const SurfaceKind& kind, Index m, Index n) {
  if (m < 16 || n < 16) throw UsageError("make_surface: grid must be at least 16 x 16");
  ScalarGrid<Scalar> z(m, n), p(m, n), q(m, n);
  FlagArray sil = FlagArray::Constant(n, m, true);
  const double md = double(m), nd = double(n);
  for (Index v = 0; v < n; ++v) {
    for (Index u = 0; u < m; ++u) {
      const double ud = double(u), vd = double(v);
      const detail::SurfaceSample s = std::visit(
          [&](const auto& k) -> detail::SurfaceSample {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, surface::Vase>) {
              return detail::vase_sample(ud, vd, md, nd);
            } else if constexpr (std::is_same_v<K, surface::Plane>) {
              return {k.a * ud + k.b * vd, k.a, k.b, true};
            } else if constexpr (std::is_same_v<K, surface::PeaksSmooth>) {
              return detail::peaks_sample(ud, vd, md, nd);
            } else if constexpr (std::is_same_v<K, surface::SineProduct>) {
              const double wu = 2 * std::numbers::pi * k.kx / md, wv = 2 * std::numbers::pi * k.ky / nd;
              return {std::sin(wu * ud) * std::sin(wv * vd), wu * std::cos(wu * ud) * std::sin(wv * vd),
                      wv * std::sin(wu * ud) * std::cos(wv * vd), true};
            } else {
              if (!(k.omega > 0)) throw UsageError("make_surface: harmonic omega must be > 0");
              if (k.omega * nd > 700) throw UsageError("make_surface: omega * n exceeds 700 (overflow guard)");
              return detail::harmonic_sample(k.family, k.omega, ud, vd);
            }
          },
          kind);
      z(u, v) = Scalar(s.z);
      p(u, v) = Scalar(s.dzdu);
      q(u, v) = Scalar(s.dzdv);
      sil(v, u) = s.inside;
    }
  }
  return {std::move(z), GradientField<Scalar>(std::move(p), std::move(q), DomainMask::full(m, n)),
          DomainMask(std::move(sil))};
}

/// Samples of cos(omega u) e^{omega v} or sin(omega u) e^{omega v}.
template <typename Scalar>
ScalarGrid<Scalar> make_harmonic(HarmonicFamily family, double omega, Index m, Index n) {
  if (!(omega > 0)) throw UsageError("make_harmonic: omega must be > 0");
  if (omega * double(n) > 700) throw UsageError("make_harmonic: omega * n exceeds 700 (overflow guard)");
  ScalarGrid<Scalar> z(m, n);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) z(u, v) = Scalar(detail::harmonic_sample(family, omega, double(u), double(v)).z);
  return z;
}

/// I.i.d. zero-mean Gaussian noise of standard deviation sigma added to p and q on inside pixels.
template <typename Scalar>
GradientField<Scalar> add_gradient_noise(const GradientField<Scalar>& g, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw UsageError("add_noise: sigma must be >= 0");
  GradientField<Scalar> out = g;
  if (sigma == 0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u) {
      if (!g.mask.contains(u, v)) continue;
      out.p(u, v) += Scalar(noise(rng));
      out.q(u, v) += Scalar(noise(rng));
    }
  return out;
}

/// Tilts every valid normal by a random tangent perturbation (per-axis std sigma_rad) and renormalizes.
template <typename Scalar>
NormalField<Scalar> add_normal_angle_noise(const NormalField<Scalar>& nf, double sigma_rad, std::uint64_t seed) {
  if (!(sigma_rad >= 0)) throw UsageError("add_noise: sigma must be >= 0");
  NormalField<Scalar> out = nf;
  if (sigma_rad == 0) return out;
  using Vec3 = Eigen::Matrix<double, 3, 1>;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma_rad);
  for (Index v = 0; v < nf.height(); ++v)
    for (Index u = 0; u < nf.width(); ++u) {
      if (!nf.valid.contains(u, v)) continue;
      const Vec3 n(nf.n1(u, v), nf.n2(u, v), nf.n3(u, v));
      const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      const Vec3 t1 = n.cross(helper).normalized();
      const Vec3 t2 = n.cross(t1);
      const double a = noise(rng), b = noise(rng);
      const Vec3 tilted = (n + a * t1 + b * t2).normalized();
      out.n1(u, v) = Scalar(tilted.x());
      out.n2(u, v) = Scalar(tilted.y());
      out.n3(u, v) = Scalar(tilted.z());
    }
  return out;
}

}  // namespace gradkit
