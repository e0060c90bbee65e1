#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "gradkit/grid.hpp"

namespace gradkit {

enum class Projection { orthographic, weak_perspective, perspective };

/// Intrinsics for the three projection models. Focal length and principal point are in
/// pixels; magnification is focal / mean depth and only used by weak perspective.
struct CameraModel {
  Projection kind = Projection::orthographic;
  double focal = 0.0;
  double magnification = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;

  static CameraModel orthographic() { return {}; }
  static CameraModel weak_perspective(double magnification) {
    return {Projection::weak_perspective, 0.0, magnification, 0.0, 0.0};
  }
  static CameraModel perspective(double focal, double u0, double v0) {
    return {Projection::perspective, focal, 0.0, u0, v0};
  }

  void validate() const {
    if (kind == Projection::weak_perspective && !(magnification > 0.0))
      throw ConfigError("weak-perspective camera requires magnification > 0");
    if (kind == Projection::perspective && !(focal > 0.0))
      throw ConfigError("perspective camera requires focal length > 0");
  }
};

/// Per-pixel unit normals in the camera frame, pointing toward the camera.
template <typename Scalar>
struct NormalField {
  ScalarGrid<Scalar> n1;
  ScalarGrid<Scalar> n2;
  ScalarGrid<Scalar> n3;
  DomainMask valid;

  NormalField(ScalarGrid<Scalar> a, ScalarGrid<Scalar> b, ScalarGrid<Scalar> c, DomainMask valid_in)
      : n1(std::move(a)), n2(std::move(b)), n3(std::move(c)), valid(std::move(valid_in)) {
    if (!n1.same_shape(n2) || !n1.same_shape(n3) || !valid.same_shape(n1))
      throw UsageError("NormalField: component and mask dimensions differ");
  }

  Index width() const { return valid.width(); }
  Index height() const { return valid.height(); }
};

/// Normal field of an orthographic depth map: n = [p, q, -1] / sqrt(1 + p^2 + q^2).
template <typename Scalar>
NormalField<Scalar> normals_from_gradient(const GradientField<Scalar>& g) {
  const Index w = g.width(), h = g.height();
  const Scalar nan = ScalarGrid<Scalar>::not_a_value();
  ScalarGrid<Scalar> n1(w, h, nan), n2(w, h, nan), n3(w, h, nan);
  for (Index v = 0; v < h; ++v)
    for (Index u = 0; u < w; ++u) {
      if (!g.mask.contains(u, v)) continue;
      const Scalar p = g.p(u, v), q = g.q(u, v);
      const Scalar s = Scalar(1) / std::sqrt(Scalar(1) + p * p + q * q);
      n1(u, v) = p * s;
      n2(u, v) = q * s;
      n3(u, v) = -s;
    }
  return {std::move(n1), std::move(n2), std::move(n3), g.mask};
}

template <typename Scalar>
struct ConvertedGradient {
  GradientField<Scalar> gradient;
  FlagArray occluding;
};

/// Turns a normal field into the gradient field of the linear model problem.
///
/// Orthographic: (p, q) = (-n1/n3, -n2/n3). Weak perspective: the same divided by the
/// magnification. Perspective: the log-depth gradient (-n1/D, -n2/D) with
/// D = (u-u0) n1 + (v-v0) n2 + f n3. Pixels on the occluding contour (|n3| <= eps, or
/// |D| <= eps f) are flagged and dropped from the output mask.
template <typename Scalar>
ConvertedGradient<Scalar> normals_to_gradient(const NormalField<Scalar>& nf, const CameraModel& cam,
                                              double eps = 1e-6) {
  cam.validate();
  const Index w = nf.width(), h = nf.height();
  const Scalar nan = ScalarGrid<Scalar>::not_a_value();
  ScalarGrid<Scalar> p(w, h, nan), q(w, h, nan);
  FlagArray keep = FlagArray::Constant(h, w, false);
  FlagArray occluding = FlagArray::Constant(h, w, false);

  for (Index v = 0; v < h; ++v) {
    for (Index u = 0; u < w; ++u) {
      if (!nf.valid.contains(u, v)) continue;
      const Scalar a = nf.n1(u, v), b = nf.n2(u, v), c = nf.n3(u, v);
      const Scalar norm = std::sqrt(a * a + b * b + c * c);
      if (!(std::abs(norm - Scalar(1)) <= Scalar(1e-6)))
        throw DataError("normal at (" + std::to_string(u) + "," + std::to_string(v) + ") is not unit length");

      if (cam.kind == Projection::perspective) {
        const Scalar denom = Scalar(u - cam.u0) * a + Scalar(v - cam.v0) * b + Scalar(cam.focal) * c;
        if (std::abs(denom) <= Scalar(eps * cam.focal)) {
          occluding(v, u) = true;
          continue;
        }
        if (denom > 0)
          throw DataError("normal at (" + std::to_string(u) + "," + std::to_string(v) + ") faces away from the camera");
        p(u, v) = -a / denom;
        q(u, v) = -b / denom;
      } else {
        if (std::abs(c) <= Scalar(eps)) {
          occluding(v, u) = true;
          continue;
        }
        if (c > 0)
          throw DataError("normal at (" + std::to_string(u) + "," + std::to_string(v) + ") has n3 > 0");
        const Scalar scale = cam.kind == Projection::weak_perspective ? Scalar(1) / Scalar(cam.magnification) : Scalar(1);
        p(u, v) = -a / c * scale;
        q(u, v) = -b / c * scale;
      }
      keep(v, u) = true;
    }
  }
  if (keep.count() == 0) throw DataError("normals_to_gradient: no usable pixel left after removing occluding contours");
  return {GradientField<Scalar>(std::move(p), std::move(q), DomainMask(std::move(keep))), std::move(occluding)};
}

/// z = exp(zt - zt(anchor)) * anchor_value on the mask; recovers depth from log-depth.
template <typename Scalar>
ScalarGrid<Scalar> log_depth_to_depth(const ScalarGrid<Scalar>& zt, const DomainMask& mask, Scalar anchor_value,
                                      Pixel anchor) {
  if (!mask.same_shape(zt)) throw UsageError("log_depth_to_depth: dimension mismatch");
  if (!mask.contains(anchor)) throw UsageError("log_depth_to_depth: anchor pixel is outside the mask");
  if (!(anchor_value > 0)) throw UsageError("log_depth_to_depth: anchor value must be positive");
  ScalarGrid<Scalar> z = zt;
  const Scalar ref = zt(anchor);
  z.array() = ((zt.array() - ref).exp() * anchor_value);
  clear_outside(z, mask);
  return z;
}

template <typename Scalar>
ScalarGrid<Scalar> depth_to_log_depth(const ScalarGrid<Scalar>& z, const DomainMask& mask) {
  ScalarGrid<Scalar> zt(z.width(), z.height(), ScalarGrid<Scalar>::not_a_value());
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u) {
      if (!mask.contains(u, v)) continue;
      if (!(z(u, v) > 0)) throw DataError("depth_to_log_depth: nonpositive depth");
      zt(u, v) = std::log(z(u, v));
    }
  return zt;
}

template <typename Scalar>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Back-projects every inside pixel to a 3D point, in row-major pixel order.
template <typename Scalar>
PointSet<Scalar> depth_to_points(const ScalarGrid<Scalar>& z, const DomainMask& mask, const CameraModel& cam) {
  cam.validate();
  if (!mask.same_shape(z)) throw UsageError("depth_to_points: dimension mismatch");
  PointSet<Scalar> pts(mask.inside_count(), 3);
  Index row = 0;
  for (Index v = 0; v < z.height(); ++v) {
    for (Index u = 0; u < z.width(); ++u) {
      if (!mask.contains(u, v)) continue;
      const Scalar depth = z(u, v);
      Scalar x = Scalar(u), y = Scalar(v);
      switch (cam.kind) {
        case Projection::orthographic:
          break;
        case Projection::weak_perspective:
          x /= Scalar(cam.magnification);
          y /= Scalar(cam.magnification);
          break;
        case Projection::perspective:
          if (!(depth > 0))
            throw DataError("depth_to_points: nonpositive depth at pixel (" + std::to_string(u) + "," +
                            std::to_string(v) + ")");
          x = depth / Scalar(cam.focal) * Scalar(u - cam.u0);
          y = depth / Scalar(cam.focal) * Scalar(v - cam.v0);
          break;
      }
      pts.row(row++) << x, y, depth;
    }
  }
  return pts;
}

}  // namespace gradkit
