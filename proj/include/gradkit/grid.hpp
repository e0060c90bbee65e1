#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gradkit/errors.hpp"

namespace gradkit {

using Index = Eigen::Index;

template <typename Scalar>
using RasterArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using FlagArray = RasterArray<bool>;

/// Pixel coordinate: u runs along a row (width, m), v runs across rows (height, n).
struct Pixel {
  Index u = 0;
  Index v = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Axis offsets in the fixed neighbor order +u, -u, +v, -v.
inline constexpr std::array<std::array<int, 2>, 4> kNeighborOffsets{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

/// Row-major raster of real values, `width` samples per row and `height` rows.
///
/// Values live in an Eigen array of shape (height, width) so that `array()` composes
/// with ordinary Eigen expressions; `operator()(u, v)` is the pixel-coordinate accessor.
/// Pixels outside the associated domain carry `not_a_value()`.
template <typename Scalar>
class ScalarGrid {
 public:
  using Storage = RasterArray<Scalar>;

  ScalarGrid() = default;

  ScalarGrid(Index width, Index height, Scalar fill = Scalar(0)) {
    if (width < 1 || height < 1) throw UsageError("ScalarGrid: width and height must be >= 1");
    values_ = Storage::Constant(height, width, fill);
  }

  explicit ScalarGrid(Storage values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) throw UsageError("ScalarGrid: empty storage");
  }

  static constexpr Scalar not_a_value() { return std::numeric_limits<Scalar>::quiet_NaN(); }

  Index width() const { return values_.cols(); }
  Index height() const { return values_.rows(); }
  Index size() const { return values_.size(); }

  Scalar& operator()(Index u, Index v) { return values_(v, u); }
  const Scalar& operator()(Index u, Index v) const { return values_(v, u); }
  Scalar& operator()(const Pixel& px) { return values_(px.v, px.u); }
  const Scalar& operator()(const Pixel& px) const { return values_(px.v, px.u); }

  Storage& array() { return values_; }
  const Storage& array() const { return values_; }

  template <typename Other>
  bool same_shape(const Other& other) const {
    return width() == other.width() && height() == other.height();
  }

  template <typename NewScalar>
  ScalarGrid<NewScalar> cast() const {
    return ScalarGrid<NewScalar>(values_.template cast<NewScalar>());
  }

 private:
  Storage values_;
};

enum class PixelClass { outside, interior, boundary };

struct PixelClassification {
  PixelClass kind = PixelClass::outside;
  std::array<Pixel, 4> neighbors{};
  int neighbor_count = 0;

  std::vector<Pixel> neighbor_list() const { return {neighbors.begin(), neighbors.begin() + neighbor_count}; }
};

/// Inside/outside flags defining the reconstruction domain. Always holds >= 1 inside pixel.
class DomainMask {
 public:
  explicit DomainMask(FlagArray inside) : inside_(std::move(inside)) {
    if (inside_.size() == 0 || inside_.count() == 0)
      throw DataError("DomainMask: at least one inside pixel is required");
  }

  static DomainMask full(Index width, Index height) {
    if (width < 1 || height < 1) throw UsageError("DomainMask: width and height must be >= 1");
    return DomainMask(FlagArray::Constant(height, width, true));
  }

  Index width() const { return inside_.cols(); }
  Index height() const { return inside_.rows(); }
  Index inside_count() const { return inside_.count(); }
  bool is_full() const { return inside_.count() == inside_.size(); }

  bool in_bounds(Index u, Index v) const { return u >= 0 && v >= 0 && u < width() && v < height(); }

  /// False for out-of-range coordinates, which makes neighbor probing safe.
  bool contains(Index u, Index v) const { return in_bounds(u, v) && inside_(v, u); }
  bool contains(const Pixel& px) const { return contains(px.u, px.v); }

  const FlagArray& flags() const { return inside_; }

  template <typename Other>
  bool same_shape(const Other& other) const {
    return width() == other.width() && height() == other.height();
  }

  PixelClassification classify(Index u, Index v) const {
    if (!in_bounds(u, v))
      throw UsageError("classify_pixel: (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    PixelClassification out;
    if (!inside_(v, u)) return out;
    for (const auto& [du, dv] : kNeighborOffsets) {
      if (contains(u + du, v + dv)) out.neighbors[out.neighbor_count++] = Pixel{u + du, v + dv};
    }
    out.kind = out.neighbor_count == 4 ? PixelClass::interior : PixelClass::boundary;
    return out;
  }

  bool is_interior(Index u, Index v) const {
    return contains(u, v) && contains(u + 1, v) && contains(u - 1, v) && contains(u, v + 1) && contains(u, v - 1);
  }

  friend bool operator==(const DomainMask& a, const DomainMask& b) {
    return a.width() == b.width() && a.height() == b.height() && (a.inside_ == b.inside_).all();
  }

 private:
  FlagArray inside_;
};

inline PixelClassification classify_pixel(const DomainMask& mask, Index u, Index v) { return mask.classify(u, v); }

/// 4-connected component labels; -1 outside. Labels are assigned in row-major scan order.
struct ComponentLabels {
  RasterArray<int> label;
  int count = 0;
};

inline ComponentLabels label_components(const DomainMask& mask) {
  ComponentLabels out{RasterArray<int>::Constant(mask.height(), mask.width(), -1), 0};
  std::vector<Pixel> stack;
  for (Index v = 0; v < mask.height(); ++v) {
    for (Index u = 0; u < mask.width(); ++u) {
      if (!mask.contains(u, v) || out.label(v, u) >= 0) continue;
      const int id = out.count++;
      out.label(v, u) = id;
      stack.push_back({u, v});
      while (!stack.empty()) {
        const Pixel px = stack.back();
        stack.pop_back();
        for (const auto& [du, dv] : kNeighborOffsets) {
          const Index nu = px.u + du, nv = px.v + dv;
          if (mask.contains(nu, nv) && out.label(nv, nu) < 0) {
            out.label(nv, nu) = id;
            stack.push_back({nu, nv});
          }
        }
      }
    }
  }
  return out;
}

/// Vector field g = [p, q] over a domain.
template <typename Scalar>
struct GradientField {
  ScalarGrid<Scalar> p;
  ScalarGrid<Scalar> q;
  DomainMask mask;

  GradientField(ScalarGrid<Scalar> p_in, ScalarGrid<Scalar> q_in, DomainMask mask_in)
      : p(std::move(p_in)), q(std::move(q_in)), mask(std::move(mask_in)) {
    if (!p.same_shape(q) || !mask.same_shape(p)) throw UsageError("GradientField: p, q and mask dimensions differ");
  }

  Index width() const { return mask.width(); }
  Index height() const { return mask.height(); }
};

/// Writes not_a_value() into every pixel the mask excludes.
template <typename Scalar>
void clear_outside(ScalarGrid<Scalar>& grid, const DomainMask& mask) {
  grid.array() = mask.flags().select(grid.array(), ScalarGrid<Scalar>::not_a_value());
}

/// Sum and count over inside pixels only.
template <typename Scalar>
Scalar masked_mean(const ScalarGrid<Scalar>& grid, const DomainMask& mask) {
  Scalar sum = 0;
  Index n = 0;
  for (Index v = 0; v < grid.height(); ++v)
    for (Index u = 0; u < grid.width(); ++u)
      if (mask.contains(u, v)) {
        sum += grid(u, v);
        ++n;
      }
  return n ? sum / Scalar(n) : Scalar(0);
}

}  // namespace gradkit
