#pragma once

#include <string>
#include <vector>

#include "gradkit/camera.hpp"
#include "gradkit/grid.hpp"

namespace gradkit::io {

/// Decoded PFM raster, rows top-to-bottom, channels interleaved.
struct PfmImage {
  Index width = 0;
  Index height = 0;
  int channels = 1;
  std::vector<float> data;

  float at(Index u, Index v, int c = 0) const { return data[(v * width + u) * channels + c]; }
};

// PFM: "Pf" (1 channel) or "PF" (3 channels), "<w> <h>", "<scale>", then 32-bit floats,
// bottom row first. Negative scale means little-endian; writers always emit -1.0.
PfmImage read_pfm(const std::string& path);
void write_pfm(const std::string& path, const PfmImage& image);

ScalarGrid<double> read_grid(const std::string& path);
/// Pixels outside `mask` (when given) are written as quiet NaN.
void write_grid(const std::string& path, const ScalarGrid<double>& grid, const DomainMask* mask = nullptr);

/// Reads "<prefix>.p.pfm" and "<prefix>.q.pfm". Without a mask, the domain is every
/// pixel where both components are finite.
GradientField<double> read_gradient(const std::string& prefix, const DomainMask* mask = nullptr);
void write_gradient(const std::string& prefix, const GradientField<double>& g);

/// Three-channel PFM; a pixel is valid when all three components are finite.
NormalField<double> read_normals(const std::string& path);
void write_normals(const std::string& path, const NormalField<double>& nf);

/// Binary P5 mask; nonzero samples are inside.
DomainMask read_mask(const std::string& path);
void write_mask(const std::string& path, const DomainMask& mask);

struct PreviewRange {
  double min = 0.0;
  double max = 0.0;
};

/// 8-bit grayscale PNG with depth linearly mapped to [0, 255] over the inside pixels.
PreviewRange write_png_preview(const std::string& path, const ScalarGrid<double>& z, const DomainMask& mask);

/// Strips a trailing ".p.pfm" / ".q.pfm" so either the prefix or a component file may be passed.
std::string gradient_prefix(const std::string& arg);

}  // namespace gradkit::io
