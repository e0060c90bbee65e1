#include "gradkit/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <sstream>

namespace gradkit::io {
namespace {

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorKind::open_failed, path, 0, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string& path, const std::string& header, const void* payload, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoErrorKind::write_failed, path, 0, "cannot open file for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
  if (!out) throw IoError(IoErrorKind::write_failed, path, header.size(), "write failed");
}

// Cursor over a netpbm-style header: whitespace-separated ASCII tokens.
class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, const std::string& path) : bytes_(bytes), path_(path) {}

  std::string token(const char* what, bool allow_comments = false) {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (allow_comments && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("missing ") + what, start);
    return {bytes_.begin() + static_cast<std::ptrdiff_t>(start), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_)};
  }

  long integer(const char* what, bool allow_comments = false) {
    const std::size_t at = skip_to_token(allow_comments);
    const std::string t = token(what, allow_comments);
    char* end = nullptr;
    const long value = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0' || value <= 0) fail(std::string("invalid ") + what + " '" + t + "'", at);
    return value;
  }

  double real(const char* what) {
    const std::size_t at = skip_to_token(false);
    const std::string t = token(what);
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (*end != '\0' || value == 0.0 || !std::isfinite(value)) fail(std::string("invalid ") + what + " '" + t + "'", at);
    return value;
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::size_t payload_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("header not terminated by whitespace", pos_);
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw IoError(IoErrorKind::malformed_header, path_, at, what);
  }

 private:
  std::size_t skip_to_token(bool allow_comments) {
    while (pos_ < bytes_.size() && (std::isspace(bytes_[pos_]) || (allow_comments && bytes_[pos_] == '#'))) {
      if (bytes_[pos_] == '#')
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      else
        ++pos_;
    }
    return pos_;
  }

  const std::vector<unsigned char>& bytes_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

float decode_float(const unsigned char* src, bool little_endian) {
  std::uint32_t bits = 0;
  if (little_endian)
    bits = std::uint32_t(src[0]) | std::uint32_t(src[1]) << 8 | std::uint32_t(src[2]) << 16 | std::uint32_t(src[3]) << 24;
  else
    bits = std::uint32_t(src[3]) | std::uint32_t(src[2]) << 8 | std::uint32_t(src[1]) << 16 | std::uint32_t(src[0]) << 24;
  return std::bit_cast<float>(bits);
}

}  // namespace

PfmImage read_pfm(const std::string& path) {
  const auto bytes = slurp(path);
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.token("magic");
  if (magic != "Pf" && magic != "PF") hdr.fail("unknown PFM magic '" + magic + "'", 0);
  PfmImage img;
  img.channels = magic == "PF" ? 3 : 1;
  img.width = hdr.integer("width");
  img.height = hdr.integer("height");
  const double scale = hdr.real("scale");
  const std::size_t start = hdr.payload_start();

  const std::size_t count = static_cast<std::size_t>(img.width * img.height * img.channels);
  const std::size_t need = count * 4;
  if (bytes.size() - std::min(bytes.size(), start) < need)
    throw IoError(IoErrorKind::truncated_payload, path, bytes.size(),
                  "payload has " + std::to_string(bytes.size() - std::min(bytes.size(), start)) + " bytes, expected " +
                      std::to_string(need));
  img.data.resize(count);
  const bool little = scale < 0;
  const std::size_t row_len = static_cast<std::size_t>(img.width * img.channels);
  for (Index r = 0; r < img.height; ++r) {
    // Stored bottom-to-top; keep rows top-to-bottom in memory.
    const Index dst_row = img.height - 1 - r;
    for (std::size_t i = 0; i < row_len; ++i)
      img.data[dst_row * row_len + i] = decode_float(&bytes[start + (r * row_len + i) * 4], little);
  }
  return img;
}

void write_pfm(const std::string& path, const PfmImage& img) {
  std::ostringstream header;
  header << (img.channels == 3 ? "PF" : "Pf") << "\n" << img.width << " " << img.height << "\n-1.0\n";
  const std::size_t row_len = static_cast<std::size_t>(img.width * img.channels);
  std::vector<unsigned char> payload(img.data.size() * 4);
  for (Index r = 0; r < img.height; ++r) {
    const Index src_row = img.height - 1 - r;
    for (std::size_t i = 0; i < row_len; ++i) {
      const std::uint32_t bits = std::bit_cast<std::uint32_t>(img.data[src_row * row_len + i]);
      unsigned char* dst = &payload[(r * row_len + i) * 4];
      dst[0] = bits & 0xff;
      dst[1] = (bits >> 8) & 0xff;
      dst[2] = (bits >> 16) & 0xff;
      dst[3] = (bits >> 24) & 0xff;
    }
  }
  dump(path, header.str(), payload.data(), payload.size());
}

ScalarGrid<double> read_grid(const std::string& path) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 1)
    throw IoError(IoErrorKind::dimension_mismatch, path, 0, "expected a single-channel PFM");
  ScalarGrid<double> g(img.width, img.height);
  for (Index v = 0; v < img.height; ++v)
    for (Index u = 0; u < img.width; ++u) g(u, v) = img.at(u, v);
  return g;
}

void write_grid(const std::string& path, const ScalarGrid<double>& grid, const DomainMask* mask) {
  PfmImage img{grid.width(), grid.height(), 1, {}};
  img.data.resize(static_cast<std::size_t>(grid.size()));
  for (Index v = 0; v < grid.height(); ++v)
    for (Index u = 0; u < grid.width(); ++u)
      img.data[v * grid.width() + u] =
          (mask && !mask->contains(u, v)) ? std::numeric_limits<float>::quiet_NaN() : static_cast<float>(grid(u, v));
  write_pfm(path, img);
}

std::string gradient_prefix(const std::string& arg) {
  for (const char* suffix : {".p.pfm", ".q.pfm"}) {
    const std::size_t len = std::strlen(suffix);
    if (arg.size() > len && arg.compare(arg.size() - len, len, suffix) == 0) return arg.substr(0, arg.size() - len);
  }
  return arg;
}

GradientField<double> read_gradient(const std::string& prefix, const DomainMask* mask) {
  const std::string p_path = prefix + ".p.pfm", q_path = prefix + ".q.pfm";
  ScalarGrid<double> p = read_grid(p_path), q = read_grid(q_path);
  if (!p.same_shape(q)) throw IoError(IoErrorKind::dimension_mismatch, q_path, 0, "p and q dimensions differ");
  if (mask) {
    if (!mask->same_shape(p)) throw IoError(IoErrorKind::dimension_mismatch, p_path, 0, "mask dimensions differ");
    for (Index v = 0; v < p.height(); ++v)
      for (Index u = 0; u < p.width(); ++u)
        if (mask->contains(u, v) && !(std::isfinite(p(u, v)) && std::isfinite(q(u, v))))
          throw DataError(p_path + ": gradient is not finite at inside pixel (" + std::to_string(u) + "," +
                          std::to_string(v) + ")");
    return {std::move(p), std::move(q), *mask};
  }
  FlagArray finite = p.array().isFinite() && q.array().isFinite();
  return {std::move(p), std::move(q), DomainMask(std::move(finite))};
}

void write_gradient(const std::string& prefix, const GradientField<double>& g) {
  write_grid(prefix + ".p.pfm", g.p, &g.mask);
  write_grid(prefix + ".q.pfm", g.q, &g.mask);
}

NormalField<double> read_normals(const std::string& path) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 3) throw IoError(IoErrorKind::dimension_mismatch, path, 0, "expected a three-channel PFM (PF)");
  ScalarGrid<double> n1(img.width, img.height), n2(img.width, img.height), n3(img.width, img.height);
  FlagArray valid(img.height, img.width);
  for (Index v = 0; v < img.height; ++v)
    for (Index u = 0; u < img.width; ++u) {
      n1(u, v) = img.at(u, v, 0);
      n2(u, v) = img.at(u, v, 1);
      n3(u, v) = img.at(u, v, 2);
      valid(v, u) = std::isfinite(n1(u, v)) && std::isfinite(n2(u, v)) && std::isfinite(n3(u, v));
    }
  // Normals stored as float32 are unit length only to ~1e-7; renormalize in double.
  for (Index v = 0; v < img.height; ++v)
    for (Index u = 0; u < img.width; ++u) {
      if (!valid(v, u)) continue;
      const double len = std::sqrt(n1(u, v) * n1(u, v) + n2(u, v) * n2(u, v) + n3(u, v) * n3(u, v));
      if (std::abs(len - 1.0) <= 1e-5) {
        n1(u, v) /= len;
        n2(u, v) /= len;
        n3(u, v) /= len;
      }
    }
  return {std::move(n1), std::move(n2), std::move(n3), DomainMask(std::move(valid))};
}

void write_normals(const std::string& path, const NormalField<double>& nf) {
  PfmImage img{nf.width(), nf.height(), 3, {}};
  img.data.resize(static_cast<std::size_t>(nf.width() * nf.height() * 3));
  const float nan = std::numeric_limits<float>::quiet_NaN();
  for (Index v = 0; v < nf.height(); ++v)
    for (Index u = 0; u < nf.width(); ++u) {
      float* px = &img.data[(v * nf.width() + u) * 3];
      const bool ok = nf.valid.contains(u, v);
      px[0] = ok ? static_cast<float>(nf.n1(u, v)) : nan;
      px[1] = ok ? static_cast<float>(nf.n2(u, v)) : nan;
      px[2] = ok ? static_cast<float>(nf.n3(u, v)) : nan;
    }
  write_pfm(path, img);
}

DomainMask read_mask(const std::string& path) {
  const auto bytes = slurp(path);
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.token("magic", true);
  if (magic != "P5") hdr.fail("expected binary PGM magic 'P5', got '" + magic + "'", 0);
  const long width = hdr.integer("width", true);
  const long height = hdr.integer("height", true);
  const long maxval = hdr.integer("maxval", true);
  if (maxval > 65535) hdr.fail("maxval out of range", 0);
  const std::size_t start = hdr.payload_start();
  const std::size_t sample = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(width * height) * sample;
  if (bytes.size() - std::min(bytes.size(), start) < need)
    throw IoError(IoErrorKind::truncated_payload, path, bytes.size(), "payload shorter than " + std::to_string(need) + " bytes");
  FlagArray inside(height, width);
  for (long v = 0; v < height; ++v)
    for (long u = 0; u < width; ++u) {
      const std::size_t at = start + static_cast<std::size_t>(v * width + u) * sample;
      inside(v, u) = sample == 1 ? bytes[at] != 0 : (bytes[at] | bytes[at + 1]) != 0;
    }
  if (inside.count() == 0) throw DataError(path + ": mask must contain at least one inside pixel");
  return DomainMask(std::move(inside));
}

void write_mask(const std::string& path, const DomainMask& mask) {
  std::ostringstream header;
  header << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
  std::vector<unsigned char> payload(static_cast<std::size_t>(mask.width() * mask.height()));
  for (Index v = 0; v < mask.height(); ++v)
    for (Index u = 0; u < mask.width(); ++u) payload[v * mask.width() + u] = mask.contains(u, v) ? 255 : 0;
  dump(path, header.str(), payload.data(), payload.size());
}

PreviewRange write_png_preview(const std::string& path, const ScalarGrid<double>& z, const DomainMask& mask) {
  PreviewRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v) && std::isfinite(z(u, v))) {
        range.min = std::min(range.min, z(u, v));
        range.max = std::max(range.max, z(u, v));
      }
  if (!(range.min <= range.max)) range = {0.0, 0.0};
  const double span = range.max > range.min ? range.max - range.min : 1.0;

  std::vector<png_byte> pixels(static_cast<std::size_t>(z.width() * z.height()), 0);
  for (Index v = 0; v < z.height(); ++v)
    for (Index u = 0; u < z.width(); ++u)
      if (mask.contains(u, v) && std::isfinite(z(u, v)))
        pixels[v * z.width() + u] = static_cast<png_byte>(std::lround((z(u, v) - range.min) / span * 255.0));

  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw IoError(IoErrorKind::write_failed, path, 0, "cannot open file for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError(IoErrorKind::write_failed, path, 0, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(IoErrorKind::write_failed, path, 0, "libpng write failed");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(z.width()), static_cast<png_uint_32>(z.height()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Index v = 0; v < z.height(); ++v) png_write_row(png, &pixels[v * z.width()]);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return range;
}

}  // namespace gradkit::io
