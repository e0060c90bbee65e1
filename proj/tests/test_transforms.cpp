#include <doctest.h>

#include "support.hpp"

using namespace gradkit;
using namespace testkit;

namespace {

double rel_max(const RasterArray<double>& a, const RasterArray<double>& b) {
  return (a - b).abs().maxCoeff() / std::max(1.0, b.abs().maxCoeff());
}

double rel_max(const ComplexArray<double>& a, const ComplexArray<double>& b) {
  return (a - b).abs().maxCoeff() / std::max(1.0, b.abs().maxCoeff());
}

RasterArray<double> random_array(Index rows, Index cols, std::mt19937_64& rng) {
  return random_grid(cols, rows, rng).array();
}

}  // namespace

TEST_CASE("delta grid has a flat Fourier spectrum") {
  RasterArray<double> f = RasterArray<double>::Zero(6, 8);
  f(0, 0) = 1;
  const auto s = dft2<double>(f);
  CHECK((s - ComplexArray<double>::Constant(6, 8, 1.0)).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("single basis functions have one nonzero coefficient") {
  const Index m = 9, n = 7;
  const double pi = std::numbers::pi;
  RasterArray<double> s(n - 1, m - 1);
  for (Index v = 1; v < n; ++v)
    for (Index u = 1; u < m; ++u) s(v - 1, u - 1) = std::sin(pi * 3 * u / m) * std::sin(pi * 2 * v / n);
  auto sc = sine2<double>(s);
  CHECK(sc(1, 2) == doctest::Approx(double(m * n) / 4));
  sc(1, 2) = 0;
  CHECK(sc.abs().maxCoeff() <= 1e-12);

  RasterArray<double> c(n, m);
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < m; ++u) c(v, u) = std::cos(pi * 4 * (2 * u + 1) / (2.0 * m)) * std::cos(pi * 1 * (2 * v + 1) / (2.0 * n));
  auto cc = cosine2<double>(c);
  CHECK(cc(1, 4) == doctest::Approx(double(m * n) / 4));
  cc(1, 4) = 0;
  CHECK(cc.abs().maxCoeff() <= 1e-12);
}

TEST_CASE("fast paths match direct summation") {
  std::mt19937_64 rng(31);
  for (auto [rows, cols] : {std::pair<Index, Index>{16, 16}, {7, 12}, {15, 9}, {2, 3}}) {
    const auto f = random_array(rows, cols, rng);
    CHECK(rel_max(dft2<double>(f), direct_dft2(f)) <= 1e-10);
    CHECK(rel_max(dft2<double>(f, TransformPath::direct), direct_dft2(f)) <= 1e-10);
    CHECK(rel_max(sine2<double>(f), direct_sine2(f)) <= 1e-10);
    CHECK(rel_max(sine2<double>(f, TransformPath::direct), direct_sine2(f)) <= 1e-10);
    CHECK(rel_max(cosine2<double>(f), direct_cosine2(f)) <= 1e-10);
    CHECK(rel_max(cosine2<double>(f, TransformPath::direct), direct_cosine2(f)) <= 1e-10);
  }
}

TEST_CASE("round trips on grids up to 64 x 64") {
  std::mt19937_64 rng(32);
  for (auto [rows, cols] : {std::pair<Index, Index>{64, 64}, {33, 50}, {1, 5}, {5, 1}}) {
    const auto f = random_array(rows, cols, rng);
    for (auto path : {TransformPath::fast, TransformPath::direct}) {
      CHECK(rel_max(ComplexArray<double>(inverse_dft2<double>(dft2<double>(f, path), path)),
                    ComplexArray<double>(f.cast<std::complex<double>>())) <= 1e-11);
      CHECK(rel_max(inverse_sine2<double>(sine2<double>(f, path), path), f) <= 1e-11);
      CHECK(rel_max(inverse_cosine2<double>(cosine2<double>(f, path), path), f) <= 1e-11);
    }
  }
}

TEST_CASE("fast and direct inverses agree") {
  std::mt19937_64 rng(33);
  const auto c = random_array(20, 24, rng);
  CHECK(rel_max(inverse_cosine2<double>(c), inverse_cosine2<double>(c, TransformPath::direct)) <= 1e-10);
  CHECK(rel_max(inverse_sine2<double>(c), inverse_sine2<double>(c, TransformPath::direct)) <= 1e-10);
}

TEST_CASE("fast transforms are independent of the worker count") {
  std::mt19937_64 rng(34);
  const auto f = random_array(64, 48, rng);
  setenv("GRADKIT_THREADS", "1", 1);
  const auto a = cosine2<double>(f);
  setenv("GRADKIT_THREADS", "4", 1);
  const auto b = cosine2<double>(f);
  unsetenv("GRADKIT_THREADS");
  CHECK((a == b).all());
}
