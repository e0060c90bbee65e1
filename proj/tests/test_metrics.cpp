#include <doctest.h>

#include "support.hpp"

using namespace gradkit;
using namespace testkit;

TEST_CASE("e_int hand evaluation") {
  ScalarGrid<double> q(3, 3);
  for (Index v = 0; v < 3; ++v)
    for (Index u = 0; u < 3; ++u) q(u, v) = double(u);
  CHECK(e_int(GradientField<double>(ScalarGrid<double>(3, 3), q, DomainMask::full(3, 3))) == 4.0);
  const auto plane = make_surface<double>(surface::Plane{0.3, 0.9}, 16, 16);
  CHECK(e_int(plane.gradient) == 0.0);
}

TEST_CASE("e_int is non-negative and vanishes on finite-difference fields") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 50; ++k) {
    const auto g = GradientField<double>(random_grid(9, 9, rng), random_grid(9, 9, rng), disc_mask(9, 3.9));
    CHECK(e_int(g) >= 0.0);
    CHECK(e_int(fd_gradient(random_grid(9, 9, rng, -5, 5), disc_mask(9, 3.9))) <= 1e-12);
  }
}

TEST_CASE("offset-aligned RMSE examples") {
  std::mt19937_64 rng(62);
  const auto gt = random_grid(8, 6, rng);
  const auto mask = DomainMask::full(8, 6);
  ScalarGrid<double> shifted = gt;
  shifted.array() += 7;
  auto r = rmse_offset_aligned(shifted, gt, mask);
  CHECK(r.rmse <= 1e-14);
  CHECK(r.offset == doctest::Approx(-7.0));

  r = rmse_offset_aligned(gt, gt, mask);
  CHECK(r.rmse == 0.0);
  CHECK(r.offset == 0.0);

  ScalarGrid<double> alt = gt;
  for (Index v = 0; v < 6; ++v)
    for (Index u = 0; u < 8; ++u) alt(u, v) += u % 2 ? -1.0 : 1.0;
  r = rmse_offset_aligned(alt, gt, mask);
  CHECK(r.rmse == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.offset) <= 1e-14);
}

TEST_CASE("the aligned offset is the least-squares minimizer") {
  std::mt19937_64 rng(63);
  const auto gt = random_grid(10, 10, rng), z = random_grid(10, 10, rng);
  const auto mask = disc_mask(10, 4.5);
  const auto best = rmse_offset_aligned(z, gt, mask);
  for (double eps : {1e-3, -1e-3, 0.1, -0.1}) {
    ScalarGrid<double> moved = z;
    moved.array() += best.offset + eps;
    double sq = 0;
    for (Index v = 0; v < 10; ++v)
      for (Index u = 0; u < 10; ++u)
        if (mask.contains(u, v)) sq += std::pow(moved(u, v) - gt(u, v), 2);
    CHECK(std::sqrt(sq / double(mask.inside_count())) >= best.rmse);
  }
  ScalarGrid<double> z2 = z, gt2 = gt;
  z2.array() += 3.5;
  gt2.array() += 3.5;
  CHECK(rmse_offset_aligned(z2, gt2, mask).rmse == doctest::Approx(best.rmse).epsilon(1e-12));
}

TEST_CASE("scale-aligned RMSE") {
  std::mt19937_64 rng(64);
  const auto gt = random_grid(6, 6, rng, 1, 5);
  ScalarGrid<double> half = gt;
  half.array() *= 0.5;
  const auto r = rmse_scale_aligned(half, gt, DomainMask::full(6, 6));
  CHECK(r.rmse <= 1e-13);
  CHECK(r.offset == doctest::Approx(2.0));
}

TEST_CASE("stencil residual of consistent ground truth and of solver output") {
  // Consistent system: the natural-condition equations assembled from the trapezoid-consistent
  // field of a random z are satisfied by z itself.
  std::mt19937_64 rng(65);
  const auto z = random_grid(10, 8, rng);
  ScalarGrid<double> p(10, 8), q(10, 8);
  for (Index v = 0; v < 8; ++v) {
    p(0, v) = 0.25;
    for (Index u = 0; u + 1 < 10; ++u) p(u + 1, v) = 2 * (z(u + 1, v) - z(u, v)) - p(u, v);
  }
  for (Index u = 0; u < 10; ++u) {
    q(u, 0) = -0.5;
    for (Index v = 0; v + 1 < 8; ++v) q(u, v + 1) = 2 * (z(u, v + 1) - z(u, v)) - q(u, v);
  }
  const GradientField<double> g(p, q, DomainMask::full(10, 8));
  CHECK(stencil_residual(z, g, BoundarySpec<double>::natural()) <= 1e-12);

  const auto sol = solve_scs_neumann(g);
  CHECK(stencil_residual(sol, g, BoundarySpec<double>::natural()) <= 1e-9 * std::max(1.0, sol.array().abs().maxCoeff()));

  // linearity: z + h has the residual of h's own stencil on top
  const auto h = make_harmonic<double>(HarmonicFamily::cos_exp, 0.1, 10, 8);
  ScalarGrid<double> zh = z;
  zh.array() += h.array();
  const GradientField<double> zero(ScalarGrid<double>(10, 8), ScalarGrid<double>(10, 8), g.mask);
  const double own = stencil_residual(h, zero, BoundarySpec<double>::natural());
  CHECK(std::abs(stencil_residual(zh, g, BoundarySpec<double>::natural()) - own) <= 1e-12 + 1e-12 * own);
}
