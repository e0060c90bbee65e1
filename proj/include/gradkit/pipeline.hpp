#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gradkit/grid.hpp"
#include "gradkit/spectral_poisson.hpp"

namespace gradkit {

enum class MethodKind { path, multipath, hb, dc, fc, dft, dst, dct };

struct MethodSpec {
  MethodKind kind = MethodKind::dct;
  int paths = 16;  // multipath only
};

/// Parses "path", "multipath:N", "hb", "dc", "fc", "dft", "dst", "dct".
MethodSpec parse_method(const std::string& text);
std::string method_name(const MethodSpec& method);

struct IntegrateOptions {
  MethodSpec method;
  // "natural", "periodic", or absent for the method's default. Dirichlet/Neumann data are
  // passed as grids: dirichlet pins finite pixels for hb/dc and fills the ring for dst.
  std::optional<BoundaryKind> bc;
  std::optional<ScalarGrid<double>> bc_data;
  double tol = 0.0;  // <= 0: solver default
  long max_iters = 100000;
  std::uint64_t seed = 0;
  std::optional<double> relaxation;  // overrides the hb damping / turns dc into SOR
};

struct IntegrationOutcome {
  ScalarGrid<double> depth;
  long iterations = 0;
  bool converged = true;
};

/// Runs one integrator on g. Path methods integrate each connected component from its
/// first pixel in scan order; iterative methods handle components jointly.
IntegrationOutcome integrate(const GradientField<double>& g, const IntegrateOptions& options);

struct EvalResult {
  Index pixels = 0;
  double rmse = 0.0;
  double offset = 0.0;
  double gt_range = 0.0;
  bool periodic_bias = false;  // rmse > 10% of the ground-truth range
  std::optional<double> e_int;
  std::optional<double> stencil_residual;
};

EvalResult evaluate(const ScalarGrid<double>& est, const ScalarGrid<double>& gt, const DomainMask& mask,
                    const GradientField<double>* g, const std::optional<BoundarySpec<double>>& bc);

std::string eval_csv_header();
std::string eval_csv_row(const std::string& est_name, const std::string& gt_name, const EvalResult& r);

struct BenchRow {
  std::string method;
  std::string domain;
  double sigma = 0.0;
  double rmse = 0.0;
  double e_int = 0.0;
  double wall_time_s = 0.0;
  long iterations = 0;
  std::string preview;
  double preview_min = 0.0;
  double preview_max = 0.0;
};

struct BenchOptions {
  std::string suite = "default";
  std::string out_dir;
  Index size = 128;
  std::vector<double> sigmas{0.0, 0.01, 0.05, 0.1};
  std::uint64_t seed = 7;
  bool write_previews = true;
};

/// Every method on the vase analog over {full grid, vase mask} and the noise levels.
/// Spectral methods are skipped on the vase mask (rectangular domains only). Writes
/// bench.csv and one PNG preview per run into out_dir.
std::vector<BenchRow> run_bench(const BenchOptions& options);

/// Harmonic ambiguity demo: a harmonic grid h (peak |h| = 1) added to the DCT-natural
/// solution z. The Poisson equation stays satisfied up to h's stencil residual while the
/// least-squares energy grows.
struct AmbiguityRow {
  std::string family;
  double omega = 0.0;
  double energy_base = 0.0;
  double energy_shifted = 0.0;
  double laplacian_max = 0.0;
};

std::vector<AmbiguityRow> harmonic_ambiguity_demo(const GradientField<double>& g);

std::string ambiguity_csv_header();
std::string ambiguity_csv_row(const AmbiguityRow& row);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

}  // namespace gradkit
