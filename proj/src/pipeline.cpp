#include "gradkit/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "gradkit/io.hpp"
#include "gradkit/iterative_poisson.hpp"
#include "gradkit/metrics.hpp"
#include "gradkit/operators.hpp"
#include "gradkit/path_integration.hpp"
#include "gradkit/synth.hpp"

namespace gradkit {
namespace {

// Damping applied to Jacobi for hb. Plain Jacobi (1.0) leaves the checkerboard mode of
// a bipartite pixel graph undamped when no pixel is pinned.
constexpr double kHbDamping = 0.8;

std::string fmt_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

const std::map<std::string, MethodKind>& method_table() {
  static const std::map<std::string, MethodKind> table{
      {"path", MethodKind::path}, {"multipath", MethodKind::multipath}, {"hb", MethodKind::hb},
      {"dc", MethodKind::dc},     {"fc", MethodKind::fc},               {"dft", MethodKind::dft},
      {"dst", MethodKind::dst},   {"dct", MethodKind::dct}};
  return table;
}

ScalarGrid<double> integrate_paths(const GradientField<double>& g, const IntegrateOptions& opt) {
  const ComponentLabels comps = label_components(g.mask);
  ScalarGrid<double> out(g.width(), g.height(), ScalarGrid<double>::not_a_value());
  std::vector<bool> seen(static_cast<std::size_t>(comps.count), false);
  for (Index v = 0; v < g.height(); ++v)
    for (Index u = 0; u < g.width(); ++u) {
      const int c = comps.label(v, u);
      if (c < 0 || seen[c]) continue;
      seen[c] = true;
      const Pixel origin{u, v};
      const ScalarGrid<double> part = opt.method.kind == MethodKind::path
                                          ? integrate_path(g, origin, SweepOrder::row_major)
                                          : integrate_multipath(g, origin, opt.method.paths, opt.seed);
      out.array() = (comps.label == c).select(part.array(), out.array());
    }
  return out;
}

IntegrationOutcome integrate_iterative(const GradientField<double>& g, const IntegrateOptions& opt) {
  std::optional<PinnedValues<double>> pins;
  if (opt.bc == BoundaryKind::dirichlet) {
    const auto& data = *opt.bc_data;
    if (!data.same_shape(g.p)) throw ConfigError("dirichlet data dimensions differ from the gradient field");
    FlagArray pinned = data.array().isFinite() && g.mask.flags();
    pins = PinnedValues<double>{std::move(pinned), data};
  }
  SolverConfig<double> cfg;
  cfg.tol = opt.tol;
  cfg.max_iters = opt.max_iters;
  if (opt.method.kind == MethodKind::hb) {
    cfg.method = IterativeMethod::jacobi;
    cfg.relaxation = opt.relaxation.value_or(kHbDamping);
  } else if (opt.relaxation) {
    cfg.method = IterativeMethod::sor;
    cfg.relaxation = *opt.relaxation;
  }
  auto result = solve(assemble_system(g, std::move(pins)), cfg);
  return {std::move(result.depth), result.report.iterations, result.report.converged};
}

}  // namespace

MethodSpec parse_method(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const auto it = method_table().find(head);
  if (it == method_table().end()) throw UsageError("unknown method '" + text + "'");
  MethodSpec spec{it->second, 16};
  if (spec.kind == MethodKind::multipath) {
    if (colon == std::string::npos) throw UsageError("multipath requires a path count, e.g. multipath:16");
    try {
      std::size_t used = 0;
      spec.paths = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("invalid path count in '" + text + "'");
    }
    if (spec.paths < 2) throw UsageError("multipath needs at least 2 paths");
  } else if (colon != std::string::npos) {
    throw UsageError("method '" + head + "' takes no parameter");
  }
  return spec;
}

std::string method_name(const MethodSpec& method) {
  for (const auto& [name, kind] : method_table())
    if (kind == method.kind) return kind == MethodKind::multipath ? name + ":" + std::to_string(method.paths) : name;
  return "?";
}

IntegrationOutcome integrate(const GradientField<double>& g, const IntegrateOptions& opt) {
  const MethodKind kind = opt.method.kind;
  const auto require_bc = [&](std::initializer_list<BoundaryKind> allowed) {
    if (!opt.bc) return;
    for (BoundaryKind k : allowed)
      if (*opt.bc == k) return;
    throw ConfigError("boundary condition not supported by method " + method_name(opt.method));
  };
  if ((opt.bc == BoundaryKind::dirichlet || opt.bc == BoundaryKind::neumann) && !opt.bc_data)
    throw ConfigError("boundary condition requires a data file");

  IntegrationOutcome out{ScalarGrid<double>(g.width(), g.height()), 0, true};
  switch (kind) {
    case MethodKind::path:
    case MethodKind::multipath:
      require_bc({});
      out.depth = integrate_paths(g, opt);
      break;
    case MethodKind::hb:
    case MethodKind::dc:
      require_bc({BoundaryKind::natural, BoundaryKind::dirichlet});
      out = integrate_iterative(g, opt);
      break;
    case MethodKind::fc:
      require_bc({BoundaryKind::periodic});
      out.depth = solve_fc_continuous(g);
      break;
    case MethodKind::dft:
      require_bc({BoundaryKind::periodic});
      out.depth = solve_scs_periodic(g);
      break;
    case MethodKind::dst:
      if (opt.bc != BoundaryKind::dirichlet) throw ConfigError("dst requires --bc dirichlet:FILE");
      out.depth = solve_scs_dirichlet(g, BoundarySpec<double>::dirichlet(*opt.bc_data));
      break;
    case MethodKind::dct:
      require_bc({BoundaryKind::natural, BoundaryKind::neumann});
      out.depth = solve_scs_neumann(g, opt.bc == BoundaryKind::neumann ? BoundarySpec<double>::neumann(*opt.bc_data)
                                                                       : BoundarySpec<double>::natural());
      break;
  }
  clear_outside(out.depth, g.mask);
  return out;
}

EvalResult evaluate(const ScalarGrid<double>& est, const ScalarGrid<double>& gt, const DomainMask& mask,
                    const GradientField<double>* g, const std::optional<BoundarySpec<double>>& bc) {
  for (Index v = 0; v < mask.height(); ++v)
    for (Index u = 0; u < mask.width(); ++u)
      if (mask.contains(u, v) && !(std::isfinite(est(u, v)) && std::isfinite(gt(u, v))))
        throw DataError("evaluate: non-finite depth at inside pixel (" + std::to_string(u) + "," + std::to_string(v) +
                        ")");
  EvalResult r;
  r.pixels = mask.inside_count();
  const auto aligned = rmse_offset_aligned(est, gt, mask);
  r.rmse = aligned.rmse;
  r.offset = aligned.offset;
  double lo = INFINITY, hi = -INFINITY;
  for (Index v = 0; v < mask.height(); ++v)
    for (Index u = 0; u < mask.width(); ++u)
      if (mask.contains(u, v)) {
        lo = std::min(lo, gt(u, v));
        hi = std::max(hi, gt(u, v));
      }
  r.gt_range = hi - lo;
  r.periodic_bias = r.rmse > 0.1 * r.gt_range;
  if (g) {
    r.e_int = e_int(*g);
    r.stencil_residual = stencil_residual(est, *g, bc.value_or(BoundarySpec<double>::natural()));
  }
  return r;
}

std::string eval_csv_header() { return "est,gt,pixels,rmse,offset,gt_range,bias_flag,e_int,stencil_residual\n"; }

std::string eval_csv_row(const std::string& est_name, const std::string& gt_name, const EvalResult& r) {
  return est_name + "," + gt_name + "," + std::to_string(r.pixels) + "," + fmt_real(r.rmse) + "," +
         fmt_real(r.offset) + "," + fmt_real(r.gt_range) + "," + (r.periodic_bias ? "1" : "0") + "," +
         (r.e_int ? fmt_real(*r.e_int) : "") + "," + (r.stencil_residual ? fmt_real(*r.stencil_residual) : "") + "\n";
}

std::string bench_csv_header() {
  return "method,domain,sigma,rmse,e_int,wall_time_s,iterations,preview,preview_min,preview_max\n";
}

std::string bench_csv_row(const BenchRow& row) {
  return row.method + "," + row.domain + "," + fmt_real(row.sigma) + "," + fmt_real(row.rmse) + "," +
         fmt_real(row.e_int) + "," + fmt_real(row.wall_time_s) + "," + std::to_string(row.iterations) + "," +
         row.preview + "," + fmt_real(row.preview_min) + "," + fmt_real(row.preview_max) + "\n";
}

std::vector<AmbiguityRow> harmonic_ambiguity_demo(const GradientField<double>& g) {
  const ScalarGrid<double> z = solve_scs_neumann(g);
  const double base = energy_F_L2(z, g);
  std::vector<AmbiguityRow> rows;
  for (auto family : {HarmonicFamily::cos_exp, HarmonicFamily::sin_exp})
    for (double omega : {0.05, 0.02}) {
      ScalarGrid<double> h = make_harmonic<double>(family, omega, g.width(), g.height());
      h.array() /= h.array().abs().maxCoeff();
      const auto lap = discrete_laplacian(h, g.mask);
      double lap_max = 0;
      for (Index v = 0; v < h.height(); ++v)
        for (Index u = 0; u < h.width(); ++u)
          if (g.mask.is_interior(u, v)) lap_max = std::max(lap_max, std::abs(lap(u, v)));
      ScalarGrid<double> shifted = z;
      shifted.array() += h.array();
      rows.push_back({family == HarmonicFamily::cos_exp ? "cos_exp" : "sin_exp", omega, base,
                      energy_F_L2(shifted, g), lap_max});
    }
  return rows;
}

std::string ambiguity_csv_header() { return "family,omega,energy_base,energy_shifted,laplacian_max\n"; }

std::string ambiguity_csv_row(const AmbiguityRow& r) {
  return r.family + "," + fmt_real(r.omega) + "," + fmt_real(r.energy_base) + "," + fmt_real(r.energy_shifted) + "," +
         fmt_real(r.laplacian_max) + "\n";
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.suite != "default") throw UsageError("unknown bench suite '" + options.suite + "'");
  namespace fs = std::filesystem;
  if (!options.out_dir.empty()) fs::create_directories(options.out_dir);

  const auto surf = make_surface<double>(surface::Vase{}, options.size, options.size);
  const std::vector<std::string> methods{"path", "multipath:16", "hb", "dc", "fc", "dft", "dst", "dct"};
  struct Domain {
    std::string name;
    DomainMask mask;
  };
  const std::vector<Domain> domains{{"full", DomainMask::full(options.size, options.size)}, {"vase", surf.silhouette}};

  std::vector<BenchRow> rows;
  for (const auto& domain : domains) {
    for (std::size_t si = 0; si < options.sigmas.size(); ++si) {
      const double sigma = options.sigmas[si];
      GradientField<double> clean(surf.gradient.p, surf.gradient.q, domain.mask);
      const GradientField<double> g = add_gradient_noise(clean, sigma, options.seed + si);
      const double eint = e_int(g);
      for (const auto& name : methods) {
        IntegrateOptions opt;
        opt.method = parse_method(name);
        opt.seed = options.seed;
        const bool spectral = opt.method.kind == MethodKind::fc || opt.method.kind == MethodKind::dft ||
                              opt.method.kind == MethodKind::dst || opt.method.kind == MethodKind::dct;
        if (spectral && !domain.mask.is_full()) continue;
        if (opt.method.kind == MethodKind::dst) {
          opt.bc = BoundaryKind::dirichlet;
          opt.bc_data = surf.depth;  // ground-truth ring
        }
        const auto t0 = std::chrono::steady_clock::now();
        const IntegrationOutcome res = integrate(g, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        BenchRow row;
        row.method = name;
        row.domain = domain.name;
        row.sigma = sigma;
        row.rmse = rmse_offset_aligned(res.depth, surf.depth, domain.mask).rmse;
        row.e_int = eint;
        row.wall_time_s = secs;
        row.iterations = res.iterations;
        if (options.write_previews && !options.out_dir.empty()) {
          std::string stem = name;
          for (char& c : stem)
            if (c == ':') c = '-';
          char sig[32];
          std::snprintf(sig, sizeof sig, "%g", sigma);
          row.preview = stem + "_" + domain.name + "_s" + sig + ".png";
          const auto range = io::write_png_preview((fs::path(options.out_dir) / row.preview).string(), res.depth,
                                                   domain.mask);
          row.preview_min = range.min;
          row.preview_max = range.max;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  if (!options.out_dir.empty()) {
    std::ofstream csv(fs::path(options.out_dir) / "bench.csv");
    csv << bench_csv_header();
    for (const auto& row : rows) csv << bench_csv_row(row);
    std::ofstream amb(fs::path(options.out_dir) / "ambiguity.csv");
    amb << ambiguity_csv_header();
    for (const auto& row : harmonic_ambiguity_demo(
             GradientField<double>(surf.gradient.p, surf.gradient.q, DomainMask::full(options.size, options.size)))) amb << ambiguity_csv_row(row);
  }
  return rows;
}

}  // namespace gradkit
