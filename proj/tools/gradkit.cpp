#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gradkit/gradkit.hpp"
#include "gradkit/io.hpp"
#include "gradkit/pipeline.hpp"

using namespace gradkit;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw UsageError("invalid number '" + s + "' in " + what);
}

// "kind:a,b" -> ("kind", {a, b}) with exactly `arity` numbers.
std::vector<double> numbers_after(const std::string& text, std::size_t arity, const std::string& what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(what + " '" + text + "' needs parameters");
  const auto parts = split(text.substr(colon + 1), ',');
  if (parts.size() != arity) throw UsageError(what + " '" + text + "' expects " + std::to_string(arity) + " values");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_real(p, what));
  return out;
}

CameraModel parse_camera(const std::string& text) {
  if (text == "ortho") return CameraModel::orthographic();
  if (text.rfind("weak:", 0) == 0) return CameraModel::weak_perspective(numbers_after(text, 1, "--camera")[0]);
  if (text.rfind("persp:", 0) == 0) {
    const auto x = numbers_after(text, 3, "--camera");
    return CameraModel::perspective(x[0], x[1], x[2]);
  }
  throw UsageError("unknown camera '" + text + "'");
}

SurfaceKind parse_kind(const std::string& text) {
  if (text == "vase") return surface::Vase{};
  if (text == "peaks") return surface::PeaksSmooth{};
  if (text.rfind("plane:", 0) == 0) {
    const auto x = numbers_after(text, 2, "--kind");
    return surface::Plane{x[0], x[1]};
  }
  if (text.rfind("sine:", 0) == 0) {
    const auto x = numbers_after(text, 2, "--kind");
    return surface::SineProduct{x[0], x[1]};
  }
  if (text.rfind("harmonic:", 0) == 0)
    return surface::Harmonic{HarmonicFamily::cos_exp, numbers_after(text, 1, "--kind")[0]};
  throw UsageError("unknown surface kind '" + text + "'");
}

std::pair<Index, Index> parse_size(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) throw UsageError("--size expects MxN");
  const double m = to_real(parts[0], "--size"), n = to_real(parts[1], "--size");
  if (m != Index(m) || n != Index(n) || m < 1 || n < 1) throw UsageError("--size expects positive integers");
  return {Index(m), Index(n)};
}

struct ParsedBc {
  std::optional<BoundaryKind> kind;
  std::optional<ScalarGrid<double>> data;
};

ParsedBc parse_bc(const std::string& text) {
  if (text.empty()) return {};
  if (text == "natural") return {BoundaryKind::natural, std::nullopt};
  if (text == "periodic") return {BoundaryKind::periodic, std::nullopt};
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if ((head == "dirichlet" || head == "neumann") && colon != std::string::npos && colon + 1 < text.size()) {
    const std::string file = text.substr(colon + 1);
    return {head == "dirichlet" ? BoundaryKind::dirichlet : BoundaryKind::neumann, io::read_grid(file)};
  }
  throw UsageError("unknown boundary condition '" + text + "'");
}

std::optional<BoundarySpec<double>> to_spec(ParsedBc bc) {
  if (!bc.kind) return std::nullopt;
  return BoundarySpec<double>{*bc.kind, std::move(bc.data)};
}

DomainMask finite_mask(const ScalarGrid<double>& a, const ScalarGrid<double>& b) {
  if (!a.same_shape(b)) throw DataError("estimate and ground truth dimensions differ");
  return DomainMask(a.array().isFinite() && b.array().isFinite());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError(IoErrorKind::write_failed, path, 0, "cannot write file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradkit: integrate gradient and normal fields into depth maps"};
  app.require_subcommand(1);

  std::string normals_file, camera_text = "ortho", convert_out;
  auto* convert = app.add_subcommand("convert", "normal field -> gradient field");
  convert->add_option("--normals", normals_file, "three-channel PFM normal map")->required();
  convert->add_option("--camera", camera_text, "ortho | weak:M | persp:F,U0,V0");
  convert->add_option("--out", convert_out, "output gradient prefix (writes .p.pfm/.q.pfm)")->required();

  std::string grad_file, mask_file, method_text, bc_text, integrate_out, png_out;
  double tol = 0.0;
  long max_iters = 100000;
  std::uint64_t seed = 0;
  auto* integ = app.add_subcommand("integrate", "gradient field -> depth map");
  integ->add_option("--grad", grad_file, "gradient prefix or .p.pfm/.q.pfm file")->required();
  integ->add_option("--mask", mask_file, "P5 mask");
  integ->add_option("--method", method_text, "path|multipath:N|hb|dc|fc|dft|dst|dct")->required();
  integ->add_option("--bc", bc_text, "natural|periodic|dirichlet:FILE|neumann:FILE");
  integ->add_option("--tol", tol, "iterative stopping threshold");
  integ->add_option("--max-iters", max_iters, "iterative sweep limit");
  integ->add_option("--seed", seed, "seed for random paths");
  integ->add_option("--out", integrate_out, "output depth PFM")->required();
  integ->add_option("--png", png_out, "optional grayscale preview");

  std::string kind_text, size_text, prefix, noise_text;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "synthetic surfaces with analytic gradients");
  synth->add_option("--kind", kind_text, "vase | peaks | plane:a,b | sine:kx,ky | harmonic:w")->required();
  synth->add_option("--size", size_text, "MxN")->required();
  synth->add_option("--out-prefix", prefix, "output prefix")->required();
  synth->add_option("--noise", noise_text, "gradient:s | normal:s");
  synth->add_option("--seed", synth_seed, "noise seed");

  std::string est_file, gt_file, eval_mask, eval_grad, eval_bc, report_file;
  auto* eval = app.add_subcommand("eval", "compare a depth estimate to ground truth");
  eval->add_option("--est", est_file, "estimated depth PFM")->required();
  eval->add_option("--gt", gt_file, "ground-truth depth PFM")->required();
  eval->add_option("--mask", eval_mask, "P5 mask (default: pixels finite in both)");
  eval->add_option("--grad", eval_grad, "input gradient, for e_int and the stencil residual");
  eval->add_option("--bc", eval_bc, "boundary condition the stencil residual refers to");
  eval->add_option("--report", report_file, "CSV report")->required();

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "all methods on the vase analog");
  bench->add_option("--suite", bench_opts.suite, "suite name");
  bench->add_option("--out-dir", bench_opts.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*convert) {
      const auto nf = io::read_normals(normals_file);
      const auto converted = normals_to_gradient(nf, parse_camera(camera_text));
      const Index dropped = (converted.occluding).count();
      if (dropped > 0) std::cerr << "convert: " << dropped << " occluding pixels removed from the domain\n";
      io::write_gradient(io::gradient_prefix(convert_out), converted.gradient);
    } else if (*integ) {
      IntegrateOptions opt;
      opt.method = parse_method(method_text);
      ParsedBc bc = parse_bc(bc_text);
      opt.bc = bc.kind;
      opt.bc_data = std::move(bc.data);
      opt.tol = tol;
      opt.max_iters = max_iters;
      opt.seed = seed;
      std::optional<DomainMask> mask;
      if (!mask_file.empty()) mask = io::read_mask(mask_file);
      const auto g = io::read_gradient(io::gradient_prefix(grad_file), mask ? &*mask : nullptr);
      const auto res = integrate(g, opt);
      if (!res.converged)
        std::cerr << "integrate: stopped after " << res.iterations << " iterations without converging\n";
      io::write_grid(integrate_out, res.depth, &g.mask);
      if (!png_out.empty()) {
        const auto range = io::write_png_preview(png_out, res.depth, g.mask);
        std::cout << "preview range " << range.min << " " << range.max << "\n";
      }
    } else if (*synth) {
      const auto [m, n] = parse_size(size_text);
      const auto surf = make_surface<double>(parse_kind(kind_text), m, n);
      GradientField<double> g(surf.gradient.p, surf.gradient.q, surf.silhouette);
      NormalField<double> nf = normals_from_gradient(g);
      if (!noise_text.empty()) {
        const auto sigma = numbers_after(noise_text, 1, "--noise")[0];
        if (noise_text.rfind("gradient:", 0) == 0) {
          g = add_gradient_noise(g, sigma, synth_seed);
          nf = normals_from_gradient(g);
        } else if (noise_text.rfind("normal:", 0) == 0) {
          nf = add_normal_angle_noise(nf, sigma, synth_seed);
          g = normals_to_gradient(nf, CameraModel::orthographic()).gradient;
        } else {
          throw UsageError("unknown noise model '" + noise_text + "'");
        }
      }
      io::write_grid(prefix + ".z.pfm", surf.depth, &surf.silhouette);
      io::write_gradient(prefix, g);
      io::write_mask(prefix + ".mask.pgm", surf.silhouette);
      io::write_normals(prefix + ".normals.pfm", nf);
    } else if (*eval) {
      const auto est = io::read_grid(est_file);
      const auto gt = io::read_grid(gt_file);
      const DomainMask mask = eval_mask.empty() ? finite_mask(est, gt) : io::read_mask(eval_mask);
      std::optional<GradientField<double>> g;
      if (!eval_grad.empty()) g = io::read_gradient(io::gradient_prefix(eval_grad), &mask);
      const auto r = evaluate(est, gt, mask, g ? &*g : nullptr, to_spec(parse_bc(eval_bc)));
      write_text(report_file, eval_csv_header() + eval_csv_row(est_file, gt_file, r));
    } else if (*bench) {
      const auto rows = run_bench(bench_opts);
      std::cout << "bench: " << rows.size() << " runs written to " << bench_opts.out_dir << "/bench.csv\n";
    }
  } catch (const std::invalid_argument& e) {  // UsageError, ConfigError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
