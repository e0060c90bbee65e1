#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gradkit/io.hpp"
#include "support.hpp"

using namespace gradkit;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "gradkit_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd '" + workdir().string() + "' && '" + GRADKIT_CLI + "' " + args + " >cli.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> csv_row(const std::string& file, int row = 1) {
  std::ifstream in(workdir() / file);
  std::string line;
  for (int i = 0; i <= row; ++i) std::getline(in, line);
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("synth, integrate and eval on a plane") {
  REQUIRE(run("synth --kind plane:0.5,-0.25 --size 48x40 --out-prefix plane") == 0);
  for (const char* f : {"plane.z.pfm", "plane.p.pfm", "plane.q.pfm", "plane.mask.pgm", "plane.normals.pfm"})
    CHECK(fs::exists(workdir() / f));

  REQUIRE(run("integrate --grad plane --method dct --bc natural --out dct.pfm --png dct.png") == 0);
  REQUIRE(run("eval --est dct.pfm --gt plane.z.pfm --grad plane --report dct.csv") == 0);
  const auto dct = csv_row("dct.csv");
  REQUIRE(dct.size() == 9);
  CHECK(std::stod(dct[3]) <= 1e-6);
  CHECK(dct[6] == "0");
  CHECK(fs::exists(workdir() / "dct.png"));

  REQUIRE(run("integrate --grad plane.p.pfm --method fc --out fc.pfm") == 0);
  REQUIRE(run("eval --est fc.pfm --gt plane.z.pfm --report fc.csv") == 0);
  const auto fc = csv_row("fc.csv");
  CHECK(std::stod(fc[3]) > 0.1 * std::stod(fc[5]));
  CHECK(fc[6] == "1");

  REQUIRE(run("eval --est plane.z.pfm --gt plane.z.pfm --report same.csv") == 0);
  CHECK(std::stod(csv_row("same.csv")[3]) == 0.0);
}

TEST_CASE("every method runs from the command line") {
  REQUIRE(run("synth --kind sine:1,2 --size 32x32 --out-prefix s --noise gradient:0.01 --seed 3") == 0);
  for (const char* m : {"path", "multipath:8", "hb", "dc", "fc", "dft", "dct"})
    CHECK_MESSAGE(run(std::string("integrate --grad s --method ") + m + " --out o.pfm") == 0, m);
  CHECK(run("integrate --grad s --method dst --bc dirichlet:s.z.pfm --out o.pfm") == 0);
  CHECK(run("integrate --grad s --method dc --bc dirichlet:s.z.pfm --out o.pfm") == 0);
}

TEST_CASE("vase with mask, normals and conversion") {
  REQUIRE(run("synth --kind vase --size 64x64 --out-prefix v --noise normal:0.01 --seed 1") == 0);
  REQUIRE(run("convert --normals v.normals.pfm --camera ortho --out vc") == 0);
  REQUIRE(run("integrate --grad vc --mask v.mask.pgm --method dc --out vz.pfm") == 0);
  REQUIRE(run("eval --est vz.pfm --gt v.z.pfm --mask v.mask.pgm --grad vc --report v.csv") == 0);
  const auto row = csv_row("v.csv");
  CHECK(std::stod(row[3]) < 0.1 * std::stod(row[5]));
  CHECK(run("integrate --grad vc --mask v.mask.pgm --method dct --out x.pfm") == 1);
  CHECK(run("convert --normals v.normals.pfm --camera weak:2 --out vw") == 0);
  CHECK(run("convert --normals v.normals.pfm --camera persp:500,32,32 --out vp") == 0);
}

TEST_CASE("runs are deterministic") {
  REQUIRE(run("synth --kind sine:2,1 --size 32x24 --out-prefix d --noise gradient:0.05 --seed 9") == 0);
  REQUIRE(run("integrate --grad d --method multipath:16 --seed 4 --out d1.pfm") == 0);
  REQUIRE(run("integrate --grad d --method multipath:16 --seed 4 --out d2.pfm") == 0);
  CHECK(slurp(workdir() / "d1.pfm") == slurp(workdir() / "d2.pfm"));
  REQUIRE(run("eval --est d1.pfm --gt d.z.pfm --grad d --report r1.csv") == 0);
  REQUIRE(run("eval --est d2.pfm --gt d.z.pfm --grad d --report r2.csv") == 0);
  auto r1 = csv_row("r1.csv"), r2 = csv_row("r2.csv");
  REQUIRE(r1.size() == 9);
  CHECK(r1[0] == "d1.pfm");
  r1.erase(r1.begin());
  r2.erase(r2.begin());
  CHECK(r1 == r2);
}

TEST_CASE("exit codes") {
  CHECK(run("integrate --bogus") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("integrate --grad x --method nope --out o.pfm") == 2);
  CHECK(run("integrate --grad x --method dct --bc sideways --out o.pfm") == 2);
  CHECK(run("synth --kind plane:1 --size 32x32 --out-prefix z") == 2);
  CHECK(run("synth --kind plane:1,0 --size 8x8 --out-prefix z") == 2);
  CHECK(run("integrate --grad missing --method dct --out o.pfm") == 1);
  REQUIRE(run("synth --kind plane:1,0 --size 16x16 --out-prefix e") == 0);
  CHECK(run("integrate --grad e --method dst --out o.pfm") == 2);
  CHECK(run("integrate --grad e --method fc --bc natural --out o.pfm") == 2);
  CHECK(run("bench --suite nope --out-dir b") == 2);
  CHECK(run("--help") == 0);
}
