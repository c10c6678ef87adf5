#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "monofem/cli.hpp"
#include "monofem/fem_function.hpp"
#include "monofem/mesh.hpp"

using namespace monofem;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const char* env = std::getenv("MONOFEM_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "monofem_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string out_path(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("mesh subcommand") {
  const Run r0 = run({"mesh", "--domain", "unit-square", "--level", "0", "--output", out_path("m0.txt")});
  CHECK(r0.code == 0);
  CHECK(r0.out.find("nv 5\n") != std::string::npos);
  CHECK(r0.out.find("nt 4\n") != std::string::npos);
  CHECK(r0.out.find("h 1.000000000e+00") != std::string::npos);

  const Run r1 = run({"mesh", "--domain", "unit-square", "--level", "1", "--output", out_path("m1.txt")});
  CHECK(r1.code == 0);
  CHECK(r1.out.find("nt 16\n") != std::string::npos);
  CHECK(lines_of(slurp(out_path("m1.txt"))).front() == "13 16");
}

TEST_CASE("polygon file domains") {
  const std::string good = write("tri.poly", "# a triangle\n0 0\n2 0\n0 1\n");
  const Run ok = run({"mesh", "--domain", good, "--output", out_path("tri.txt")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("nv 4\n") != std::string::npos);

  const std::string bad = write("concave.poly", "0 0\n1 0\n0.2 0.2\n0 1\n");
  const Run r = run({"mesh", "--domain", bad, "--output", out_path("bad.txt")});
  CHECK(r.code == 2);
  CHECK(r.err.find("vertex 2") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"mesh", "--bogus"}).code == 2);
  CHECK(run({"mesh", "--level", "-1"}).code == 2);
  CHECK(run({"mesh", "--domain", "nowhere"}).code == 2);
  CHECK(run({"solve", "--config", "/nonexistent.cfg"}).code == 2);
  CHECK(run({"study", "--levels", "4..2"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("study") != std::string::npos);
}

TEST_CASE("missing required key") {
  const std::string cfg = write("norhs.cfg", "nonlinearity = none\n");
  const Run r = run({"solve", "--config", cfg});
  CHECK(r.code == 2);
  CHECK(r.err.find("missing required key 'rhs'") != std::string::npos);
  const std::string cfg2 = write("nod.cfg", "rhs = constant 1\n");
  const Run r2 = run({"solve", "--config", cfg2});
  CHECK(r2.code == 2);
  CHECK(r2.err.find("'nonlinearity'") != std::string::npos);
}

TEST_CASE("zero problem writes an all-zero solution") {
  const std::string cfg = write("zero.cfg", "nonlinearity = power_law\nweight = 0\nrhs = constant 0\nlevel = 2\n");
  const Run r = run({"solve", "--config", cfg, "--output", out_path("zero.sol")});
  CHECK(r.code == 0);
  CHECK(r.out.find("newton_iterations 1\n") != std::string::npos);
  const auto lines = lines_of(slurp(out_path("zero.sol")));
  REQUIRE(lines.size() == 42);
  CHECK(lines[0] == "41");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i] == "0");
}

TEST_CASE("benchmark solve prints a converged residual") {
  const std::string cfg = write("bench.cfg",
                                "domain = paper-pentagon\nnonlinearity = power_law\nscale = 50\n"
                                "exponent = 0.3333333333333333\nshift = -1\nrhs = constant 1\nlevel = 3\n");
  const Run r = run({"solve", "--config", cfg, "--output", out_path("bench.sol")});
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("final_residual ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 15)) <= 1e-10);
}

TEST_CASE("mesh file round trip through solve") {
  REQUIRE(run({"mesh", "--domain", "paper-pentagon", "--level", "2", "--output", out_path("p2.mesh")}).code == 0);
  const std::string cfg = write("lin.cfg", "nonlinearity = power_law\nrhs = constant 1\n");
  const Run from_file = run({"solve", "--config", cfg, "--mesh", out_path("p2.mesh"), "--output", out_path("a.sol")});
  const Run direct = run({"solve", "--config", cfg, "--domain", "paper-pentagon", "--level", "2", "--output",
                          out_path("b.sol")});
  REQUIRE(from_file.code == 0);
  REQUIRE(direct.code == 0);
  CHECK(slurp(out_path("a.sol")) == slurp(out_path("b.sol")));

  std::ifstream in(out_path("p2.mesh"));
  const MeshPtr read = read_mesh(in);
  const MeshPtr built = refine_uniform(triangulate_convex_polygon(preset_polygon("paper-pentagon")), 2);
  REQUIRE(read->num_vertices() == built->num_vertices());
  for (std::size_t i = 0; i < built->num_vertices(); ++i) CHECK(read->vertices()[i] == built->vertices()[i]);
}

TEST_CASE("study subcommand") {
  const std::string cfg = write("manu.cfg",
                                "nonlinearity = power_law\nexponent = 0.5\nrhs = manufactured\nlevels = 2..5\n");
  const Run r = run({"study", "--config", cfg, "--output", out_path("manu.csv")});
  CHECK(r.code == 0);
  const auto lines = lines_of(slurp(out_path("manu.csv")));
  REQUIRE(lines.size() == 5);
  CHECK(lines[1].find(",,,,,") != std::string::npos);  // first row: four empty EOC fields
  CHECK(lines[2].find(",,") == std::string::npos);

  const Run one = run({"study", "--config", cfg, "--levels", "3..3", "--output", out_path("one.csv")});
  CHECK(one.code == 0);
  const auto single = lines_of(slurp(out_path("one.csv")));
  REQUIRE(single.size() == 2);
  CHECK(single[1].rfind("3,", 0) == 0);

  const std::string exact_bad = write("exactbad.cfg", "domain = paper-pentagon\nnonlinearity = none\n"
                                                      "rhs = constant 1\nreference = exact\n");
  CHECK(run({"study", "--config", exact_bad, "--output", out_path("x.csv")}).code == 2);
}

TEST_CASE("study failure truncates the CSV and exits 1") {
  const std::string cfg = write("fail.cfg",
                                "domain = paper-pentagon\nnonlinearity = power_law\nscale = 50\n"
                                "exponent = 0.3333333333333333\nshift = -1\nrhs = constant 1\n"
                                "levels = 0..4\nmax_newton = 8\n");
  const Run r = run({"study", "--config", cfg, "--output", out_path("fail.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("level") != std::string::npos);
  const auto lines = lines_of(slurp(out_path("fail.csv")));
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0].rfind("level,h,ndof", 0) == 0);
  CHECK(lines.size() < 6);
}

TEST_CASE("validate subcommand") {
  const Run r = run({"validate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS element stiffness matrix") != std::string::npos);
  CHECK(r.out.find("PASS quadrature exactness") != std::string::npos);
}
