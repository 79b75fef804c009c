#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ksn/dataset.hpp"
#include "ksn/errors.hpp"
#include "ksn/incidence.hpp"
#include "ksn/transfer_stack.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the ksn binary with output captured to a scratch file.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture = "cli_capture_" + std::to_string(counter++) + ".txt";
  const std::string cmd = std::string(KSN_CLI_BIN) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(capture);
  std::remove(capture.c_str());
  return r;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("cli_tmp_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("gen step d=2 grid=2 writes the exact lattice") {
  TempFile csv("step22.csv");
  auto r = run_cli("gen --kind step --d 2 --grid 2 --out " + csv.path);
  CHECK(r.exit_code == 0);
  CHECK(slurp(csv.path) ==
        "x1,x2,f\n"
        "0,0,0\n"
        "0,1,0\n"
        "1,0,1\n"
        "1,1,1\n");
}

TEST_CASE("gen checker parity values") {
  TempFile csv("check23.csv");
  auto r = run_cli("gen --kind checker --m 2 --d 2 --grid 3 --out " + csv.path);
  CHECK(r.exit_code == 0);
  // x=(0,0) -> 0, x=(0.5,0) -> 1
  CHECK(slurp(csv.path).find("0,0,0\n") != std::string::npos);
  CHECK(slurp(csv.path).find("0.5,0,1\n") != std::string::npos);
}

TEST_CASE("gen is byte-deterministic") {
  TempFile a("rand_a.csv"), b("rand_b.csv");
  CHECK(run_cli("gen --kind random --seed 42 --d 2 --grid 4 --out " + a.path).exit_code == 0);
  CHECK(run_cli("gen --kind random --seed 42 --d 2 --grid 4 --out " + b.path).exit_code == 0);
  CHECK(slurp(a.path) == slurp(b.path));
  CHECK(!slurp(a.path).empty());
}

TEST_CASE("fit / report / eval / check-z round trip on a rational step lattice") {
  TempFile csv("step25.csv"), net("step25.ksn"), net2("step25b.ksn");
  REQUIRE(run_cli("gen --kind step --d 2 --grid 5 --out " + csv.path).exit_code == 0);

  auto fit = run_cli("fit " + csv.path + " --rational --out " + net.path);
  CHECK(fit.exit_code == 0);
  CHECK(fit.out.find("max_abs_residual: 0\n") != std::string::npos);

  auto rep = run_cli("report " + net.path + " " + csv.path);
  CHECK(rep.exit_code == 0);
  CHECK(rep.out.find("max_abs_residual: 0\n") != std::string::npos);
  CHECK(rep.out.find("distinct_keys: 125") != std::string::npos);

  auto ev = run_cli("eval " + net.path + " --point 0.75,0.25 --point 0.25,1");
  CHECK(ev.exit_code == 0);
  CHECK(ev.out == "1\n0\n");

  auto cz = run_cli("check-z " + csv.path + " --rational");
  CHECK(cz.exit_code == 0);
  CHECK(cz.out.find("Z: satisfied, rank = 25") != std::string::npos);

  // repeated fit is byte-identical
  REQUIRE(run_cli("fit " + csv.path + " --rational --out " + net2.path).exit_code == 0);
  CHECK(slurp(net.path) == slurp(net2.path));
}

TEST_CASE("fit exits 2 and prints the witness on a duplicated point") {
  TempFile csv("dup.csv"), net("dup.ksn");
  ksn::write_text_file(csv.path,
                       "x1,x2,f\n"
                       "0,0,1\n"
                       "0.5,0.25,2\n"
                       "0.5,0.25,3\n");
  auto r = run_cli("fit " + csv.path + " --rational --out " + net.path);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("witness = (1, -1)") != std::string::npos);
  CHECK(r.out.find("closed path points: 1 2") != std::string::npos);
}

TEST_CASE("fit exits 3 when the grouping tolerance is ambiguous") {
  TempFile csv("amb.csv"), net("amb.ksn");
  REQUIRE(run_cli("gen --kind random --seed 3 --d 2 --grid 3 --out " + csv.path).exit_code == 0);
  // find the smallest positive w-gap, then pick a tolerance with gap in (tol, 10 tol)
  auto sample = ksn::read_dataset<double>(csv.path);
  auto stack = ksn::default_stack<double>(2);
  auto wtab = stack.w_table(sample.points);
  double min_gap = 1e300;
  const int blocks = stack.num_blocks();
  for (int k = 0; k < blocks; ++k) {
    std::vector<double> col;
    for (std::size_t i = 0; i < sample.size(); ++i) col.push_back(wtab[i * blocks + k]);
    std::sort(col.begin(), col.end());
    for (std::size_t i = 1; i < col.size(); ++i) {
      const double gap = col[i] - col[i - 1];
      if (gap > 0 && gap < min_gap) min_gap = gap;
    }
  }
  REQUIRE(min_gap < 1e300);
  const double tolerance = min_gap / 5.0;
  auto r = run_cli("fit " + csv.path + " --out " + net.path + " --tolerance " +
                   ksn::format_shortest(tolerance));
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("grouping ambiguity") != std::string::npos);
}

TEST_CASE("bad arguments exit 4, I/O failures exit 1") {
  CHECK(run_cli("frobnicate").exit_code == 4);
  CHECK(run_cli("fit").exit_code == 4);
  TempFile net("missing.ksn");
  CHECK(run_cli("fit no_such_dataset.csv --out " + net.path).exit_code == 1);
  CHECK(run_cli("eval no_such_network.ksn --point 0,0").exit_code == 1);
  TempFile csv("tiny.csv");
  ksn::write_text_file(csv.path, "x1,x2,f\n0,0,1\n");
  CHECK(run_cli("fit " + csv.path + " --out " + net.path + " --phi warp").exit_code == 4);
  // rational mode cannot host the transcendental phi
  CHECK(run_cli("fit " + csv.path + " --rational --out " + net.path + " --phi power")
            .exit_code == 4);
}

TEST_CASE("float fit with 17 significant digits prints deterministically") {
  TempFile csv("randf.csv"), net("randf.ksn"), net2("randf2.ksn");
  REQUIRE(run_cli("gen --kind random --seed 5 --d 2 --grid 4 --out " + csv.path).exit_code == 0);
  auto a = run_cli("fit " + csv.path + " --out " + net.path);
  auto b = run_cli("fit " + csv.path + " --out " + net2.path);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(net.path) == slurp(net2.path));
  auto ev = run_cli("eval " + net.path + " --points " + csv.path + " --precision 17");
  CHECK(ev.exit_code == 0);
  // one line per dataset row
  CHECK(std::count(ev.out.begin(), ev.out.end(), '\n') == 16);
}
