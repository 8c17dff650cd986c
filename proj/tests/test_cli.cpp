#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {
const fs::path work = TEST_WORK_DIR;

struct Setup {
  Setup() {
    fs::remove_all(work);
    fs::create_directories(work);
  }
} setup;

// Runs the CLI inside the work directory; returns the exit code.
int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
  std::string cmd = "cd '" + work.string() + "' && '" BOSONIC_CLI_PATH "' " + args + " > " + stdout_file + " 2>> cli.log";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(work / p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json manifest(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(work / p) << text; }
}  // namespace

TEST_CASE("help exits zero for every command") {
  CHECK(run("--help") == 0);
  for (const char* c : {"synthesize", "plan", "estimate", "open-sim"}) CHECK(run(std::string(c) + " --help") == 0);
  CHECK(run("--version") == 0);
  CHECK(run("synthesize") == 1);
  CHECK(run("bogus") == 1);
}

TEST_CASE("synthesize cat2 at n = 2") {
  REQUIRE(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16 --out cat2.json") == 0);
  json s = json::parse(slurp("cat2.json"));
  CHECK(s["steps"].size() == 10);
  CHECK(s["meta"]["fidelity"].get<double>() >= 0.9999988);
  CHECK(s["meta"]["duration_s"].get<double>() * 1e9 == doctest::Approx(26.42).epsilon(0.01 / 26.42));
  json m = manifest("cat2.json.manifest.json");
  CHECK(m["command"] == "synthesize");
  CHECK(m["exit_code"] == 0);
  CHECK(m["results"]["operations"] == 10);
  CHECK(m["outputs"].size() == 1);
  CHECK(m["arguments"]["target"] == "cat2:alpha=1.41421356");
  CHECK(m.contains("version"));
  CHECK(m["wall_time_s"].get<double>() >= 0);

  std::string first = slurp("cat2.json");
  REQUIRE(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16 --out cat2.json") == 0);
  CHECK(slurp("cat2.json") == first);
  CHECK(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16", "cat2_stdout.json") == 0);
  CHECK(slurp("cat2_stdout.json") == first);
}

TEST_CASE("synthesize trivial and FTP targets") {
  REQUIRE(run("synthesize --target fock:0 --order 1 --out vac.json") == 0);
  json v = json::parse(slurp("vac.json"));
  CHECK(v["steps"].empty());
  CHECK(v["meta"]["fidelity"].get<double>() == doctest::Approx(1.0));

  REQUIRE(run("synthesize --target fock:0,2,5,9 --order 2 --ftp --out ftp.json") == 0);
  json f = json::parse(slurp("ftp.json"));
  CHECK(f["steps"].size() == 12);
  CHECK(f["meta"]["fidelity"].get<double>() >= 0.999);

  CHECK(run("synthesize --target fock:0,1 --order 2 --out bad.json") == 1);
  CHECK(run("synthesize --target nonsense --order 2") == 1);
  CHECK(run("synthesize --target fock:0,2,5,9 --order 2 --ftp --threshold 1.5") == 2);
}

TEST_CASE("budget files") {
  write("budget.txt", "omega_mhz = 25*2pi\ng1_mhz = 100*2pi\ng2_mhz = 25*2pi\n");
  REQUIRE(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16 --budget budget.txt --out b.json") == 0);
  CHECK(slurp("b.json") == slurp("cat2.json"));
  json m = manifest("b.json.manifest.json");
  CHECK(m["inputs"].size() == 1);
  CHECK(m["inputs"].begin().value().get<std::string>().size() == 64);
  write("nounit.txt", "omega_mhz = 25\n");
  CHECK(run("synthesize --target fock:2 --order 2 --budget nounit.txt") == 1);
}

TEST_CASE("plan output") {
  REQUIRE(run("plan --target fock:0,1,7 --order 2", "plan.txt") == 0);
  std::string p = slurp("plan.txt");
  CHECK(p.find("heights = (0,3)") != std::string::npos);
  CHECK(p.find("steps = 1 + 3") != std::string::npos);
  REQUIRE(run("plan --target fock:0 --order 2 --csv", "plan0.csv") == 0);
  CHECK(slurp("plan0.csv").find("heights,\"0,0\"") != std::string::npos);
  REQUIRE(run("plan --target bellcat:alpha1=1.41421356,alpha2=1.41421356 --order 2 --two-osc --manifest bc.json") == 0);
  json m = manifest("bc.json");
  CHECK(m["results"]["steps_ftp"] == 61);
  CHECK(m["results"]["steps_linear"] == 115);
  CHECK(run("plan --target fock:0,1 --order 2 --two-osc") == 1);
}

TEST_CASE("estimate output") {
  REQUIRE(run("estimate --mode symmetric --n 2 --K 5 --omega 25e6*2pi --g 25e6*2pi --manifest e.json") == 0);
  CHECK(manifest("e.json")["results"]["T_ns"].get<double>() == doctest::Approx(128.35).epsilon(0.01 / 128.35));
  REQUIRE(run("estimate --mode symmetric --n 2 --K 0 --manifest e0.json") == 0);
  CHECK(manifest("e0.json")["results"]["T_ns"].get<double>() == 0.0);
  REQUIRE(run("estimate --mode figure2 --out fig2.csv") == 0);
  std::string csv = slurp("fig2.csv");
  CHECK(csv.rfind("K,n,omega_radps,g_radps,T_ns\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 100);
  CHECK(run("estimate --mode symmetric --n 2 --K 5 --omega 25e6") == 1);
  CHECK(run("estimate --mode symmetric --n 3 --K 5") == 1);
}

TEST_CASE("open-system replay") {
  REQUIRE(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16 --out cat2.json") == 0);
  write("params.txt", "omega_q_ghz = 10*2pi\nomega_o_ghz = 5*2pi\ng2_mhz = 25*2pi\n");
  write("rates.txt", "gamma_q_r_khz = 20\ngamma_o_r_khz = 20\ngamma_q_phi_khz = 110\ngamma_o_phi_khz = 110\n");
  REQUIRE(run("open-sim --schedule cat2.json --params params.txt --rates rates.txt --out rho.csv") == 0);
  json m = manifest("rho.csv.manifest.json");
  CHECK(std::abs(m["results"]["fidelity"].get<double>() - 0.97972653) <= 0.005);
  CHECK(m["inputs"].size() == 3);
  CHECK(slurp("rho.csv").rfind("row,col,re,im\n", 0) == 0);
  CHECK(run("open-sim --schedule cat2.json --params missing.txt") == 1);
  CHECK(run("open-sim --schedule missing.json") == 1);
}

TEST_SUITE("closed_limit") {
  TEST_CASE("closed open-sim run meets the closed-system threshold") {
    REQUIRE(run("synthesize --target cat2:alpha=1.41421356 --order 2 --cutoff 16 --out cat2c.json") == 0);
    write("zero.txt", "gamma_q_r_khz = 0\ngamma_o_r_khz = 0\ngamma_q_phi_khz = 0\ngamma_o_phi_khz = 0\n");
    CHECK(run("open-sim --schedule cat2c.json --rates zero.txt --no-spurious --threshold 0.9999 --manifest c.json") ==
          0);
  }
}
