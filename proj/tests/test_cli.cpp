// End-to-end checks that spawn the installed driver binary. The binary path
// and the in-repo scenario come in through compile definitions.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::path("cli_scratch");

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the driver with sh, capturing both streams. `env_prefix` may carry
// VAR=value assignments.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_file = kScratch / ("stdout_" + std::to_string(counter));
  const fs::path err_file = kScratch / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + CAQRP_CLI_PATH +
                          " " + args + " >" + out_file.string() + " 2>" + err_file.string();
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Small world so the whole file runs in well under a second.
const char* kSmallScenario = R"([network]
n_peers = 8
area_m = 300
range_m = 150

[workload]
vocabulary = 16
topics = 2
docs_per_peer = 4
queries = 20

[run]
duration_s = 30
seeds = 3 1 2
)";

struct ScratchSetup {
  ScratchSetup() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
    std::ofstream(kScratch / "small.ini") << kSmallScenario;
  }
};

ScratchSetup& scratch() {
  static ScratchSetup s;
  return s;
}

}  // namespace

TEST_CASE("run emits one csv row per seed, sorted") {
  scratch();
  const auto csv_path = (kScratch / "run.csv").string();
  const auto r = run_cli("run " + (kScratch / "small.ini").string() + " --out " + csv_path);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(csv_path));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("protocol,n_peers,seed,", 0) == 0);
  CHECK(rows[1].rfind("caqrp,8,1,", 0) == 0);
  CHECK(rows[2].rfind("caqrp,8,2,", 0) == 0);
  CHECK(rows[3].rfind("caqrp,8,3,", 0) == 0);
  // Console summary aggregates the same runs.
  CHECK(r.out.find("caqrp") != std::string::npos);
}

TEST_CASE("rerunning with the same arguments overwrites deterministically") {
  scratch();
  const auto csv_path = (kScratch / "repeat.csv").string();
  const std::string args = "run " + (kScratch / "small.ini").string() + " --out " + csv_path;
  REQUIRE(run_cli(args).exit_code == 0);
  const std::string first = slurp(csv_path);
  REQUIRE(run_cli(args).exit_code == 0);
  CHECK(slurp(csv_path) == first);
}

TEST_CASE("seed flag narrows the run to a single row") {
  scratch();
  const auto csv_path = (kScratch / "one.csv").string();
  const auto r = run_cli("run " + (kScratch / "small.ini").string() + " --seed 7 --out " +
                         csv_path);
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(csv_path));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].rfind("caqrp,8,7,", 0) == 0);
}

TEST_CASE("trace flag writes per-seed event traces beside the csv") {
  scratch();
  const auto csv_path = (kScratch / "traced.csv").string();
  const auto r = run_cli("run " + (kScratch / "small.ini").string() + " --trace --out " +
                         csv_path);
  REQUIRE(r.exit_code == 0);
  for (int seed : {1, 2, 3}) {
    const fs::path tp = kScratch / ("traced_seed" + std::to_string(seed) + ".trace");
    REQUIRE(fs::exists(tp));
    const auto lines = lines_of(slurp(tp));
    REQUIRE_FALSE(lines.empty());
    CHECK(lines.back().find(" end ") != std::string::npos);
  }
}

TEST_CASE("relative outputs land in the directory override") {
  scratch();
  fs::create_directories(kScratch / "redirected");
  const auto r = run_cli("run " + (kScratch / "small.ini").string() + " --out inner.csv",
                         "CAQRP_OUT_DIR=" + (kScratch / "redirected").string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(kScratch / "redirected" / "inner.csv"));
}

TEST_CASE("compare sweeps the protocol by size by seed grid") {
  scratch();
  const auto csv_path = (kScratch / "cmp.csv").string();
  const auto r = run_cli("compare " + (kScratch / "small.ini").string() +
                         " --protocols caqrp,rbfs --sizes 6,8 --seeds 2 --out " + csv_path);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(csv_path));
  REQUIRE(rows.size() == 1 + 2 * 2 * 2);
  int caqrp_rows = 0, rbfs_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].rfind("caqrp,", 0) == 0) ++caqrp_rows;
    if (rows[i].rfind("rbfs,", 0) == 0) ++rbfs_rows;
  }
  CHECK(caqrp_rows == 4);
  CHECK(rbfs_rows == 4);
  // Summary table covers every cell of the sweep.
  CHECK(r.out.find("caqrp") != std::string::npos);
  CHECK(r.out.find("rbfs") != std::string::npos);
}

TEST_CASE("unknown protocol token fails listing the valid ones") {
  scratch();
  const auto r = run_cli("compare " + (kScratch / "small.ini").string() + " --protocols flood");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("caqrp") != std::string::npos);
  CHECK(r.err.find("rbfs") != std::string::npos);
  CHECK(r.err.find("gossip-lb") != std::string::npos);
}

TEST_CASE("config mistakes name the offending key and exit with validation status") {
  scratch();
  std::ofstream(kScratch / "bad.ini") << "[network]\nn_perrs = 8\n";
  const auto r = run_cli("run " + (kScratch / "bad.ini").string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("n_perrs") != std::string::npos);

  const auto missing = run_cli("run " + (kScratch / "nothere.ini").string());
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("nothere.ini") != std::string::npos);
}

TEST_CASE("mcdm subcommand reproduces the worked ranking from a file") {
  scratch();
  std::ofstream(kScratch / "table.m") << "5 4\n"
                                      << "b b b c\n"
                                      << "0.235 0.55 0.098 0.117\n"
                                      << "0.612 0.469 0.582 0.161\n"
                                      << "0.680 0.375 0.550 0.081\n"
                                      << "0.340 0.319 0.388 0.564\n"
                                      << "0.068 0.563 0.453 0.483\n"
                                      << "0.204 0.469 0.065 0.645\n";
  const auto r = run_cli("mcdm " + (kScratch / "table.m").string() + " --prenormalized");
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("n1") != std::string::npos);
  CHECK(r.out.find("0.756") != std::string::npos);

  std::ofstream(kScratch / "bad.m") << "2 2\nb c\n0.5 oops\n1 1\n1 1\n";
  const auto bad = run_cli("mcdm " + (kScratch / "bad.m").string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("line 3") != std::string::npos);
}
