// Experiment driver: seeded simulation runs, protocol sweeps, and the
// offline ranking utility. Exit codes: 0 success, 1 validation, 2 runtime.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "caqrp/config.hpp"
#include "caqrp/matrix_io.hpp"
#include "caqrp/metrics.hpp"
#include "caqrp/netsim.hpp"

namespace fs = std::filesystem;
using caqrp::ValidationError;
namespace config = caqrp::config;
namespace mcdm = caqrp::mcdm;
namespace mcdm_io = caqrp::mcdm_io;
namespace metrics = caqrp::metrics;
namespace protocol = caqrp::protocol;
namespace sim = caqrp::sim;

namespace {

// Relative output paths land in CAQRP_OUT_DIR when it is set.
fs::path resolve_out(const std::string& name) {
  fs::path p{name};
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CAQRP_OUT_DIR")) p = fs::path(dir) / p;
  }
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

// Runs every configuration, up to hardware_concurrency at a time. Results
// keep job order, so output is identical however the pool schedules them.
std::vector<sim::RunResult> run_all(const std::vector<sim::SimulationConfig>& jobs) {
  std::vector<sim::RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  const std::size_t workers =
      std::min<std::size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
        try {
          results[i] = sim::run(jobs[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

std::string csv_of(const std::vector<sim::RunResult>& results) {
  std::string csv = metrics::csv_header() + "\n";
  for (const auto& r : results) csv += metrics::to_csv_row(r.report) + "\n";
  return csv;
}

void print_summary(const std::vector<sim::RunResult>& results) {
  std::vector<metrics::MetricsReport> reports;
  reports.reserve(results.size());
  for (const auto& r : results) reports.push_back(r.report);
  std::cout << metrics::summary_table(metrics::aggregate(reports));
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            const std::string& out_name, bool trace) {
  config::ScenarioConfig sc = config::load_scenario(config_path);
  std::vector<std::uint64_t> seeds =
      seed_override ? std::vector<std::uint64_t>{*seed_override} : sc.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<sim::SimulationConfig> jobs;
  jobs.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    sim::SimulationConfig cfg = sc.sim;
    cfg.seed = s;
    cfg.record_trace = trace;
    jobs.push_back(cfg);
  }

  const auto results = run_all(jobs);
  const fs::path out_path = resolve_out(out_name);
  write_text(out_path, csv_of(results));
  if (trace) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      fs::path tp = out_path;
      tp.replace_filename(out_path.stem().string() + "_seed" + std::to_string(seeds[i]) +
                          ".trace");
      write_text(tp, results[i].trace);
    }
  }
  print_summary(results);
  std::cerr << "wrote " << out_path.string() << " (" << results.size() << " rows)\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& protocols,
                const std::vector<int>& sizes, int n_seeds, const std::string& out_name) {
  config::ScenarioConfig sc = config::load_scenario(config_path);
  if (protocols.empty()) throw ValidationError("--protocols: need at least one token");
  if (sizes.empty()) throw ValidationError("--sizes: need at least one peer count");
  if (n_seeds < 1) throw ValidationError("--seeds: need at least one seed");

  std::vector<protocol::Strategy> strategies;
  for (const auto& tok : protocols) {
    const auto s = protocol::parse_strategy(tok);
    if (!s) {
      throw ValidationError("unknown protocol '" + tok + "' (valid: caqrp, rbfs, gossip-lb)");
    }
    strategies.push_back(*s);
  }

  std::vector<sim::SimulationConfig> jobs;
  jobs.reserve(strategies.size() * sizes.size() * static_cast<std::size_t>(n_seeds));
  for (const auto s : strategies) {
    for (const int size : sizes) {
      for (int seed = 1; seed <= n_seeds; ++seed) {
        sim::SimulationConfig cfg = sc.sim;
        cfg.strategy = s;
        cfg.n_peers = size;
        cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.record_trace = false;
        cfg.validate();
        jobs.push_back(cfg);
      }
    }
  }

  const auto results = run_all(jobs);
  const fs::path out_path = resolve_out(out_name);
  write_text(out_path, csv_of(results));
  print_summary(results);
  std::cerr << "wrote " << out_path.string() << " (" << results.size() << " rows)\n";
  return 0;
}

int cmd_mcdm(const std::string& matrix_path, bool prenormalized) {
  const auto file = mcdm_io::load_matrix_file(matrix_path);
  const auto result = mcdm::topsis_rank(file.matrix, prenormalized);
  std::cout << mcdm_io::format_ranking(file, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"context-aware query routing experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run one scenario across its seed list");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::string run_out = "results.csv";
  bool run_trace = false;
  run_cmd->add_option("config", run_config, "scenario file")->required();
  run_cmd->add_option("--seed", run_seed, "run only this seed");
  run_cmd->add_option("--out", run_out, "CSV output path");
  run_cmd->add_flag("--trace", run_trace, "write per-seed event traces next to the CSV");

  auto* cmp_cmd = app.add_subcommand("compare", "sweep protocols and network sizes");
  std::string cmp_config;
  std::vector<std::string> cmp_protocols{"caqrp", "gossip-lb", "rbfs"};
  std::vector<int> cmp_sizes{25, 50, 75, 100};
  int cmp_seeds = 5;
  std::string cmp_out = "compare.csv";
  cmp_cmd->add_option("config", cmp_config, "base scenario file")->required();
  cmp_cmd->add_option("--protocols", cmp_protocols, "protocol tokens")->delimiter(',');
  cmp_cmd->add_option("--sizes", cmp_sizes, "peer counts")->delimiter(',');
  cmp_cmd->add_option("--seeds", cmp_seeds, "number of seeds (1..N)");
  cmp_cmd->add_option("--out", cmp_out, "CSV output path");

  auto* mcdm_cmd = app.add_subcommand("mcdm", "rank a decision matrix from a file");
  std::string mcdm_path;
  bool prenormalized = false;
  mcdm_cmd->add_option("matrix", mcdm_path, "decision matrix file")->required();
  mcdm_cmd->add_flag("--prenormalized", prenormalized,
                     "treat values as already column-normalized");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(run_config, run_seed, run_out, run_trace);
    if (cmp_cmd->parsed()) {
      return cmd_compare(cmp_config, cmp_protocols, cmp_sizes, cmp_seeds, cmp_out);
    }
    return cmd_mcdm(mcdm_path, prenormalized);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
