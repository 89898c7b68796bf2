#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "caqrp/core.hpp"
#include "caqrp/textio.hpp"
#include "caqrp/mcdm.hpp"
#include "caqrp/netsim.hpp"
#include "caqrp/protocol.hpp"

namespace caqrp::config {

/// A scenario file plus the driver-level knobs that do not belong to a single
/// simulation: the seed list and where the criterion weights came from.
struct ScenarioConfig {
  sim::SimulationConfig sim;
  std::vector<std::uint64_t> seeds{42};
  bool weights_from_ahp = false;

  void validate() const {
    sim.validate();
    if (seeds.empty()) throw ValidationError("run.seeds: need at least one seed");
  }
};

/// Parses sectioned key = value text. Every key has a default equal to the
/// canonical scenario, so an empty string is a valid input. Unknown sections
/// or keys are errors naming the offender; `#` and `;` start comments.
inline ScenarioConfig parse_scenario(std::string_view text) {
  using textio::fail;
  using textio::parse_integer;
  using textio::parse_number;
  using textio::split_list;

  ScenarioConfig out;
  std::string section;
  std::string weights_mode = "explicit";
  std::array<std::string, 4> ahp_rows;
  std::array<int, 4> ahp_row_lines{0, 0, 0, 0};
  int ahp_mode_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = textio::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = textio::trim(line.substr(1, line.size() - 2));
      if (section != "network" && section != "mobility" && section != "energy" &&
          section != "queue" && section != "protocol" && section != "weights" &&
          section != "workload" && section != "run") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value, got '" + line + "'");
    const std::string key = textio::trim(line.substr(0, eq));
    const std::string value = textio::trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key '" + key + "' before any [section]");
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");

    auto num = [&] { return parse_number(value, line_no); };
    auto integer = [&] { return parse_integer(value, line_no); };
    auto unknown = [&] {
      fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
    };

    if (section == "network") {
      if (key == "n_peers") {
        out.sim.n_peers = static_cast<int>(integer());
      } else if (key == "area_m") {
        const auto parts = split_list(value);
        if (parts.empty() || parts.size() > 2) fail(line_no, "area_m wants 1 or 2 numbers");
        out.sim.mobility.width_m = parse_number(parts[0], line_no);
        out.sim.mobility.height_m =
            parts.size() == 2 ? parse_number(parts[1], line_no) : out.sim.mobility.width_m;
      } else if (key == "range_m") {
        out.sim.protocol.range_m = num();
      } else {
        unknown();
      }
    } else if (section == "mobility") {
      if (key == "v_min") {
        out.sim.mobility.v_min = num();
      } else if (key == "v_max") {
        out.sim.mobility.v_max = num();
      } else if (key == "pause_s") {
        out.sim.mobility.pause_s = num();
      } else {
        unknown();
      }
    } else if (section == "energy") {
      if (key == "E_lo") {
        out.sim.energy.initial_min_j = num();
      } else if (key == "E_hi") {
        out.sim.energy.initial_max_j = num();
      } else if (key == "E_tx") {
        out.sim.energy.e_tx_j = num();
      } else if (key == "E_rx") {
        out.sim.energy.e_rx_j = num();
      } else {
        unknown();
      }
    } else if (section == "queue") {
      if (key == "S") {
        out.sim.queue.capacity = static_cast<int>(integer());
      } else if (key == "mu") {
        out.sim.queue.service_rate = num();
      } else if (key == "hop_delay_s") {
        out.sim.queue.hop_delay_s = num();
      } else {
        unknown();
      }
    } else if (section == "protocol") {
      if (key == "strategy") {
        const auto s = protocol::parse_strategy(value);
        if (!s) fail(line_no, "unknown strategy '" + value + "' (valid: caqrp, rbfs, gossip-lb)");
        out.sim.strategy = *s;
      } else if (key == "k") {
        out.sim.protocol.fanout = static_cast<int>(integer());
      } else if (key == "ttl") {
        out.sim.protocol.ttl = static_cast<int>(integer());
      } else if (key == "p_base") {
        out.sim.protocol.p_base = num();
      } else if (key == "beacon_s") {
        out.sim.protocol.beacon_period_s = num();
      } else if (key == "P_cap") {
        out.sim.protocol.profile_capacity = static_cast<std::size_t>(integer());
      } else if (key == "horizon_s") {
        out.sim.protocol.horizon_s = num();
      } else if (key == "cache_expiry_s") {
        out.sim.protocol.cache_expiry_s = num();
      } else {
        unknown();
      }
    } else if (section == "weights") {
      if (key == "mode") {
        if (value != "explicit" && value != "ahp") {
          fail(line_no, "weights.mode must be 'explicit' or 'ahp', got '" + value + "'");
        }
        weights_mode = value;
        ahp_mode_line = line_no;
      } else if (key == "w") {
        const auto parts = split_list(value);
        if (parts.size() != 4) {
          fail(line_no, "w wants exactly 4 numbers, got " + std::to_string(parts.size()));
        }
        for (std::size_t i = 0; i < 4; ++i) {
          out.sim.protocol.weights[i] = parse_number(parts[i], line_no);
        }
      } else if (key == "row1" || key == "row2" || key == "row3" || key == "row4") {
        const std::size_t idx = static_cast<std::size_t>(key[3] - '1');
        ahp_rows[idx] = value;
        ahp_row_lines[idx] = line_no;
      } else {
        unknown();
      }
    } else if (section == "workload") {
      if (key == "vocabulary") {
        out.sim.workload.vocabulary = static_cast<int>(integer());
      } else if (key == "topics") {
        out.sim.workload.topics = static_cast<int>(integer());
      } else if (key == "docs_per_peer") {
        out.sim.workload.docs_per_peer = static_cast<int>(integer());
      } else if (key == "terms_per_doc") {
        out.sim.workload.terms_per_doc = static_cast<int>(integer());
      } else if (key == "terms_per_query") {
        out.sim.workload.terms_per_query = static_cast<int>(integer());
      } else if (key == "queries") {
        out.sim.n_queries = static_cast<int>(integer());
      } else if (key == "rate") {
        out.sim.query_rate = num();
      } else if (key == "zipf_s") {
        out.sim.workload.zipf_s = num();
      } else if (key == "theta") {
        out.sim.workload.theta = num();
      } else {
        unknown();
      }
    } else if (section == "run") {
      if (key == "duration_s") {
        out.sim.duration_s = num();
      } else if (key == "tick_s") {
        out.sim.mobility_tick_s = num();
      } else if (key == "seeds") {
        const auto parts = split_list(value);
        out.seeds.clear();
        for (const auto& p : parts) {
          const long long s = parse_integer(p, line_no);
          if (s < 0) fail(line_no, "seeds must be non-negative, got '" + p + "'");
          out.seeds.push_back(static_cast<std::uint64_t>(s));
        }
        if (out.seeds.empty()) fail(line_no, "seeds list is empty");
      } else {
        unknown();
      }
    }
  }

  if (weights_mode == "ahp") {
    for (std::size_t i = 0; i < 4; ++i) {
      if (ahp_row_lines[i] == 0) {
        fail(ahp_mode_line, "weights.mode = ahp: missing required key 'row" +
                                std::to_string(i + 1) + "'");
      }
    }
    mcdm::PairwiseMatrix pw;
    pw.order = 4;
    pw.entries = mcdm::Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto parts = textio::split_list(ahp_rows[i]);
      if (parts.size() != 4) {
        fail(ahp_row_lines[i], "row" + std::to_string(i + 1) + " wants exactly 4 numbers, got " +
                                   std::to_string(parts.size()));
      }
      for (std::size_t j = 0; j < 4; ++j) {
        pw.entries(i, j) = textio::parse_number(parts[j], ahp_row_lines[i]);
      }
    }
    const auto w = mcdm::ahp_weights(pw);
    for (std::size_t i = 0; i < 4; ++i) out.sim.protocol.weights[i] = w[i];
    out.weights_from_ahp = true;
  }

  // Matching uses one threshold: the workload's theta is the protocol's.
  out.sim.protocol.theta = out.sim.workload.theta;
  out.validate();
  return out;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace caqrp::config
