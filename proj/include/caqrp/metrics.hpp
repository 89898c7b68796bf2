#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caqrp/core.hpp"

namespace caqrp::metrics {

/// Final per-run numbers. Undefined means (no answered queries, no queries
/// with ground truth) are carried as NaN; CSV rows leave those fields empty.
struct MetricsReport {
  std::string protocol;
  int n_peers = 0;
  std::uint64_t seed = 0;
  int queries_issued = 0;
  int queries_answered = 0;
  double hit_rate = 0.0;
  double recall_mean = std::nan("");
  double delay_mean_s = std::nan("");
  std::uint64_t messages_total = 0;
  double messages_per_query = 0.0;
  std::uint64_t hits_lost = 0;
  std::uint64_t drops = 0;
};

/// |retrieved intersect relevant| / |relevant|. Undefined (nullopt) when
/// nothing is relevant; callers exclude such queries from aggregation.
/// Inputs are id lists; duplicates in `retrieved` count once.
inline std::optional<double> per_query_recall(std::vector<DocId> retrieved,
                                              std::vector<DocId> relevant) {
  if (relevant.empty()) return std::nullopt;
  std::sort(retrieved.begin(), retrieved.end());
  retrieved.erase(std::unique(retrieved.begin(), retrieved.end()), retrieved.end());
  std::sort(relevant.begin(), relevant.end());
  relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
  std::size_t both = 0;
  std::size_t i = 0, j = 0;
  while (i < retrieved.size() && j < relevant.size()) {
    if (retrieved[i] < relevant[j]) {
      ++i;
    } else if (relevant[j] < retrieved[i]) {
      ++j;
    } else {
      ++both;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(both) / static_cast<double>(relevant.size());
}

/// Accumulates one run's counters and closes them into a report.
class MetricsAccumulator {
 public:
  void count_issued() { ++issued_; }
  void count_answered() { ++answered_; }
  void record_delay(double seconds) {
    delay_sum_ += seconds;
    ++delay_n_;
  }
  void record_recall(double recall) {
    recall_sum_ += recall;
    ++recall_n_;
  }
  void count_messages(std::uint64_t n = 1) { messages_ += n; }
  void count_hit_lost() { ++hits_lost_; }
  void count_drop() { ++drops_; }

  MetricsReport finish(std::string protocol, int n_peers, std::uint64_t seed) const {
    MetricsReport r;
    r.protocol = std::move(protocol);
    r.n_peers = n_peers;
    r.seed = seed;
    r.queries_issued = issued_;
    r.queries_answered = answered_;
    r.hit_rate = issued_ == 0 ? 0.0 : static_cast<double>(answered_) / issued_;
    if (recall_n_ > 0) r.recall_mean = recall_sum_ / recall_n_;
    if (delay_n_ > 0) r.delay_mean_s = delay_sum_ / delay_n_;
    r.messages_total = messages_;
    r.messages_per_query =
        issued_ == 0 ? 0.0 : static_cast<double>(messages_) / issued_;
    r.hits_lost = hits_lost_;
    r.drops = drops_;
    return r;
  }

 private:
  int issued_ = 0;
  int answered_ = 0;
  double delay_sum_ = 0.0;
  int delay_n_ = 0;
  double recall_sum_ = 0.0;
  int recall_n_ = 0;
  std::uint64_t messages_ = 0;
  std::uint64_t hits_lost_ = 0;
  std::uint64_t drops_ = 0;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// CSV cells for absent metrics stay empty; "nan" is console-only.
inline std::string csv_field(double v) {
  return std::isnan(v) ? std::string{} : format_double(v);
}

inline std::string csv_header() {
  return "protocol,n_peers,seed,queries_issued,queries_answered,hit_rate,"
         "recall_mean,delay_mean_s,messages_total,messages_per_query,hits_lost,drops";
}

inline std::string to_csv_row(const MetricsReport& r) {
  std::string out;
  out += r.protocol;
  out += ',' + std::to_string(r.n_peers);
  out += ',' + std::to_string(r.seed);
  out += ',' + std::to_string(r.queries_issued);
  out += ',' + std::to_string(r.queries_answered);
  out += ',' + format_double(r.hit_rate);
  out += ',' + csv_field(r.recall_mean);
  out += ',' + csv_field(r.delay_mean_s);
  out += ',' + std::to_string(r.messages_total);
  out += ',' + format_double(r.messages_per_query);
  out += ',' + std::to_string(r.hits_lost);
  out += ',' + std::to_string(r.drops);
  return out;
}

/// Cross-seed summary for one (protocol, peer count) cell. NaN-valued runs
/// are excluded from the affected mean but still counted in `runs`.
struct SummaryRow {
  std::string protocol;
  int n_peers = 0;
  int runs = 0;
  double hit_rate_mean = std::nan("");
  double recall_mean = std::nan("");
  double delay_mean_s = std::nan("");
  double messages_per_query_mean = std::nan("");
};

inline std::vector<SummaryRow> aggregate(const std::vector<MetricsReport>& reports) {
  struct Cell {
    int runs = 0;
    double hit = 0.0;
    int hit_n = 0;
    double rec = 0.0;
    int rec_n = 0;
    double del = 0.0;
    int del_n = 0;
    double mpq = 0.0;
    int mpq_n = 0;
  };
  std::map<std::pair<std::string, int>, Cell> cells;
  for (const auto& r : reports) {
    Cell& c = cells[{r.protocol, r.n_peers}];
    ++c.runs;
    c.hit += r.hit_rate;
    ++c.hit_n;
    c.mpq += r.messages_per_query;
    ++c.mpq_n;
    if (!std::isnan(r.recall_mean)) {
      c.rec += r.recall_mean;
      ++c.rec_n;
    }
    if (!std::isnan(r.delay_mean_s)) {
      c.del += r.delay_mean_s;
      ++c.del_n;
    }
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, c] : cells) {
    SummaryRow row;
    row.protocol = key.first;
    row.n_peers = key.second;
    row.runs = c.runs;
    if (c.hit_n > 0) row.hit_rate_mean = c.hit / c.hit_n;
    if (c.rec_n > 0) row.recall_mean = c.rec / c.rec_n;
    if (c.del_n > 0) row.delay_mean_s = c.del / c.del_n;
    if (c.mpq_n > 0) row.messages_per_query_mean = c.mpq / c.mpq_n;
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::string out =
      "protocol      peers  runs  hit_rate  recall    delay_s   msgs/query\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %6d %5d  %8s  %8s  %8s  %10s\n",
                  r.protocol.c_str(), r.n_peers, r.runs,
                  format_double(r.hit_rate_mean).c_str(),
                  format_double(r.recall_mean).c_str(),
                  format_double(r.delay_mean_s).c_str(),
                  format_double(r.messages_per_query_mean).c_str());
    out += buf;
  }
  return out;
}

}  // namespace caqrp::metrics
