#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "caqrp/core.hpp"

namespace caqrp {

using TermId = std::uint32_t;

/// Sparse term-weight vector, stored sorted by term id with no duplicates
/// and no zero weights. Weights must be finite and nonnegative.
class TermVector {
 public:
  using Entry = std::pair<TermId, double>;

  TermVector() = default;

  TermVector(std::initializer_list<Entry> entries)
      : TermVector(std::vector<Entry>(entries)) {}

  explicit TermVector(std::vector<Entry> entries) {
    for (const auto& [term, weight] : entries) {
      if (!is_finite(weight) || weight < 0.0)
        throw ValidationError("term weight must be finite and nonnegative");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].first == entries[i - 1].first)
        throw ValidationError("duplicate term id in term vector");
    }
    std::erase_if(entries, [](const Entry& e) { return e.second == 0.0; });
    entries_ = std::move(entries);
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  double norm() const {
    double s = 0.0;
    for (const auto& [term, w] : entries_) s += w * w;
    return std::sqrt(s);
  }

  bool operator==(const TermVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Dot product over the shared terms. Linear merge over the sorted entries.
inline double dot(const TermVector& a, const TermVector& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      s += ea[i].second * eb[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

/// Cosine similarity. Either vector having zero norm yields 0.
inline double cosine(const TermVector& a, const TermVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

/// Query payload: sparse term vector tagged with the originating query id.
struct QueryVector {
  QueryId id = 0;
  TermVector terms;
};

}  // namespace caqrp
