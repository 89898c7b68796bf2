#pragma once

// Random inputs for property tests. Uses the library Rng for reproducible
// sequences; generation here feeds both the library and the oracle, so it
// does not weaken oracle independence.

#include <cstddef>
#include <string>
#include <vector>

#include "caqrp/mcdm.hpp"
#include "caqrp/rng.hpp"

namespace testgen {

struct RandomMatrixOptions {
  std::size_t max_rows = 10;
  std::size_t max_cols = 6;
  double lo = 0.0;
  double hi = 100.0;
};

inline caqrp::mcdm::DecisionMatrix random_decision_matrix(caqrp::Rng& rng,
                                                          const RandomMatrixOptions& opt = {}) {
  const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform_below(opt.max_rows));
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_below(opt.max_cols));
  caqrp::mcdm::DecisionMatrix x;
  x.values = caqrp::mcdm::Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    x.alternatives.push_back("a" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) x.values(i, j) = rng.uniform(opt.lo, opt.hi);
  }
  std::vector<double> raw(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    raw[j] = rng.uniform(0.05, 1.0);
    sum += raw[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    caqrp::mcdm::CriterionSpec c;
    c.name = "c" + std::to_string(j);
    c.kind = rng.bernoulli(0.5) ? caqrp::mcdm::CriterionKind::benefit
                                : caqrp::mcdm::CriterionKind::cost;
    c.weight = raw[j] / sum;
    x.criteria.push_back(c);
  }
  // Renormalize exactly so validate() never trips on accumulated error.
  double check = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) check += x.criteria[j].weight;
  x.criteria[n - 1].weight = 1.0 - check;
  return x;
}

inline std::vector<std::vector<double>> to_rows(const caqrp::mcdm::DecisionMatrix& x) {
  std::vector<std::vector<double>> rows(x.m(), std::vector<double>(x.n()));
  for (std::size_t i = 0; i < x.m(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j) rows[i][j] = x.values(i, j);
  return rows;
}

inline std::vector<char> to_kinds(const caqrp::mcdm::DecisionMatrix& x) {
  std::vector<char> kinds;
  for (const auto& c : x.criteria)
    kinds.push_back(c.kind == caqrp::mcdm::CriterionKind::benefit ? 'b' : 'c');
  return kinds;
}

inline std::vector<double> to_weights(const caqrp::mcdm::DecisionMatrix& x) {
  std::vector<double> w;
  for (const auto& c : x.criteria) w.push_back(c.weight);
  return w;
}

}  // namespace testgen
