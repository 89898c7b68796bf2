#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "caqrp/core.hpp"

namespace caqrp::mcdm {

/// Two S+ + S- magnitudes below this are treated as coincident with both
/// ideal points; such rows get closeness 0.5 instead of 0/0.
inline constexpr double kDegenerateSeparation = 1e-12;

enum class CriterionKind { benefit, cost };

struct CriterionSpec {
  std::string name;
  CriterionKind kind = CriterionKind::benefit;
  double weight = 0.0;
};

/// Minimal dense row-major matrix. Only what the ranking pipeline needs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Decision matrix: one row per alternative, one column per criterion.
/// Id is the alternative identifier type (peer ids in the router, strings in
/// the CLI and tests).
template <typename Id>
struct BasicDecisionMatrix {
  std::vector<Id> alternatives;
  std::vector<CriterionSpec> criteria;
  Matrix values;

  std::size_t m() const { return alternatives.size(); }
  std::size_t n() const { return criteria.size(); }

  /// Invariants: at least one alternative and one criterion, value block of
  /// matching shape, entries finite and nonnegative, weights nonnegative and
  /// summing to 1 within 1e-9.
  void validate() const {
    if (alternatives.empty()) throw ValidationError("decision matrix has no alternatives");
    if (criteria.empty()) throw ValidationError("decision matrix has no criteria");
    if (values.rows() != m() || values.cols() != n())
      throw ValidationError("decision matrix shape mismatch");
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j < n(); ++j) {
        const double v = values(i, j);
        if (!is_finite(v) || v < 0.0)
          throw ValidationError("decision matrix entries must be finite and nonnegative");
      }
    double wsum = 0.0;
    for (const auto& c : criteria) {
      if (!is_finite(c.weight) || c.weight < 0.0)
        throw ValidationError("criterion weights must be finite and nonnegative");
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
      throw ValidationError("criterion weights must sum to 1");
  }
};

using DecisionMatrix = BasicDecisionMatrix<std::string>;

/// Column-wise Euclidean normalization: r_ij = x_ij / sqrt(sum_i x_ij^2).
/// An all-zero column stays all-zero.
template <typename Id>
Matrix normalize_matrix(const BasicDecisionMatrix<Id>& x) {
  x.validate();
  const std::size_t m = x.m(), n = x.n();
  Matrix r(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += x.values(i, j) * x.values(i, j);
    const double denom = std::sqrt(ss);
    if (denom == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) r(i, j) = x.values(i, j) / denom;
  }
  return r;
}

/// v_ij = w_j * r_ij.
inline Matrix apply_weights(const Matrix& r, const std::vector<double>& weights) {
  if (weights.size() != r.cols())
    throw ValidationError("weight count does not match criterion count");
  Matrix v = r;
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) *= weights[j];
  return v;
}

struct IdealSolutions {
  std::vector<double> positive;  // A+: best value per criterion
  std::vector<double> negative;  // A-: worst value per criterion
};

/// Per column of the weighted matrix: benefit criteria take max as ideal and
/// min as negative ideal; cost criteria the reverse.
inline IdealSolutions ideal_solutions(const Matrix& v,
                                      const std::vector<CriterionSpec>& criteria) {
  if (criteria.size() != v.cols())
    throw ValidationError("criterion count does not match matrix width");
  if (v.rows() == 0) throw ValidationError("empty weighted matrix");
  IdealSolutions out;
  out.positive.resize(v.cols());
  out.negative.resize(v.cols());
  for (std::size_t j = 0; j < v.cols(); ++j) {
    double lo = v(0, j), hi = v(0, j);
    for (std::size_t i = 1; i < v.rows(); ++i) {
      lo = std::min(lo, v(i, j));
      hi = std::max(hi, v(i, j));
    }
    const bool benefit = criteria[j].kind == CriterionKind::benefit;
    out.positive[j] = benefit ? hi : lo;
    out.negative[j] = benefit ? lo : hi;
  }
  return out;
}

struct SeparationMeasures {
  std::vector<double> s_plus;   // Euclidean distance to A+ per alternative
  std::vector<double> s_minus;  // Euclidean distance to A- per alternative
};

inline SeparationMeasures separation_measures(const Matrix& v, const IdealSolutions& ideals) {
  if (ideals.positive.size() != v.cols() || ideals.negative.size() != v.cols())
    throw ValidationError("ideal solution width does not match matrix");
  SeparationMeasures out;
  out.s_plus.resize(v.rows());
  out.s_minus.resize(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    double dp = 0.0, dn = 0.0;
    for (std::size_t j = 0; j < v.cols(); ++j) {
      const double ep = v(i, j) - ideals.positive[j];
      const double en = v(i, j) - ideals.negative[j];
      dp += ep * ep;
      dn += en * en;
    }
    out.s_plus[i] = std::sqrt(dp);
    out.s_minus[i] = std::sqrt(dn);
  }
  return out;
}

/// RC_i = S-_i / (S+_i + S-_i), defined as 0.5 when both separations vanish.
inline std::vector<double> relative_closeness(const SeparationMeasures& sep) {
  if (sep.s_plus.size() != sep.s_minus.size())
    throw ValidationError("separation vectors differ in length");
  std::vector<double> rc(sep.s_plus.size());
  for (std::size_t i = 0; i < rc.size(); ++i) {
    const double denom = sep.s_plus[i] + sep.s_minus[i];
    rc[i] = denom < kDegenerateSeparation ? 0.5 : sep.s_minus[i] / denom;
  }
  return rc;
}

/// Scores for one alternative, kept in input row order inside the result.
struct RankedAlternative {
  double s_plus = 0.0;
  double s_minus = 0.0;
  double closeness = 0.0;
  std::size_t rank = 0;  // 1 = best
};

template <typename Id>
struct BasicRankingResult {
  std::vector<Id> alternatives;            // input order
  std::vector<RankedAlternative> entries;  // aligned with alternatives
  std::vector<std::size_t> order;          // row indices, best first

  const Id& best() const { return alternatives[order.front()]; }
};

using RankingResult = BasicRankingResult<std::string>;

/// Full ranking pipeline. With prenormalized=true the value block is taken
/// as already column-normalized and the normalization step is skipped; the
/// nonnegativity and weight checks still apply.
template <typename Id>
BasicRankingResult<Id> topsis_rank(const BasicDecisionMatrix<Id>& x, bool prenormalized = false) {
  x.validate();
  Matrix r = prenormalized ? x.values : normalize_matrix(x);
  std::vector<double> w(x.n());
  for (std::size_t j = 0; j < x.n(); ++j) w[j] = x.criteria[j].weight;
  const Matrix v = apply_weights(r, w);
  const IdealSolutions ideals = ideal_solutions(v, x.criteria);
  const SeparationMeasures sep = separation_measures(v, ideals);
  const std::vector<double> rc = relative_closeness(sep);

  BasicRankingResult<Id> out;
  out.alternatives = x.alternatives;
  out.entries.resize(x.m());
  out.order.resize(x.m());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  // Stable sort: equal closeness keeps input order, so earlier rows win ties.
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&rc](std::size_t a, std::size_t b) { return rc[a] > rc[b]; });
  for (std::size_t i = 0; i < x.m(); ++i) {
    out.entries[i].s_plus = sep.s_plus[i];
    out.entries[i].s_minus = sep.s_minus[i];
    out.entries[i].closeness = rc[i];
  }
  for (std::size_t pos = 0; pos < out.order.size(); ++pos)
    out.entries[out.order[pos]].rank = pos + 1;
  return out;
}

/// Pairwise comparison matrix for deriving criterion weights.
struct PairwiseMatrix {
  std::size_t order = 0;
  Matrix entries;  // order x order
};

struct PairwiseViolation {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

/// Checks: unit diagonal, reciprocity a_jk * a_kj = 1 within 1e-9, and all
/// entries inside the comparison scale [1/9, 9].
inline std::vector<PairwiseViolation> validate_pairwise(const PairwiseMatrix& a) {
  std::vector<PairwiseViolation> out;
  if (a.order == 0 || a.entries.rows() != a.order || a.entries.cols() != a.order) {
    out.push_back({0, 0, "pairwise matrix must be square and nonempty"});
    return out;
  }
  constexpr double tol = 1e-9;
  for (std::size_t j = 0; j < a.order; ++j) {
    for (std::size_t k = 0; k < a.order; ++k) {
      const double v = a.entries(j, k);
      if (!is_finite(v) || v < 1.0 / 9.0 - tol || v > 9.0 + tol)
        out.push_back({j, k, "entry outside [1/9, 9]"});
    }
    if (std::abs(a.entries(j, j) - 1.0) > tol)
      out.push_back({j, j, "diagonal entry must be 1"});
    for (std::size_t k = j + 1; k < a.order; ++k) {
      if (std::abs(a.entries(j, k) * a.entries(k, j) - 1.0) > tol)
        out.push_back({j, k, "reciprocity violated"});
    }
  }
  return out;
}

/// Weights by column normalization followed by row averaging:
///   b_jk = a_jk / sum_l a_lk,  w_j = mean_k b_jk.
/// Output is nonnegative and sums to 1 up to rounding.
inline std::vector<double> ahp_weights(const PairwiseMatrix& a) {
  const auto violations = validate_pairwise(a);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid pairwise matrix:";
    for (const auto& v : violations)
      msg << " [" << v.row << "," << v.col << "] " << v.message << ";";
    throw ValidationError(msg.str());
  }
  const std::size_t n = a.order;
  std::vector<double> colsum(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) colsum[k] += a.entries(j, k);
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) w[j] += a.entries(j, k) / colsum[k];
    w[j] /= static_cast<double>(n);
  }
  return w;
}

}  // namespace caqrp::mcdm
