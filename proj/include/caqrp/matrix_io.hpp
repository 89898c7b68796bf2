#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "caqrp/core.hpp"
#include "caqrp/textio.hpp"
#include "caqrp/mcdm.hpp"

namespace caqrp::mcdm_io {

/// Decision matrix file: line 1 `m n`, line 2 n kind tokens (b|c), line 3
/// either n weights or the token `ahp` followed by n lines of n pairwise
/// entries, then m rows of n values. Blank lines and `#` comments are
/// skipped. Alternatives are named n1..nm in row order.
struct MatrixFile {
  mcdm::DecisionMatrix matrix;
  bool weights_from_ahp = false;
};

namespace detail {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto tokens = textio::split_list(raw);
    if (!tokens.empty()) out.push_back({n, std::move(tokens)});
  }
  return out;
}

}  // namespace detail

inline MatrixFile parse_matrix_file(std::string_view text) {
  using textio::fail;
  const auto lines = detail::content_lines(text);
  std::size_t at = 0;
  auto next = [&](const char* what) -> const detail::Line& {
    if (at >= lines.size()) {
      const int last = lines.empty() ? 1 : lines.back().number;
      fail(last, std::string("unexpected end of file, expected ") + what);
    }
    return lines[at++];
  };

  const auto& header = next("'m n' header");
  if (header.tokens.size() != 2) fail(header.number, "header wants exactly 'm n'");
  const long long m = textio::parse_integer(header.tokens[0], header.number);
  const long long n = textio::parse_integer(header.tokens[1], header.number);
  if (m < 1 || n < 1) fail(header.number, "need at least one alternative and one criterion");

  MatrixFile out;
  auto& x = out.matrix;
  x.criteria.resize(static_cast<std::size_t>(n));

  const auto& kinds = next("criterion kinds");
  if (kinds.tokens.size() != static_cast<std::size_t>(n)) {
    fail(kinds.number, "expected " + std::to_string(n) + " kind tokens, got " +
                           std::to_string(kinds.tokens.size()));
  }
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    const auto& t = kinds.tokens[j];
    if (t == "b") {
      x.criteria[j].kind = mcdm::CriterionKind::benefit;
    } else if (t == "c") {
      x.criteria[j].kind = mcdm::CriterionKind::cost;
    } else {
      fail(kinds.number, "criterion kind must be 'b' or 'c', got '" + t + "'");
    }
    x.criteria[j].name = "c" + std::to_string(j + 1);
  }

  const auto& wline = next("weights or 'ahp'");
  if (wline.tokens.size() == 1 && wline.tokens[0] == "ahp") {
    mcdm::PairwiseMatrix pw;
    pw.order = static_cast<std::size_t>(n);
    pw.entries = mcdm::Matrix(pw.order, pw.order);
    for (std::size_t i = 0; i < pw.order; ++i) {
      const auto& row = next("pairwise comparison row");
      if (row.tokens.size() != pw.order) {
        fail(row.number, "pairwise row wants " + std::to_string(n) + " entries, got " +
                             std::to_string(row.tokens.size()));
      }
      for (std::size_t j = 0; j < pw.order; ++j) {
        pw.entries(i, j) = textio::parse_number(row.tokens[j], row.number);
      }
    }
    std::vector<double> w;
    try {
      w = mcdm::ahp_weights(pw);
    } catch (const ValidationError& e) {
      fail(wline.number, e.what());
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) x.criteria[j].weight = w[j];
    out.weights_from_ahp = true;
  } else {
    if (wline.tokens.size() != static_cast<std::size_t>(n)) {
      fail(wline.number, "expected " + std::to_string(n) + " weights or 'ahp', got " +
                             std::to_string(wline.tokens.size()) + " tokens");
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      x.criteria[j].weight = textio::parse_number(wline.tokens[j], wline.number);
    }
  }

  x.values = mcdm::Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
    const auto& row = next("matrix row");
    if (row.tokens.size() != static_cast<std::size_t>(n)) {
      fail(row.number, "matrix row wants " + std::to_string(n) + " values, got " +
                           std::to_string(row.tokens.size()));
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      x.values(i, j) = textio::parse_number(row.tokens[j], row.number);
    }
    x.alternatives.push_back("n" + std::to_string(i + 1));
  }
  if (at != lines.size()) {
    fail(lines[at].number, "trailing content after the last matrix row");
  }

  try {
    x.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("matrix file: ") + e.what());
  }
  return out;
}

inline MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix_file(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Separation measures, closeness, and rank per alternative, input order,
/// three decimals.
inline std::string format_ranking(const MatrixFile& file,
                                  const mcdm::BasicRankingResult<std::string>& result) {
  std::string out;
  if (file.weights_from_ahp) {
    out += "weights (ahp):";
    for (const auto& c : file.matrix.criteria) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.3f", c.weight);
      out += buf;
    }
    out += '\n';
  }
  out += "node      s_plus   s_minus  closeness  rank\n";
  for (std::size_t i = 0; i < result.alternatives.size(); ++i) {
    const auto& e = result.entries[i];
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-8s  %7.3f  %7.3f  %9.3f  %4zu\n",
                  result.alternatives[i].c_str(), e.s_plus, e.s_minus, e.closeness, e.rank);
    out += buf;
  }
  return out;
}

}  // namespace caqrp::mcdm_io
