#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "caqrp/core.hpp"

namespace caqrp::textio {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

// Accepts plain decimals and fraction tokens such as "1/3".
inline double parse_number(const std::string& tok, int line) {
  const auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail(line, "bad number '" + tok + "'");
      return v;
    }
    const std::string num = tok.substr(0, slash);
    const std::string den = tok.substr(slash + 1);
    const double n = std::stod(num, &used);
    if (used != num.size()) fail(line, "bad number '" + tok + "'");
    const double d = std::stod(den, &used);
    if (used != den.size()) fail(line, "bad number '" + tok + "'");
    if (d == 0.0) fail(line, "zero denominator in '" + tok + "'");
    return n / d;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "bad number '" + tok + "'");
  }
}

inline long long parse_integer(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) fail(line, "bad integer '" + tok + "'");
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "bad integer '" + tok + "'");
  }
}

// Splits on commas and/or whitespace; empty pieces vanish.
inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace caqrp::textio
