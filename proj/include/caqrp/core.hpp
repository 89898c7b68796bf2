#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace caqrp {

using PeerId = std::int32_t;
using QueryId = std::uint64_t;
using DocId = std::uint64_t;

inline constexpr PeerId kNoPeer = -1;

/// Thrown when an input violates a documented precondition or invariant.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// 2-D point/vector in meters (positions) or meters per second (velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_sq()); }
  constexpr bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

inline bool is_finite(double v) { return std::isfinite(v); }

}  // namespace caqrp
