#pragma once

#include <cmath>

#include "caqrp/context.hpp"
#include "caqrp/core.hpp"
#include "caqrp/rng.hpp"

namespace caqrp::sim {

/// Random-waypoint parameters over the rectangle [0,width] x [0,height].
struct MobilityConfig {
  double width_m = 1000.0;
  double height_m = 1000.0;
  double v_min = 1.0;   // m/s
  double v_max = 3.0;   // m/s
  double pause_s = 2.0;

  void validate() const {
    if (!(width_m > 0.0) || !(height_m > 0.0))
      throw ValidationError("mobility area must have positive extent");
    if (!(v_min > 0.0) || !(v_max >= v_min))
      throw ValidationError("speed range must satisfy 0 < v_min <= v_max");
    if (!(pause_s >= 0.0)) throw ValidationError("pause must be nonnegative");
  }
};

/// Per-peer waypoint progress. While paused the peer sits still until
/// pause_until, then draws a fresh waypoint and speed.
struct WaypointState {
  Vec2 target;
  double speed = 0.0;
  double pause_until = 0.0;
  bool paused = false;
};

inline Vec2 random_point(const MobilityConfig& cfg, Rng& rng) {
  return {rng.uniform(0.0, cfg.width_m), rng.uniform(0.0, cfg.height_m)};
}

namespace detail {
inline void retarget(WaypointState& wp, context::KinematicState& kin,
                     const MobilityConfig& cfg, Rng& rng) {
  wp.target = random_point(cfg, rng);
  wp.speed = rng.uniform(cfg.v_min, cfg.v_max);
  wp.paused = false;
  const Vec2 delta = wp.target - kin.position;
  const double dist = delta.norm();
  kin.velocity = dist > 0.0 ? delta * (wp.speed / dist) : Vec2{0.0, 0.0};
}
}  // namespace detail

/// Fresh state: uniform position (placement draws), then a first leg
/// (movement draws). Placement and movement may use separate streams.
inline WaypointState init_waypoint(context::KinematicState& kin, const MobilityConfig& cfg,
                                   Rng& placement, Rng& movement) {
  cfg.validate();
  kin.position = random_point(cfg, placement);
  kin.timestamp = 0.0;
  WaypointState wp;
  detail::retarget(wp, kin, cfg, movement);
  return wp;
}

/// Advances one peer by dt, crossing waypoint arrivals and pause expiries
/// within the interval. On a straight leg the position moves exactly
/// speed * dt toward the target.
inline void waypoint_step(WaypointState& wp, context::KinematicState& kin,
                          const MobilityConfig& cfg, double dt, Rng& rng) {
  double now = kin.timestamp;
  double remaining = dt;
  // Iteration cap guards the zero-pause, zero-distance corner; normal ticks
  // cross at most a handful of waypoint boundaries.
  for (int guard = 0; remaining > 0.0 && guard < 64; ++guard) {
    if (wp.paused) {
      const double wait = wp.pause_until - now;
      if (wait > remaining) {
        now += remaining;
        remaining = 0.0;
        break;
      }
      now += wait;
      remaining -= wait;
      detail::retarget(wp, kin, cfg, rng);
      continue;
    }
    const Vec2 delta = wp.target - kin.position;
    const double dist = delta.norm();
    const double travel = wp.speed * remaining;
    if (travel < dist) {
      kin.position = kin.position + delta * (travel / dist);
      now += remaining;
      remaining = 0.0;
      break;
    }
    // Arrival inside this interval: snap to the waypoint and start pausing.
    const double used = wp.speed > 0.0 ? dist / wp.speed : remaining;
    kin.position = wp.target;
    kin.velocity = {0.0, 0.0};
    now += used;
    remaining -= used;
    wp.paused = true;
    wp.pause_until = now + cfg.pause_s;
  }
  kin.timestamp = now;
}

}  // namespace caqrp::sim
