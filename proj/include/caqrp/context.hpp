#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "caqrp/core.hpp"
#include "caqrp/mcdm.hpp"
#include "caqrp/term_vector.hpp"

namespace caqrp::context {

/// Bounded per-neighbor answer history.
inline constexpr std::size_t kDefaultProfileCapacity = 100;

/// Relative speeds below this count as parallel motion: the link is treated
/// as lasting the full prediction horizon.
inline constexpr double kSpeedEpsilon = 1e-9;

/// Routing criterion weights (similarity, stability, energy, load).
inline constexpr std::array<double, 4> kDefaultCriterionWeights = {0.235, 0.55, 0.098, 0.117};

struct KinematicState {
  Vec2 position;   // m
  Vec2 velocity;   // m/s
  double timestamp = 0.0;  // s
};

/// Position advanced along the straight line to time t.
inline KinematicState extrapolate(const KinematicState& s, double t) {
  const double dt = t - s.timestamp;
  return {s.position + s.velocity * dt, s.velocity, t};
}

struct EnergyState {
  double remaining_j = 0.0;
  double initial_j = 0.0;
};

struct QueueState {
  int occupancy = 0;
  int capacity = 1;
};

/// Normalized queue occupancy in [0, 1].
inline double load(const QueueState& q) {
  if (q.capacity < 1) throw ValidationError("queue capacity must be at least 1");
  if (q.occupancy < 0 || q.occupancy > q.capacity)
    throw ValidationError("queue occupancy outside [0, capacity]");
  return static_cast<double>(q.occupancy) / static_cast<double>(q.capacity);
}

/// Predicted time until two nodes moving at constant velocity separate past
/// the radio range: the positive root of |dp + dv*t| = range. Near-zero
/// relative speed yields the horizon; results are clamped to the horizon.
/// The two states must describe the same instant and be within range.
inline double link_stability(const KinematicState& self, const KinematicState& neighbor,
                             double range_m, double horizon_s) {
  if (!(range_m > 0.0) || !is_finite(range_m)) throw ValidationError("range must be positive");
  if (!(horizon_s > 0.0) || !is_finite(horizon_s)) throw ValidationError("horizon must be positive");
  const Vec2 dp = neighbor.position - self.position;
  const Vec2 dv = neighbor.velocity - self.velocity;
  if (!is_finite(dp.x) || !is_finite(dp.y) || !is_finite(dv.x) || !is_finite(dv.y))
    throw ValidationError("kinematic state must be finite");
  const double c = dp.norm_sq() - range_m * range_m;
  if (c > 1e-9) throw ValidationError("nodes are already out of range");
  const double a = dv.norm_sq();
  if (a < kSpeedEpsilon * kSpeedEpsilon) return horizon_s;
  const double b = 2.0 * dp.dot(dv);
  // c <= 0 keeps the discriminant >= b^2, so the + root is the exit time.
  const double disc = b * b - 4.0 * a * std::min(c, 0.0);
  const double t = (-b + std::sqrt(disc)) / (2.0 * a);
  return std::min(t, horizon_s);
}

/// Answer history per neighbor: most recent first, deduplicated by query id,
/// capped at `capacity` entries per neighbor (oldest evicted).
class PeerProfile {
 public:
  explicit PeerProfile(std::size_t capacity = kDefaultProfileCapacity) : cap_(capacity) {
    if (cap_ == 0) throw ValidationError("profile capacity must be positive");
  }

  /// Records that `neighbor` produced an answer for `q`. A repeated query id
  /// refreshes recency (and payload) instead of adding a duplicate.
  void record_answer(PeerId neighbor, const QueryVector& q) {
    auto& list = history_[neighbor];
    for (auto it = list.begin(); it != list.end(); ++it) {
      if (it->id == q.id) {
        list.erase(it);
        break;
      }
    }
    list.push_front(q);
    if (list.size() > cap_) list.pop_back();
  }

  /// Highest cosine similarity between `query` and any answer recorded for
  /// `neighbor`; 0 when nothing is recorded.
  double psim(PeerId neighbor, const TermVector& query) const {
    auto it = history_.find(neighbor);
    if (it == history_.end()) return 0.0;
    double best = 0.0;
    for (const auto& entry : it->second) best = std::max(best, cosine(query, entry.terms));
    return best;
  }

  std::size_t entry_count(PeerId neighbor) const {
    auto it = history_.find(neighbor);
    return it == history_.end() ? 0 : it->second.size();
  }

  std::size_t capacity() const { return cap_; }

  /// Most-recent-first query ids for one neighbor. Test and debug hook.
  std::vector<QueryId> recorded_ids(PeerId neighbor) const {
    std::vector<QueryId> out;
    auto it = history_.find(neighbor);
    if (it == history_.end()) return out;
    for (const auto& entry : it->second) out.push_back(entry.id);
    return out;
  }

 private:
  std::map<PeerId, std::deque<QueryVector>> history_;
  std::size_t cap_;
};

/// Everything known about one candidate next hop at decision time.
struct NeighborSnapshot {
  PeerId id = kNoPeer;
  KinematicState kinematics;
  EnergyState energy;
  QueueState queue;
};

/// The four features feeding one decision-matrix row.
struct NeighborContext {
  PeerId id = kNoPeer;
  double psim = 0.0;
  double stability_s = 0.0;
  double energy_j = 0.0;
  double load = 0.0;
};

inline NeighborContext compute_features(const QueryVector& query,
                                        const NeighborSnapshot& nbr,
                                        const PeerProfile& profile,
                                        const KinematicState& self,
                                        double range_m, double horizon_s) {
  NeighborContext out;
  out.id = nbr.id;
  out.psim = profile.psim(nbr.id, query.terms);
  out.stability_s = link_stability(self, nbr.kinematics, range_m, horizon_s);
  out.energy_j = nbr.energy.remaining_j;
  out.load = load(nbr.queue);
  return out;
}

/// Assembles the ranking input for a forwarding decision. Row order follows
/// the neighbor order given. Similarity, stability and energy are benefits;
/// load is the single cost.
inline mcdm::BasicDecisionMatrix<PeerId> build_decision_matrix(
    const QueryVector& query, std::span<const NeighborSnapshot> neighbors,
    const PeerProfile& profile, const KinematicState& self, double range_m,
    double horizon_s, std::span<const double, 4> weights = kDefaultCriterionWeights) {
  mcdm::BasicDecisionMatrix<PeerId> x;
  x.criteria = {
      {"psim", mcdm::CriterionKind::benefit, weights[0]},
      {"stability", mcdm::CriterionKind::benefit, weights[1]},
      {"energy", mcdm::CriterionKind::benefit, weights[2]},
      {"load", mcdm::CriterionKind::cost, weights[3]},
  };
  x.values = mcdm::Matrix(neighbors.size(), 4);
  std::size_t i = 0;
  for (const auto& nbr : neighbors) {
    const NeighborContext f = compute_features(query, nbr, profile, self, range_m, horizon_s);
    x.alternatives.push_back(f.id);
    x.values(i, 0) = f.psim;
    x.values(i, 1) = f.stability_s;
    x.values(i, 2) = f.energy_j;
    x.values(i, 3) = f.load;
    ++i;
  }
  return x;
}

}  // namespace caqrp::context
