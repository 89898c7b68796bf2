#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caqrp/context.hpp"
#include "caqrp/core.hpp"
#include "caqrp/mcdm.hpp"
#include "caqrp/rng.hpp"
#include "caqrp/term_vector.hpp"
#include "caqrp/workload.hpp"

namespace caqrp::protocol {

enum class Strategy { caqrp, rbfs, gossip_lb };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::caqrp: return "caqrp";
    case Strategy::rbfs: return "rbfs";
    case Strategy::gossip_lb: return "gossip-lb";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "caqrp") return Strategy::caqrp;
  if (name == "rbfs") return Strategy::rbfs;
  if (name == "gossip-lb") return Strategy::gossip_lb;
  return std::nullopt;
}

struct ProtocolConfig {
  int ttl = 5;
  int fanout = 3;                 // forwarding degree for ranked and random selection
  double p_base = 1.0;            // gossip ceiling, scaled down by neighbor load
  double range_m = 250.0;
  double horizon_s = 3600.0;      // link stability prediction cap
  double beacon_period_s = 1.0;
  double cache_expiry_s = 3.0;    // neighbors silent this long fall out of the cache
  double theta = 0.7;
  std::size_t profile_capacity = context::kDefaultProfileCapacity;
  std::array<double, 4> weights = context::kDefaultCriterionWeights;

  void validate() const {
    if (ttl < 0) throw ValidationError("ttl must be nonnegative");
    if (fanout < 1) throw ValidationError("fanout must be at least 1");
    if (!(p_base >= 0.0 && p_base <= 1.0)) throw ValidationError("p_base must be in [0, 1]");
    if (!(range_m > 0.0)) throw ValidationError("range must be positive");
    if (!(horizon_s > 0.0)) throw ValidationError("horizon must be positive");
    if (!(beacon_period_s > 0.0)) throw ValidationError("beacon period must be positive");
    if (!(cache_expiry_s > 0.0)) throw ValidationError("cache expiry must be positive");
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must be in (0, 1]");
    if (profile_capacity == 0) throw ValidationError("profile capacity must be positive");
    double wsum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ValidationError("criterion weights must be nonnegative");
      wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ValidationError("criterion weights must sum to 1");
  }
};

/// Query in flight. `path` holds origin followed by every relay that has
/// transmitted it, most recent last; the receiver never appears in it.
/// `ttl` is the remaining hop budget including the hop being taken.
struct QueryMessage {
  QueryId id = 0;
  PeerId origin = kNoPeer;
  QueryVector query;
  int ttl = 0;
  std::vector<PeerId> path;
};

/// Answer traveling back along the recorded path. `route` lists the hops
/// still ahead after the current transmission; empty means the receiver is
/// the origin.
struct QueryHitMessage {
  QueryId id = 0;
  PeerId responder = kNoPeer;
  std::vector<DocId> docs;
  std::vector<PeerId> route;
};

/// Periodic one-hop state advertisement.
struct BeaconMessage {
  PeerId sender = kNoPeer;
  context::KinematicState kinematics;
  double energy_j = 0.0;
  int queue_occupancy = 0;
  int queue_capacity = 1;
};

struct OutQuery {
  PeerId dst = kNoPeer;
  QueryMessage msg;
};

struct OutHit {
  PeerId dst = kNoPeer;
  QueryHitMessage msg;
};

struct ProtocolActions {
  std::vector<OutQuery> forwards;
  std::optional<OutHit> hit;
};

/// Origin-side result of a hit reaching the issuer.
struct AnsweredQuery {
  QueryId id = 0;
  PeerId responder = kNoPeer;
  std::vector<DocId> docs;
};

struct HitActions {
  std::optional<OutHit> forward;
  std::optional<AnsweredQuery> answered;
};

/// Ranked selection: top `fanout` rows of the four-criteria ranking.
inline std::vector<PeerId> select_neighbors_caqrp(
    const QueryVector& query, std::span<const context::NeighborSnapshot> candidates,
    const context::PeerProfile& profile, const context::KinematicState& self,
    const ProtocolConfig& cfg) {
  if (candidates.empty()) return {};
  const auto x = context::build_decision_matrix(query, candidates, profile, self,
                                                cfg.range_m, cfg.horizon_s, cfg.weights);
  const auto ranked = mcdm::topsis_rank(x);
  const std::size_t k = std::min<std::size_t>(cfg.fanout, candidates.size());
  std::vector<PeerId> out;
  out.reserve(k);
  for (std::size_t pos = 0; pos < k; ++pos)
    out.push_back(ranked.alternatives[ranked.order[pos]]);
  return out;
}

/// Uniform selection of `fanout` distinct neighbors.
inline std::vector<PeerId> select_neighbors_rbfs(
    std::span<const context::NeighborSnapshot> candidates, int fanout, Rng& rng) {
  if (candidates.empty()) return {};
  const auto picks = rng.sample_indices(candidates.size(),
                                        static_cast<std::size_t>(fanout));
  std::vector<PeerId> out;
  out.reserve(picks.size());
  for (std::size_t i : picks) out.push_back(candidates[i].id);
  return out;
}

/// Independent coin per neighbor with acceptance p_base * (1 - load). One
/// draw is consumed per candidate whether or not it is selected.
inline std::vector<PeerId> select_neighbors_gossip_lb(
    std::span<const context::NeighborSnapshot> candidates, double p_base, Rng& rng) {
  std::vector<PeerId> out;
  for (const auto& c : candidates) {
    const double accept = p_base * (1.0 - context::load(c.queue));
    if (rng.next_double() < accept) out.push_back(c.id);
  }
  return out;
}

/// Protocol state of one peer: document store, duplicate suppression,
/// neighbor cache, answer profiles, and the in-flight query stash that
/// lets relays learn from returning hits.
class PeerNode {
 public:
  PeerNode(PeerId id, Strategy strategy, ProtocolConfig cfg)
      : id_(id), strategy_(strategy), cfg_(std::move(cfg)), profile_(cfg_.profile_capacity) {
    cfg_.validate();
  }

  PeerId id() const { return id_; }
  Strategy strategy() const { return strategy_; }
  const ProtocolConfig& config() const { return cfg_; }
  const context::PeerProfile& profile() const { return profile_; }

  void add_document(workload::Document doc) { docs_.push_back(std::move(doc)); }
  const std::vector<workload::Document>& documents() const { return docs_; }

  /// Doc ids in the local store matching the query at threshold theta.
  std::vector<DocId> local_match(const TermVector& query) const {
    std::vector<DocId> out;
    for (const auto& d : docs_)
      if (workload::relevance(d.terms, query, cfg_.theta)) out.push_back(d.id);
    return out;
  }

  void handle_beacon(const BeaconMessage& b, double now) {
    cache_[b.sender] = CacheEntry{b, now};
  }

  std::size_t cache_size() const { return cache_.size(); }
  bool has_seen(QueryId id) const { return seen_.contains(id); }

  /// Forwarding candidates as of `now`: cached neighbors that are fresh,
  /// predicted within range of `self`, and not excluded. Ascending id order.
  std::vector<context::NeighborSnapshot> eligible_neighbors(
      double now, const context::KinematicState& self,
      std::span<const PeerId> exclude) const {
    std::vector<context::NeighborSnapshot> out;
    for (const auto& [pid, entry] : cache_) {
      if (pid == id_) continue;
      if (now - entry.heard_at > cfg_.cache_expiry_s) continue;
      if (std::find(exclude.begin(), exclude.end(), pid) != exclude.end()) continue;
      const auto predicted = context::extrapolate(entry.beacon.kinematics, now);
      if (distance(predicted.position, self.position) > cfg_.range_m) continue;
      context::NeighborSnapshot snap;
      snap.id = pid;
      snap.kinematics = predicted;
      snap.energy = {entry.beacon.energy_j, entry.beacon.energy_j};
      snap.queue = {entry.beacon.queue_occupancy, entry.beacon.queue_capacity};
      out.push_back(std::move(snap));
    }
    return out;
  }

  /// Starts a query at this peer: local store is consulted first (results
  /// land in `local_docs`), then up to the strategy's choice of neighbors
  /// receives a copy with the full ttl budget.
  std::vector<OutQuery> initiate_query(const QueryVector& q, double now,
                                       const context::KinematicState& self, Rng& rng,
                                       std::vector<DocId>& local_docs) {
    seen_.insert(q.id);
    stash_[q.id] = q.terms;
    local_docs = local_match(q.terms);
    if (cfg_.ttl < 1) return {};
    const std::array<PeerId, 1> exclude = {id_};
    const auto candidates = eligible_neighbors(now, self, exclude);
    std::vector<OutQuery> out;
    for (PeerId dst : select(q, candidates, self, rng)) {
      OutQuery o;
      o.dst = dst;
      o.msg = QueryMessage{q.id, id_, q, cfg_.ttl, {id_}};
      out.push_back(std::move(o));
    }
    return out;
  }

  /// Receives a query copy from `from`. Duplicates are swallowed. A local
  /// match produces a hit routed back along the reversed path; remaining
  /// ttl (after this hop) keeps the query moving.
  ProtocolActions handle_query(const QueryMessage& m, double now,
                               const context::KinematicState& self, Rng& rng) {
    ProtocolActions actions;
    if (seen_.contains(m.id)) return actions;
    seen_.insert(m.id);
    stash_[m.id] = m.query.terms;

    const auto matches = local_match(m.query.terms);
    if (!matches.empty()) {
      std::vector<PeerId> route(m.path.rbegin(), m.path.rend());
      OutHit hit;
      hit.dst = route.front();
      route.erase(route.begin());
      hit.msg = QueryHitMessage{m.id, id_, matches, std::move(route)};
      actions.hit = std::move(hit);
    }

    const int ttl_left = m.ttl - 1;
    if (ttl_left >= 1) {
      std::vector<PeerId> exclude = m.path;
      exclude.push_back(id_);
      const auto candidates = eligible_neighbors(now, self, exclude);
      std::vector<PeerId> next = select(m.query, candidates, self, rng);
      std::vector<PeerId> path = m.path;
      path.push_back(id_);
      for (PeerId dst : next) {
        OutQuery o;
        o.dst = dst;
        o.msg = QueryMessage{m.id, m.origin, m.query, ttl_left, path};
        actions.forwards.push_back(std::move(o));
      }
    }
    return actions;
  }

  /// Receives a hit from `from`. An empty route means this peer issued the
  /// query and consumes the answer. Relays record the sender as a source
  /// of answers for the stashed query before passing the hit along.
  HitActions handle_hit(const QueryHitMessage& h, PeerId from) {
    HitActions actions;
    if (h.route.empty()) {
      actions.answered = AnsweredQuery{h.id, h.responder, h.docs};
      return actions;
    }
    if (auto it = stash_.find(h.id); it != stash_.end())
      profile_.record_answer(from, QueryVector{h.id, it->second});
    OutHit fwd;
    fwd.dst = h.route.front();
    fwd.msg = h;
    fwd.msg.route.erase(fwd.msg.route.begin());
    actions.forward = std::move(fwd);
    return actions;
  }

 private:
  std::vector<PeerId> select(const QueryVector& q,
                             std::span<const context::NeighborSnapshot> candidates,
                             const context::KinematicState& self, Rng& rng) const {
    switch (strategy_) {
      case Strategy::caqrp:
        return select_neighbors_caqrp(q, candidates, profile_, self, cfg_);
      case Strategy::rbfs:
        return select_neighbors_rbfs(candidates, cfg_.fanout, rng);
      case Strategy::gossip_lb:
        return select_neighbors_gossip_lb(candidates, cfg_.p_base, rng);
    }
    return {};
  }

  struct CacheEntry {
    BeaconMessage beacon;
    double heard_at = 0.0;
  };

  PeerId id_;
  Strategy strategy_;
  ProtocolConfig cfg_;
  std::vector<workload::Document> docs_;
  std::set<QueryId> seen_;
  std::map<QueryId, TermVector> stash_;
  std::map<PeerId, CacheEntry> cache_;
  context::PeerProfile profile_;
};

}  // namespace caqrp::protocol
