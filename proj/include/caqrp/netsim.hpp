#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "caqrp/context.hpp"
#include "caqrp/core.hpp"
#include "caqrp/metrics.hpp"
#include "caqrp/mobility.hpp"
#include "caqrp/protocol.hpp"
#include "caqrp/rng.hpp"
#include "caqrp/workload.hpp"

namespace caqrp::sim {

using MicroJ = std::int64_t;

inline MicroJ to_microjoule(double joules) {
  return static_cast<MicroJ>(std::llround(joules * 1e6));
}

struct EnergyConfig {
  double e_tx_j = 0.05;
  double e_rx_j = 0.02;
  double initial_min_j = 50.0;
  double initial_max_j = 100.0;

  void validate() const {
    if (!(e_tx_j > 0.0) || !(e_rx_j > 0.0))
      throw ValidationError("per-message energy costs must be positive");
    if (!(initial_min_j > 0.0) || !(initial_max_j >= initial_min_j))
      throw ValidationError("initial energy range must satisfy 0 < min <= max");
  }
};

/// Integer-microjoule energy ledger. Draws initial charges uniformly from
/// the configured range. A peer is dead once its balance reaches zero or it
/// fails to afford a debit; failed debits leave the balance untouched so
/// total drain is exactly tx_count * e_tx + rx_count * e_rx.
class EnergyModel {
 public:
  EnergyModel(const EnergyConfig& cfg, int n_peers, Rng& rng)
      : tx_cost_(to_microjoule(cfg.e_tx_j)), rx_cost_(to_microjoule(cfg.e_rx_j)) {
    cfg.validate();
    balance_.reserve(n_peers);
    for (int i = 0; i < n_peers; ++i)
      balance_.push_back(to_microjoule(rng.uniform(cfg.initial_min_j, cfg.initial_max_j)));
    dead_.assign(n_peers, false);
    initial_ = balance_;
  }

  int size() const { return static_cast<int>(balance_.size()); }
  bool alive(PeerId p) const { return !dead_[p]; }
  MicroJ remaining_uj(PeerId p) const { return balance_[p]; }
  MicroJ initial_uj(PeerId p) const { return initial_[p]; }
  double remaining_j(PeerId p) const { return static_cast<double>(balance_[p]) * 1e-6; }
  MicroJ tx_cost_uj() const { return tx_cost_; }
  MicroJ rx_cost_uj() const { return rx_cost_; }

  MicroJ total_uj() const {
    MicroJ t = 0;
    for (MicroJ b : balance_) t += b;
    return t;
  }

  /// Clamped subtraction: balances never go negative, and a peer drained to
  /// zero is dead.
  void consume(PeerId p, MicroJ amount) {
    if (amount < 0) throw ValidationError("cannot consume negative energy");
    balance_[p] = balance_[p] > amount ? balance_[p] - amount : 0;
    if (balance_[p] == 0) dead_[p] = true;
  }

  /// All-or-nothing debit used for message accounting. An unaffordable
  /// charge marks the peer dead without taking anything.
  bool try_consume(PeerId p, MicroJ amount) {
    if (balance_[p] < amount) {
      dead_[p] = true;
      return false;
    }
    balance_[p] -= amount;
    if (balance_[p] == 0) dead_[p] = true;
    return true;
  }

 private:
  MicroJ tx_cost_;
  MicroJ rx_cost_;
  std::vector<MicroJ> balance_;
  std::vector<MicroJ> initial_;
  std::vector<bool> dead_;
};

struct QueueConfig {
  int capacity = 50;           // slots per peer
  double service_rate = 10.0;  // messages drained per second
  double hop_delay_s = 0.01;   // propagation and transmission time per hop

  void validate() const {
    if (capacity < 1) throw ValidationError("queue capacity must be at least 1");
    if (!(service_rate > 0.0)) throw ValidationError("service rate must be positive");
    if (!(hop_delay_s >= 0.0)) throw ValidationError("hop delay must be nonnegative");
  }
};

/// Per-peer tail-drop FIFO approximation: a message admitted behind N
/// waiting messages is delivered after hop_delay + N / service_rate.
class QueueModel {
 public:
  QueueModel(const QueueConfig& cfg, int n_peers) : cfg_(cfg), occupancy_(n_peers, 0) {
    cfg.validate();
  }

  int occupancy(PeerId p) const { return occupancy_[p]; }
  int capacity() const { return cfg_.capacity; }
  bool full(PeerId p) const { return occupancy_[p] >= cfg_.capacity; }

  /// Admits one message; returns the queue depth it waits behind.
  int enqueue(PeerId p) {
    const int before = occupancy_[p];
    ++occupancy_[p];
    return before;
  }

  void release(PeerId p) { --occupancy_[p]; }

  double delivery_delay(int depth_ahead) const {
    return cfg_.hop_delay_s + static_cast<double>(depth_ahead) / cfg_.service_rate;
  }

  context::QueueState state(PeerId p) const { return {occupancy_[p], cfg_.capacity}; }

 private:
  QueueConfig cfg_;
  std::vector<int> occupancy_;
};

/// Ground-truth node positions and the adjacency they induce.
class Topology {
 public:
  Topology(int n_peers, double range_m) : kin_(n_peers), range_(range_m) {
    if (!(range_m > 0.0)) throw ValidationError("radio range must be positive");
  }

  int size() const { return static_cast<int>(kin_.size()); }
  double range() const { return range_; }
  context::KinematicState& kin(PeerId p) { return kin_[p]; }
  const context::KinematicState& kin(PeerId p) const { return kin_[p]; }

  bool adjacent(PeerId a, PeerId b) const {
    return a != b && distance(kin_[a].position, kin_[b].position) <= range_;
  }

  std::vector<PeerId> neighbors(PeerId p) const {
    std::vector<PeerId> out;
    for (PeerId q = 0; q < size(); ++q)
      if (adjacent(p, q)) out.push_back(q);
    return out;
  }

 private:
  std::vector<context::KinematicState> kin_;
  double range_;
};

struct SimulationConfig {
  int n_peers = 50;
  double duration_s = 300.0;
  double mobility_tick_s = 0.1;
  std::uint64_t seed = 42;
  int n_queries = 200;
  double query_rate = 1.0;  // issues per second, fixed spacing
  bool record_trace = false;
  protocol::Strategy strategy = protocol::Strategy::caqrp;
  protocol::ProtocolConfig protocol;
  MobilityConfig mobility;
  EnergyConfig energy;
  QueueConfig queue;
  workload::WorkloadConfig workload;

  void validate() const {
    if (n_peers < 1) throw ValidationError("need at least one peer");
    if (!(duration_s > 0.0)) throw ValidationError("duration must be positive");
    if (!(mobility_tick_s > 0.0) || mobility_tick_s > duration_s)
      throw ValidationError("mobility tick must be positive and within the run");
    if (n_queries < 0) throw ValidationError("query count must be nonnegative");
    if (!(query_rate > 0.0)) throw ValidationError("query rate must be positive");
    protocol.validate();
    mobility.validate();
    energy.validate();
    queue.validate();
    workload.validate();
  }
};

struct EnergyAudit {
  MicroJ initial_total_uj = 0;
  MicroJ final_total_uj = 0;
  MicroJ tx_cost_uj = 0;
  MicroJ rx_cost_uj = 0;
  std::uint64_t tx_count = 0;  // completed transmissions
  std::uint64_t rx_count = 0;  // completed receptions

  MicroJ drained_uj() const { return initial_total_uj - final_total_uj; }
  MicroJ expected_uj() const {
    return static_cast<MicroJ>(tx_count) * tx_cost_uj +
           static_cast<MicroJ>(rx_count) * rx_cost_uj;
  }
  bool exact() const { return drained_uj() == expected_uj(); }
};

struct QueryOutcome {
  QueryId id = 0;
  PeerId issuer = kNoPeer;
  double issue_time = 0.0;
  bool answered = false;
  double delay_s = 0.0;
  std::size_t retrieved = 0;
  std::size_t ground_truth = 0;
};

struct RunResult {
  metrics::MetricsReport report;
  EnergyAudit audit;
  std::vector<QueryOutcome> outcomes;
  int deaths = 0;
  std::string trace;
};

/// One seeded protocol run over a mobile peer-to-peer network. Everything
/// observable is a pure function of the configuration: events are ordered
/// by (time, schedule sequence) and every random draw comes from a fixed
/// substream of the master seed (placement, movement, energy, corpus,
/// query workload, protocol coins), so runs that differ only in strategy
/// share their world.
class Simulation {
 public:
  explicit Simulation(SimulationConfig cfg)
      : cfg_(std::move(cfg)),
        mobility_rng_(Rng::for_substream(cfg_.seed, Substream::mobility)),
        queries_rng_(Rng::for_substream(cfg_.seed, Substream::queries)),
        protocol_rng_(Rng::for_substream(cfg_.seed, Substream::protocol)),
        topology_(cfg_.n_peers, cfg_.protocol.range_m),
        queues_(cfg_.queue, cfg_.n_peers),
        trace_enabled_(cfg_.record_trace) {
    cfg_.validate();
    Rng placement = Rng::for_substream(cfg_.seed, Substream::topology);
    Rng energy_rng = Rng::for_substream(cfg_.seed, Substream::energy);
    Rng corpus_rng = Rng::for_substream(cfg_.seed, Substream::corpus);

    energy_.emplace(cfg_.energy, cfg_.n_peers, energy_rng);

    waypoints_.reserve(cfg_.n_peers);
    nodes_.reserve(cfg_.n_peers);
    for (PeerId p = 0; p < cfg_.n_peers; ++p) {
      waypoints_.push_back(
          init_waypoint(topology_.kin(p), cfg_.mobility, placement, mobility_rng_));
      nodes_.emplace_back(p, cfg_.strategy, cfg_.protocol);
    }
    corpus_ = workload::generate_corpus(cfg_.workload, cfg_.n_peers, corpus_rng);
    for (const auto& doc : corpus_) nodes_[doc.owner].add_document(doc);
  }

  RunResult run() {
    schedule(0.0, BeaconRound{});
    schedule(cfg_.mobility_tick_s, MobilityTick{});
    for (int i = 0; i < cfg_.n_queries; ++i) {
      const double t = static_cast<double>(i + 1) / cfg_.query_rate;
      if (t > cfg_.duration_s) break;
      schedule(t, QueryIssue{i});
    }

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > cfg_.duration_s) break;
      events_.pop();
      now_ = ev.time;
      std::visit([this](const auto& payload) { dispatch(payload); }, ev.payload);
    }
    now_ = cfg_.duration_s;
    trace_line(now_, "end", kNoPeer, kNoPeer, 0, "-");
    return finish();
  }

 private:
  struct MobilityTick {};
  struct BeaconRound {};
  struct QueryIssue {
    int index = 0;
  };
  struct DeliverQuery {
    PeerId src = kNoPeer;
    PeerId dst = kNoPeer;
    protocol::QueryMessage msg;
  };
  struct DeliverHit {
    PeerId src = kNoPeer;
    PeerId dst = kNoPeer;
    protocol::QueryHitMessage msg;
  };
  struct DeliverBeacon {
    PeerId src = kNoPeer;
    PeerId dst = kNoPeer;
    protocol::BeaconMessage msg;
  };

  using Payload =
      std::variant<MobilityTick, BeaconRound, QueryIssue, DeliverQuery, DeliverHit, DeliverBeacon>;

  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    Payload payload;
  };

  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  struct QueryRecord {
    QueryId id = 0;
    PeerId issuer = kNoPeer;
    double issue_time = 0.0;
    bool answered = false;
    double first_delay = 0.0;
    std::set<DocId> retrieved;
    std::vector<DocId> ground_truth;
  };

  void schedule(double t, Payload payload) {
    events_.push(Event{t, next_seq_++, std::move(payload)});
  }

  void trace_line(double t, const char* kind, PeerId src, PeerId dst, QueryId qid,
                  const std::string& detail) {
    if (!trace_enabled_) return;
    char head[64];
    std::snprintf(head, sizeof(head), "%.6f %s ", t, kind);
    trace_ += head;
    trace_ += src == kNoPeer ? "-" : std::to_string(src);
    trace_ += ' ';
    trace_ += dst == kNoPeer ? "-" : std::to_string(dst);
    trace_ += ' ';
    trace_ += qid == 0 ? "-" : std::to_string(qid);
    trace_ += ' ';
    trace_ += detail.empty() ? "-" : detail;
    trace_ += '\n';
  }

  /// Debits `cost` from p, tracing the death if the peer drops out. True
  /// when the debit succeeded (the action is paid for).
  bool charge(PeerId p, MicroJ cost, std::uint64_t& counter, const char* cause) {
    const bool ok = energy_->try_consume(p, cost);
    if (ok) ++counter;
    if (!energy_->alive(p) && !death_traced_[p]) {
      death_traced_[p] = true;
      ++deaths_;
      trace_line(now_, "death", p, kNoPeer, 0, std::string("cause=") + cause);
    }
    return ok;
  }

  context::KinematicState self_now(PeerId p) const {
    return context::extrapolate(topology_.kin(p), now_);
  }

  void dispatch(const MobilityTick&) {
    for (PeerId p = 0; p < cfg_.n_peers; ++p)
      waypoint_step(waypoints_[p], topology_.kin(p), cfg_.mobility, cfg_.mobility_tick_s,
                    mobility_rng_);
    const double next = now_ + cfg_.mobility_tick_s;
    if (next <= cfg_.duration_s) schedule(next, MobilityTick{});
  }

  void dispatch(const BeaconRound&) {
    for (PeerId p = 0; p < cfg_.n_peers; ++p) {
      if (!energy_->alive(p)) continue;
      const auto neighbors = topology_.neighbors(p);
      if (!charge(p, energy_->tx_cost_uj(), tx_count_, "tx")) continue;
      acc_.count_messages();
      trace_line(now_, "bcast", p, kNoPeer, 0,
                 "neighbors=" + std::to_string(neighbors.size()));
      protocol::BeaconMessage b;
      b.sender = p;
      b.kinematics = self_now(p);
      b.energy_j = energy_->remaining_j(p);
      const auto qs = queues_.state(p);
      b.queue_occupancy = qs.occupancy;
      b.queue_capacity = qs.capacity;
      for (PeerId dst : neighbors)
        schedule(now_ + cfg_.queue.hop_delay_s, DeliverBeacon{p, dst, b});
    }
    const double next = now_ + cfg_.protocol.beacon_period_s;
    if (next <= cfg_.duration_s) schedule(next, BeaconRound{});
  }

  void dispatch(const DeliverBeacon& ev) {
    if (!energy_->alive(ev.dst)) return;
    if (!charge(ev.dst, energy_->rx_cost_uj(), rx_count_, "rx")) return;
    trace_line(now_, "brecv", ev.src, ev.dst, 0, "");
    nodes_[ev.dst].handle_beacon(ev.msg, now_);
  }

  void dispatch(const QueryIssue& ev) {
    // Issuer is uniform over peers still alive; with one survivor every
    // remaining query comes from it. Nobody alive means nobody can ask.
    std::vector<PeerId> alive;
    alive.reserve(static_cast<std::size_t>(cfg_.n_peers));
    for (PeerId p = 0; p < static_cast<PeerId>(cfg_.n_peers); ++p) {
      if (energy_->alive(p)) alive.push_back(p);
    }
    if (alive.empty()) return;
    const PeerId issuer =
        alive[queries_rng_.uniform_below(static_cast<std::uint64_t>(alive.size()))];
    const TermVector terms = workload::generate_query(cfg_.workload, queries_rng_);

    const QueryId qid = static_cast<QueryId>(ev.index) + 1;
    QueryRecord rec;
    rec.id = qid;
    rec.issuer = issuer;
    rec.issue_time = now_;
    rec.ground_truth = workload::relevant_docs(corpus_, terms, cfg_.workload.theta);
    acc_.count_issued();
    trace_line(now_, "issue", issuer, kNoPeer, qid,
               "gt=" + std::to_string(rec.ground_truth.size()));

    std::vector<DocId> local;
    const QueryVector q{qid, terms};
    const auto sends =
        nodes_[issuer].initiate_query(q, now_, self_now(issuer), protocol_rng_, local);
    if (!local.empty()) {
      rec.answered = true;
      rec.first_delay = 0.0;
      rec.retrieved.insert(local.begin(), local.end());
    }
    records_.emplace(qid, std::move(rec));
    for (const auto& out : sends) send_query(issuer, out);
  }

  void send_query(PeerId src, const protocol::OutQuery& out) {
    // A failed energy charge means nothing left the radio: no message, no
    // drop, just the sender's death (traced inside charge).
    if (!charge(src, energy_->tx_cost_uj(), tx_count_, "tx")) return;
    acc_.count_messages();
    trace_line(now_, "qsend", src, out.dst, out.msg.id, "ttl=" + std::to_string(out.msg.ttl));
    if (!admit(src, out.dst, out.msg.id, /*is_hit=*/false)) return;
    const int depth = queues_.enqueue(out.dst);
    schedule(now_ + queues_.delivery_delay(depth), DeliverQuery{src, out.dst, out.msg});
  }

  void send_hit(PeerId src, const protocol::OutHit& out) {
    if (!charge(src, energy_->tx_cost_uj(), tx_count_, "tx")) {
      acc_.count_hit_lost();  // the answer existed and will never arrive
      return;
    }
    acc_.count_messages();
    trace_line(now_, "hsend", src, out.dst, out.msg.id,
               "docs=" + std::to_string(out.msg.docs.size()));
    if (!admit(src, out.dst, out.msg.id, /*is_hit=*/true)) return;
    const int depth = queues_.enqueue(out.dst);
    schedule(now_ + queues_.delivery_delay(depth), DeliverHit{src, out.dst, out.msg});
  }

  /// Checks reachability and queue admission for a paid transmission.
  bool admit(PeerId src, PeerId dst, QueryId qid, bool is_hit) {
    const char* reason = nullptr;
    if (!topology_.adjacent(src, dst)) {
      reason = "out_of_range";
    } else if (!energy_->alive(dst)) {
      reason = "dead_dst";
    } else if (queues_.full(dst)) {
      reason = "queue_full";
    }
    if (reason == nullptr) return true;
    acc_.count_drop();
    if (is_hit) acc_.count_hit_lost();
    trace_line(now_, "drop", src, dst, qid, reason);
    return false;
  }

  void dispatch(const DeliverQuery& ev) {
    queues_.release(ev.dst);
    if (!energy_->alive(ev.dst)) {
      acc_.count_drop();
      trace_line(now_, "drop", ev.src, ev.dst, ev.msg.id, "dead_dst");
      return;
    }
    if (!charge(ev.dst, energy_->rx_cost_uj(), rx_count_, "rx")) {
      acc_.count_drop();
      trace_line(now_, "drop", ev.src, ev.dst, ev.msg.id, "rx_death");
      return;
    }
    trace_line(now_, "qrecv", ev.src, ev.dst, ev.msg.id, "ttl=" + std::to_string(ev.msg.ttl));
    const auto actions =
        nodes_[ev.dst].handle_query(ev.msg, now_, self_now(ev.dst), protocol_rng_);
    if (actions.hit.has_value()) send_hit(ev.dst, *actions.hit);
    for (const auto& fwd : actions.forwards) send_query(ev.dst, fwd);
  }

  void dispatch(const DeliverHit& ev) {
    queues_.release(ev.dst);
    if (!energy_->alive(ev.dst)) {
      acc_.count_drop();
      acc_.count_hit_lost();
      trace_line(now_, "drop", ev.src, ev.dst, ev.msg.id, "dead_dst");
      return;
    }
    if (!charge(ev.dst, energy_->rx_cost_uj(), rx_count_, "rx")) {
      acc_.count_drop();
      acc_.count_hit_lost();
      trace_line(now_, "drop", ev.src, ev.dst, ev.msg.id, "rx_death");
      return;
    }
    trace_line(now_, "hrecv", ev.src, ev.dst, ev.msg.id,
               "docs=" + std::to_string(ev.msg.docs.size()));
    const auto actions = nodes_[ev.dst].handle_hit(ev.msg, ev.src);
    if (actions.forward.has_value()) send_hit(ev.dst, *actions.forward);
    if (actions.answered.has_value()) {
      auto it = records_.find(actions.answered->id);
      if (it != records_.end()) {
        QueryRecord& rec = it->second;
        if (!rec.answered) {
          rec.answered = true;
          rec.first_delay = now_ - rec.issue_time;
        }
        rec.retrieved.insert(actions.answered->docs.begin(), actions.answered->docs.end());
      }
    }
  }

  RunResult finish() {
    RunResult result;
    for (const auto& [qid, rec] : records_) {
      if (rec.answered) {
        acc_.count_answered();
        acc_.record_delay(rec.first_delay);
      }
      const auto recall = metrics::per_query_recall(
          {rec.retrieved.begin(), rec.retrieved.end()}, rec.ground_truth);
      if (recall.has_value()) acc_.record_recall(*recall);
      QueryOutcome o;
      o.id = qid;
      o.issuer = rec.issuer;
      o.issue_time = rec.issue_time;
      o.answered = rec.answered;
      o.delay_s = rec.first_delay;
      o.retrieved = rec.retrieved.size();
      o.ground_truth = rec.ground_truth.size();
      result.outcomes.push_back(std::move(o));
    }
    result.report =
        acc_.finish(protocol::to_string(cfg_.strategy), cfg_.n_peers, cfg_.seed);
    result.audit.initial_total_uj = 0;
    for (PeerId p = 0; p < cfg_.n_peers; ++p)
      result.audit.initial_total_uj += energy_->initial_uj(p);
    result.audit.final_total_uj = energy_->total_uj();
    result.audit.tx_cost_uj = energy_->tx_cost_uj();
    result.audit.rx_cost_uj = energy_->rx_cost_uj();
    result.audit.tx_count = tx_count_;
    result.audit.rx_count = rx_count_;
    result.deaths = deaths_;
    result.trace = std::move(trace_);
    return result;
  }

  SimulationConfig cfg_;
  Rng mobility_rng_;
  Rng queries_rng_;
  Rng protocol_rng_;
  Topology topology_;
  QueueModel queues_;
  std::optional<EnergyModel> energy_;
  std::vector<WaypointState> waypoints_;
  std::vector<protocol::PeerNode> nodes_;
  std::vector<workload::Document> corpus_;
  std::priority_queue<Event, std::vector<Event>, EventOrder> events_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  metrics::MetricsAccumulator acc_;
  std::map<QueryId, QueryRecord> records_;
  std::map<PeerId, bool> death_traced_;  // defaults to false per peer

  std::uint64_t tx_count_ = 0;
  std::uint64_t rx_count_ = 0;
  int deaths_ = 0;
  bool trace_enabled_ = false;
  std::string trace_;
};

inline RunResult run(const SimulationConfig& cfg) { return Simulation(cfg).run(); }

}  // namespace caqrp::sim
