// Scores four candidate relays for one query and prints the ranked order.
// Shows the selection pipeline in isolation: profile history -> feature
// matrix -> weighted ranking, no simulator involved.

#include <cstdio>

#include "caqrp/context.hpp"
#include "caqrp/mcdm.hpp"

namespace context = caqrp::context;
namespace mcdm = caqrp::mcdm;
using caqrp::QueryVector;
using caqrp::TermVector;

int main() {
  // This peer sits at the origin; the query asks for terms 3 and 7.
  const context::KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const QueryVector query{1, TermVector{{{3, 1.0}, {7, 1.0}}}};

  // Peer 11 answered a near-identical query before; 12 answered something
  // unrelated; 13 and 14 are strangers.
  context::PeerProfile profile;
  profile.record_answer(11, QueryVector{90, TermVector{{{3, 1.0}, {7, 0.5}}}});
  profile.record_answer(12, QueryVector{91, TermVector{{{40, 1.0}}}});

  const std::vector<context::NeighborSnapshot> neighbors = {
      // id, (position, velocity, timestamp), (energy now, initial), (queued, capacity)
      {11, {{120.0, 0.0}, {1.0, 0.0}, 0.0}, {60.0, 100.0}, {10, 50}},
      {12, {{30.0, 40.0}, {0.0, 0.0}, 0.0}, {90.0, 100.0}, {2, 50}},
      {13, {{200.0, 0.0}, {2.5, 0.0}, 0.0}, {80.0, 100.0}, {0, 50}},
      {14, {{-50.0, 10.0}, {-0.5, 0.0}, 0.0}, {20.0, 100.0}, {45, 50}},
  };

  const auto x = context::build_decision_matrix(query, neighbors, profile, self,
                                                /*range_m=*/250.0, /*horizon_s=*/3600.0);
  const auto ranking = mcdm::topsis_rank(x);

  std::printf("peer  psim   stability  energy  load   closeness  rank\n");
  for (std::size_t i = 0; i < ranking.alternatives.size(); ++i) {
    std::printf("%4d  %5.3f  %9.1f  %6.2f  %5.3f  %9.3f  %4zu\n", ranking.alternatives[i],
                x.values(i, 0), x.values(i, 1), x.values(i, 2), x.values(i, 3),
                ranking.entries[i].closeness, ranking.entries[i].rank);
  }
  std::printf("forward to peer %d first\n", ranking.best());
  return 0;
}
