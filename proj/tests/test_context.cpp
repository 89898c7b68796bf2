#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "caqrp/context.hpp"
#include "caqrp/rng.hpp"

using namespace caqrp;
using context::EnergyState;
using context::KinematicState;
using context::NeighborSnapshot;
using context::PeerProfile;
using context::QueueState;

namespace {

QueryVector make_query(QueryId id, std::initializer_list<TermVector::Entry> terms) {
  return {id, TermVector(terms)};
}

}  // namespace

TEST_CASE("cosine similarity basics") {
  const TermVector a({{1, 1.0}, {2, 1.0}});
  const TermVector b({{2, 1.0}, {3, 1.0}});
  const TermVector zero;
  REQUIRE(cosine(a, a) == Catch::Approx(1.0));
  REQUIRE(cosine(a, b) == Catch::Approx(0.5));
  REQUIRE(cosine(a, b) == cosine(b, a));
  REQUIRE(cosine(a, zero) == 0.0);
  REQUIRE(cosine(zero, zero) == 0.0);

  const TermVector c({{5, 1.0}});
  const TermVector d({{6, 1.0}});
  REQUIRE(cosine(c, d) == 0.0);
}

TEST_CASE("term vectors reject bad weights and duplicate terms") {
  REQUIRE_THROWS_AS(TermVector({{1, -1.0}}), ValidationError);
  REQUIRE_THROWS_AS(TermVector({{1, std::nan("")}}), ValidationError);
  REQUIRE_THROWS_AS(TermVector({{1, 1.0}, {1, 2.0}}), ValidationError);
  // Zero weights are dropped rather than stored.
  const TermVector v({{1, 0.0}, {2, 3.0}});
  REQUIRE(v.size() == 1);
}

TEST_CASE("profile similarity is zero for unknown neighbors") {
  PeerProfile profile;
  REQUIRE(profile.psim(42, TermVector({{1, 1.0}})) == 0.0);
}

TEST_CASE("profile similarity takes the best recorded answer") {
  PeerProfile profile;
  profile.record_answer(7, make_query(1, {{1, 1.0}, {2, 1.0}}));
  profile.record_answer(7, make_query(2, {{3, 1.0}}));
  const TermVector probe({{1, 1.0}, {2, 1.0}});
  REQUIRE(profile.psim(7, probe) == Catch::Approx(1.0));
  // Other neighbors are unaffected.
  REQUIRE(profile.psim(8, probe) == 0.0);
}

TEST_CASE("recording the same query id refreshes recency instead of duplicating") {
  PeerProfile profile;
  profile.record_answer(1, make_query(10, {{1, 1.0}}));
  profile.record_answer(1, make_query(11, {{2, 1.0}}));
  profile.record_answer(1, make_query(10, {{3, 1.0}}));
  REQUIRE(profile.entry_count(1) == 2);
  const auto ids = profile.recorded_ids(1);
  REQUIRE(ids == std::vector<QueryId>{10, 11});
  // The refreshed entry carries the latest payload.
  REQUIRE(profile.psim(1, TermVector({{3, 1.0}})) == Catch::Approx(1.0));
  REQUIRE(profile.psim(1, TermVector({{1, 1.0}})) == 0.0);
}

TEST_CASE("profile history is bounded per neighbor") {
  PeerProfile profile(5);
  for (QueryId q = 0; q < 12; ++q)
    profile.record_answer(3, make_query(q, {{static_cast<TermId>(q), 1.0}}));
  REQUIRE(profile.entry_count(3) == 5);
  const auto ids = profile.recorded_ids(3);
  REQUIRE(ids == std::vector<QueryId>{11, 10, 9, 8, 7});
  // Evicted entries no longer contribute.
  REQUIRE(profile.psim(3, TermVector({{0, 1.0}})) == 0.0);
  REQUIRE(profile.psim(3, TermVector({{11, 1.0}})) == Catch::Approx(1.0));
  REQUIRE_THROWS_AS(PeerProfile(0), ValidationError);
}

TEST_CASE("default profile capacity holds one hundred answers") {
  PeerProfile profile;
  REQUIRE(profile.capacity() == 100);
  for (QueryId q = 0; q < 150; ++q)
    profile.record_answer(1, make_query(q, {{1, 1.0}}));
  REQUIRE(profile.entry_count(1) == 100);
}

TEST_CASE("queue load is the occupancy fraction") {
  REQUIRE(context::load({0, 50}) == 0.0);
  REQUIRE(context::load({50, 50}) == 1.0);
  REQUIRE(context::load({20, 50}) == Catch::Approx(0.4));
  REQUIRE_THROWS_AS(context::load({-1, 50}), ValidationError);
  REQUIRE_THROWS_AS(context::load({51, 50}), ValidationError);
  REQUIRE_THROWS_AS(context::load({0, 0}), ValidationError);
}

TEST_CASE("link stability for head-on separation") {
  // 50 m apart, drifting apart along x at 5 m/s, range 100 m: exits in
  // exactly (100 - 50) / 5 = 10 s.
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const KinematicState nbr{{50.0, 0.0}, {5.0, 0.0}, 0.0};
  REQUIRE(context::link_stability(self, nbr, 100.0, 3600.0) == 10.0);
}

TEST_CASE("link stability for perpendicular motion") {
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const KinematicState nbr{{60.0, 0.0}, {0.0, 10.0}, 0.0};
  // sqrt(100^2 - 60^2) = 80 m of lateral travel at 10 m/s.
  REQUIRE(context::link_stability(self, nbr, 100.0, 3600.0) == 8.0);
}

TEST_CASE("relatively stationary nodes hold the link for the whole horizon") {
  const KinematicState self{{0.0, 0.0}, {2.0, 1.0}, 0.0};
  const KinematicState nbr{{30.0, 40.0}, {2.0, 1.0}, 0.0};
  REQUIRE(context::link_stability(self, nbr, 100.0, 3600.0) == 3600.0);
}

TEST_CASE("link stability is clamped to the horizon") {
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const KinematicState nbr{{0.0, 0.0}, {0.001, 0.0}, 0.0};
  REQUIRE(context::link_stability(self, nbr, 100.0, 3600.0) == 3600.0);
}

TEST_CASE("link stability at the range boundary") {
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const KinematicState leaving{{100.0, 0.0}, {1.0, 0.0}, 0.0};
  REQUIRE(context::link_stability(self, leaving, 100.0, 3600.0) == 0.0);
  const KinematicState entering{{100.0, 0.0}, {-1.0, 0.0}, 0.0};
  REQUIRE(context::link_stability(self, entering, 100.0, 3600.0) == 200.0);
}

TEST_CASE("link stability rejects out-of-range pairs and bad parameters") {
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  const KinematicState far{{150.0, 0.0}, {0.0, 0.0}, 0.0};
  REQUIRE_THROWS_AS(context::link_stability(self, far, 100.0, 3600.0), ValidationError);
  const KinematicState near{{10.0, 0.0}, {0.0, 0.0}, 0.0};
  REQUIRE_THROWS_AS(context::link_stability(self, near, 0.0, 3600.0), ValidationError);
  REQUIRE_THROWS_AS(context::link_stability(self, near, 100.0, 0.0), ValidationError);
}

TEST_CASE("link stability properties on random in-range pairs") {
  Rng rng(77001);
  const double range = 120.0;
  const double horizon = 500.0;
  for (int iter = 0; iter < 2000; ++iter) {
    KinematicState a{{rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)},
                     {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
                     0.0};
    KinematicState b{{a.position.x + rng.uniform(-80.0, 80.0),
                      a.position.y + rng.uniform(-80.0, 80.0)},
                     {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
                     0.0};
    const double t = context::link_stability(a, b, range, horizon);
    REQUIRE(t >= 0.0);
    REQUIRE(t <= horizon);
    // Symmetric in the two endpoints.
    REQUIRE(context::link_stability(b, a, range, horizon) == Catch::Approx(t));
    // At the exit time the pair sits exactly on the range circle.
    const Vec2 dv = b.velocity - a.velocity;
    if (t < horizon && dv.norm() >= 1e-9) {
      const Vec2 gap = (b.position - a.position) + dv * t;
      REQUIRE(gap.norm() == Catch::Approx(range).margin(1e-6));
    }
    // A wider range never shortens the prediction.
    REQUIRE(context::link_stability(a, b, range * 1.5, horizon) >= t - 1e-9);
  }
}

TEST_CASE("extrapolation advances position linearly") {
  const KinematicState s{{10.0, 20.0}, {1.0, -2.0}, 5.0};
  const auto later = context::extrapolate(s, 7.5);
  REQUIRE(later.position.x == Catch::Approx(12.5));
  REQUIRE(later.position.y == Catch::Approx(15.0));
  REQUIRE(later.velocity == s.velocity);
  REQUIRE(later.timestamp == 7.5);
}

TEST_CASE("decision matrix rows follow neighbor order with the four criteria") {
  PeerProfile profile;
  const QueryVector query = make_query(99, {{1, 1.0}, {2, 1.0}});
  profile.record_answer(20, make_query(5, {{1, 1.0}, {2, 1.0}}));

  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  std::vector<NeighborSnapshot> nbrs = {
      {10, {{50.0, 0.0}, {5.0, 0.0}, 0.0}, {80.0, 100.0}, {10, 50}},
      {20, {{60.0, 0.0}, {0.0, 10.0}, 0.0}, {40.0, 100.0}, {45, 50}},
  };
  const auto x = context::build_decision_matrix(query, nbrs, profile, self, 100.0, 3600.0);
  REQUIRE(x.alternatives == std::vector<PeerId>{10, 20});
  REQUIRE(x.criteria.size() == 4);
  REQUIRE(x.criteria[0].name == "psim");
  REQUIRE(x.criteria[1].name == "stability");
  REQUIRE(x.criteria[2].name == "energy");
  REQUIRE(x.criteria[3].name == "load");
  REQUIRE(x.criteria[0].kind == mcdm::CriterionKind::benefit);
  REQUIRE(x.criteria[3].kind == mcdm::CriterionKind::cost);
  REQUIRE(x.criteria[0].weight == Catch::Approx(0.235));
  REQUIRE(x.criteria[1].weight == Catch::Approx(0.55));
  REQUIRE(x.criteria[2].weight == Catch::Approx(0.098));
  REQUIRE(x.criteria[3].weight == Catch::Approx(0.117));

  REQUIRE(x.values(0, 0) == 0.0);                       // no history for 10
  REQUIRE(x.values(1, 0) == Catch::Approx(1.0));        // exact match for 20
  REQUIRE(x.values(0, 1) == Catch::Approx(10.0));
  REQUIRE(x.values(1, 1) == Catch::Approx(8.0));
  REQUIRE(x.values(0, 2) == Catch::Approx(80.0));
  REQUIRE(x.values(1, 2) == Catch::Approx(40.0));
  REQUIRE(x.values(0, 3) == Catch::Approx(0.2));
  REQUIRE(x.values(1, 3) == Catch::Approx(0.9));
  REQUIRE_NOTHROW(x.validate());
}

TEST_CASE("a neighbor better on every criterion wins the ranking") {
  PeerProfile profile;
  profile.record_answer(1, make_query(5, {{1, 1.0}}));
  const QueryVector query = make_query(6, {{1, 1.0}});
  const KinematicState self{{0.0, 0.0}, {0.0, 0.0}, 0.0};
  std::vector<NeighborSnapshot> nbrs = {
      {2, {{90.0, 0.0}, {5.0, 0.0}, 0.0}, {20.0, 100.0}, {40, 50}},
      {1, {{10.0, 0.0}, {0.0, 0.0}, 0.0}, {95.0, 100.0}, {2, 50}},
  };
  const auto x = context::build_decision_matrix(query, nbrs, profile, self, 100.0, 3600.0);
  const auto result = mcdm::topsis_rank(x);
  REQUIRE(result.best() == 1);
}
