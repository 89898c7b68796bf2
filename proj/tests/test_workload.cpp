#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "caqrp/rng.hpp"
#include "caqrp/workload.hpp"

using namespace caqrp;
using workload::Document;
using workload::WorkloadConfig;
using workload::ZipfSampler;

TEST_CASE("workload config validation") {
  WorkloadConfig cfg;
  REQUIRE_NOTHROW(cfg.validate());
  REQUIRE(cfg.pool_size() == 8);

  auto bad = cfg;
  bad.vocabulary = 63;  // not divisible by 8 topics
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.terms_per_doc = 9;  // exceeds the pool
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.theta = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.topics = 0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("corpus has the right shape and stays inside topic pools") {
  WorkloadConfig cfg;
  Rng rng = Rng::for_substream(42, Substream::corpus);
  const auto docs = workload::generate_corpus(cfg, 10, rng);
  REQUIRE(docs.size() == 200);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    REQUIRE(d.id == i);
    REQUIRE(d.owner == static_cast<PeerId>(i / cfg.docs_per_peer));
    REQUIRE(d.terms.size() == 4);
    int pool = -1;
    for (const auto& [term, w] : d.terms.entries()) {
      REQUIRE(w == 1.0);
      REQUIRE(term < static_cast<TermId>(cfg.vocabulary));
      const int p = static_cast<int>(term) / cfg.pool_size();
      if (pool < 0) pool = p;
      REQUIRE(p == pool);  // every term of a document shares one topic
    }
  }
}

TEST_CASE("corpus generation is deterministic per seed") {
  WorkloadConfig cfg;
  Rng a = Rng::for_substream(7, Substream::corpus);
  Rng b = Rng::for_substream(7, Substream::corpus);
  Rng c = Rng::for_substream(8, Substream::corpus);
  const auto docs_a = workload::generate_corpus(cfg, 20, a);
  const auto docs_b = workload::generate_corpus(cfg, 20, b);
  const auto docs_c = workload::generate_corpus(cfg, 20, c);
  REQUIRE(docs_a.size() == docs_b.size());
  bool identical = true;
  bool differs = false;
  for (std::size_t i = 0; i < docs_a.size(); ++i) {
    identical &= docs_a[i].terms == docs_b[i].terms;
    differs |= !(docs_a[i].terms == docs_c[i].terms);
  }
  REQUIRE(identical);
  REQUIRE(differs);
}

TEST_CASE("zipf sampler matches its stated distribution") {
  const double s = 0.8;
  ZipfSampler zipf(8, s);
  // Adjacent-rank probability ratio is (k+1)^s / k^s.
  REQUIRE(zipf.probability(0) / zipf.probability(1) == Catch::Approx(std::pow(2.0, s)));
  double total = 0.0;
  for (int k = 0; k < 8; ++k) total += zipf.probability(k);
  REQUIRE(total == Catch::Approx(1.0));

  Rng rng(123);
  std::vector<int> counts(8, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[zipf.draw(rng)];
  for (int k = 0; k < 8; ++k) {
    const double freq = static_cast<double>(counts[k]) / draws;
    REQUIRE(freq == Catch::Approx(zipf.probability(k)).margin(0.01));
  }
}

TEST_CASE("zipf with zero skew is uniform") {
  ZipfSampler zipf(5, 0.0);
  for (int k = 0; k < 5; ++k) REQUIRE(zipf.probability(k) == Catch::Approx(0.2));
}

TEST_CASE("queries draw from a single topic pool with binary weights") {
  WorkloadConfig cfg;
  Rng rng = Rng::for_substream(3, Substream::queries);
  for (int i = 0; i < 50; ++i) {
    const TermVector q = workload::generate_query(cfg, rng);
    REQUIRE(q.size() == 3);
    std::set<int> pools;
    for (const auto& [term, w] : q.entries()) {
      REQUIRE(w == 1.0);
      pools.insert(static_cast<int>(term) / cfg.pool_size());
    }
    REQUIRE(pools.size() == 1);
  }
}

TEST_CASE("relevance threshold separates subset matches from partial overlap") {
  const double theta = 0.7;
  const TermVector doc({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}});
  const TermVector contained({{0, 1.0}, {1, 1.0}, {2, 1.0}});
  const TermVector partial({{0, 1.0}, {1, 1.0}, {6, 1.0}});
  // 3 shared terms: cos = 3/sqrt(12) ~ 0.866. 2 shared: ~0.577.
  REQUIRE(workload::relevance(doc, contained, theta));
  REQUIRE_FALSE(workload::relevance(doc, partial, theta));
  REQUIRE_FALSE(workload::relevance(doc, TermVector{}, theta));
}

TEST_CASE("ground truth lists relevant document ids in ascending order") {
  std::vector<Document> corpus;
  for (DocId i = 0; i < 4; ++i) {
    Document d;
    d.id = i;
    d.owner = static_cast<PeerId>(i);
    corpus.push_back(d);
  }
  corpus[0].terms = TermVector({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}});
  corpus[1].terms = TermVector({{8, 1.0}, {9, 1.0}, {10, 1.0}, {11, 1.0}});
  corpus[2].terms = TermVector({{0, 1.0}, {1, 1.0}, {2, 1.0}, {7, 1.0}});
  corpus[3].terms = TermVector({{0, 1.0}, {4, 1.0}, {5, 1.0}, {6, 1.0}});
  const TermVector query({{0, 1.0}, {1, 1.0}, {2, 1.0}});
  const auto hits = workload::relevant_docs(corpus, query, 0.7);
  REQUIRE(hits == std::vector<DocId>{0, 2});
}

TEST_CASE("default workload keeps queries answerable") {
  WorkloadConfig cfg;
  Rng corpus_rng = Rng::for_substream(11, Substream::corpus);
  Rng query_rng = Rng::for_substream(11, Substream::queries);
  const auto corpus = workload::generate_corpus(cfg, 50, corpus_rng);
  int answerable = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    const TermVector q = workload::generate_query(cfg, query_rng);
    if (!workload::relevant_docs(corpus, q, cfg.theta).empty()) ++answerable;
  }
  // With 1000 documents even the rarest topic has relevant material almost
  // always; far more than 90% of queries must have nonempty ground truth.
  REQUIRE(answerable >= total * 9 / 10);
}
