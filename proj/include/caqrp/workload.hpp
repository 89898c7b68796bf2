#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "caqrp/core.hpp"
#include "caqrp/rng.hpp"
#include "caqrp/term_vector.hpp"

namespace caqrp::workload {

struct Document {
  DocId id = 0;
  PeerId owner = kNoPeer;
  TermVector terms;
};

/// Synthetic corpus and query model: the vocabulary is split into disjoint
/// per-topic term pools, topic popularity is Zipf-distributed, and documents
/// and queries are binary-weighted term sets drawn from one topic's pool.
struct WorkloadConfig {
  int vocabulary = 64;
  int topics = 8;
  int docs_per_peer = 20;
  int terms_per_doc = 4;
  int terms_per_query = 3;
  double zipf_s = 0.8;      // topic popularity skew
  double theta = 0.7;       // relevance threshold on cosine similarity

  int pool_size() const { return vocabulary / topics; }

  void validate() const {
    if (topics < 1) throw ValidationError("topics must be at least 1");
    if (vocabulary < topics) throw ValidationError("vocabulary smaller than topic count");
    if (vocabulary % topics != 0)
      throw ValidationError("vocabulary must divide evenly into topic pools");
    if (docs_per_peer < 1) throw ValidationError("docs_per_peer must be at least 1");
    if (terms_per_doc < 1 || terms_per_doc > pool_size())
      throw ValidationError("terms_per_doc must fit in one topic pool");
    if (terms_per_query < 1 || terms_per_query > pool_size())
      throw ValidationError("terms_per_query must fit in one topic pool");
    if (!(zipf_s >= 0.0) || !is_finite(zipf_s)) throw ValidationError("zipf_s must be nonnegative");
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must be in (0, 1]");
  }
};

/// First term id of topic k's pool; the pool is the next pool_size() ids.
inline TermId topic_pool_start(const WorkloadConfig& cfg, int topic) {
  return static_cast<TermId>(topic * cfg.pool_size());
}

/// Draws topics with P(k) proportional to 1/(k+1)^s via a cumulative table.
class ZipfSampler {
 public:
  ZipfSampler(int n, double s) {
    if (n < 1) throw ValidationError("sampler needs at least one category");
    cumulative_.resize(n);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      total += 1.0 / std::pow(static_cast<double>(k + 1), s);
      cumulative_[k] = total;
    }
    for (auto& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
  }

  int draw(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(it - cumulative_.begin());
  }

  double probability(int k) const {
    return cumulative_[k] - (k == 0 ? 0.0 : cumulative_[k - 1]);
  }

 private:
  std::vector<double> cumulative_;
};

/// Binary-weighted term set: `count` distinct terms from topic `topic`.
inline TermVector draw_terms(const WorkloadConfig& cfg, int topic, int count, Rng& rng) {
  const TermId base = topic_pool_start(cfg, topic);
  const auto picks = rng.sample_indices(static_cast<std::size_t>(cfg.pool_size()),
                                        static_cast<std::size_t>(count));
  std::vector<TermVector::Entry> entries;
  entries.reserve(picks.size());
  for (std::size_t p : picks) entries.push_back({base + static_cast<TermId>(p), 1.0});
  return TermVector(std::move(entries));
}

/// docs_per_peer documents for each of n_peers peers, ids sequential in
/// owner order. Deterministic given the rng state.
inline std::vector<Document> generate_corpus(const WorkloadConfig& cfg, int n_peers, Rng& rng) {
  cfg.validate();
  if (n_peers < 1) throw ValidationError("corpus needs at least one peer");
  const ZipfSampler zipf(cfg.topics, cfg.zipf_s);
  std::vector<Document> docs;
  docs.reserve(static_cast<std::size_t>(n_peers) * cfg.docs_per_peer);
  DocId next = 0;
  for (PeerId p = 0; p < n_peers; ++p) {
    for (int d = 0; d < cfg.docs_per_peer; ++d) {
      Document doc;
      doc.id = next++;
      doc.owner = p;
      doc.terms = draw_terms(cfg, zipf.draw(rng), cfg.terms_per_doc, rng);
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

/// Query term set drawn the same way as documents, with its own length.
inline TermVector generate_query(const WorkloadConfig& cfg, Rng& rng) {
  cfg.validate();
  const ZipfSampler zipf(cfg.topics, cfg.zipf_s);
  return draw_terms(cfg, zipf.draw(rng), cfg.terms_per_query, rng);
}

/// A document answers a query when their cosine similarity reaches theta.
inline bool relevance(const TermVector& doc, const TermVector& query, double theta) {
  return cosine(doc, query) >= theta;
}

/// Brute-force ground truth: ids of every relevant document, ascending.
inline std::vector<DocId> relevant_docs(const std::vector<Document>& corpus,
                                        const TermVector& query, double theta) {
  std::vector<DocId> out;
  for (const auto& doc : corpus)
    if (relevance(doc.terms, query, theta)) out.push_back(doc.id);
  return out;
}

}  // namespace caqrp::workload
