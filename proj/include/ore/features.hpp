#pragma once

#include <string>
#include <vector>

#include "ore/affinity_graph.hpp"
#include "ore/dense_index.hpp"
#include "ore/lexical_index.hpp"

namespace ore {

enum class Setup { hybrid, adaptive };

// hybrid: [bm25(q,d), sim(q,d), bm25(q',d), score-weighted set similarity]
// adaptive: [bm25(q,d), set affinity over graph edges, neighbour score mean]
inline constexpr int kHybridDim = 4;
inline constexpr int kAdaptiveDim = 3;
inline int feature_dim(Setup setup) { return setup == Setup::hybrid ? kHybridDim : kAdaptiveDim; }

// A single raw feature with its availability flag. Unavailable features are
// 0 with available=false and never touch the normalizer.
struct Feature {
  double value = 0.0;
  bool available = false;
};

struct RawFeatures {
  std::vector<double> values;
  std::vector<bool> mask;
};

struct FeatureVector {
  Setup setup = Setup::hybrid;
  std::vector<double> values;  // normalized to [0,1]; masked entries are 0
  std::vector<bool> mask;
};

// Top-s documents already scored by the expensive ranker, with their stored
// phi+psi values. Sorted score desc, ties by ascending doc_id.
class ScoredSet {
 public:
  ScoredSet() = default;
  ScoredSet(std::vector<ScoredDoc> scored, size_t s);

  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::vector<ScoredDoc>& entries() const { return entries_; }
  bool contains(const std::string& doc_id) const;
  // Stored score; LookupError if the doc is not in the set.
  double stored_score(const std::string& doc_id) const;

 private:
  std::vector<ScoredDoc> entries_;
};

// x1, x2: first-stage affinities of the query to one document.
std::pair<Feature, Feature> q2daff_hybrid(const InvertedIndex& index, const Bm25Params& params,
                                          const std::vector<std::string>& query_tokens,
                                          const DenseScorer* dense, const std::string& query_id,
                                          const std::string& doc_id);

// x3 and the score-weighted embedding set term:
//   mean over d' in S of stored_score(d') * sim(d, d').
std::pair<Feature, Feature> d2setaff_hybrid(const InvertedIndex& index, const Bm25Params& params,
                                            const ExpandedQuery* expanded,
                                            const DenseScorer* dense, const std::string& doc_id,
                                            const ScoredSet& scored_set);

// Mean edge weight from d to members of S in its neighbourhood; unavailable
// when the intersection is empty.
Feature d2setaff_adaptive(const AffinityGraph& graph, const std::string& doc_id,
                          const ScoredSet& scored_set);

// Mean stored score of S members in d's neighbourhood.
Feature neighbour_score_mean(const AffinityGraph& graph, const std::string& doc_id,
                             const ScoredSet& scored_set);

// Per-query running min-max normalization. observe() must be called for all
// candidates of a batch before assemble() so values inside one batch share
// the same scale.
class FeatureNormalizer {
 public:
  explicit FeatureNormalizer(int dim);

  void observe(const RawFeatures& raw);
  FeatureVector assemble(Setup setup, const RawFeatures& raw) const;

 private:
  std::vector<double> mins_, maxs_;
  std::vector<bool> seen_;
};

}  // namespace ore
