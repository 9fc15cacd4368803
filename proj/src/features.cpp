#include "ore/features.hpp"

#include <algorithm>
#include <cmath>

#include "ore/errors.hpp"

namespace ore {

ScoredSet::ScoredSet(std::vector<ScoredDoc> scored, size_t s) {
  sort_ranked(scored);
  if (scored.size() > s) scored.resize(s);
  entries_ = std::move(scored);
}

bool ScoredSet::contains(const std::string& doc_id) const {
  for (const auto& e : entries_)
    if (e.doc_id == doc_id) return true;
  return false;
}

double ScoredSet::stored_score(const std::string& doc_id) const {
  for (const auto& e : entries_)
    if (e.doc_id == doc_id) return e.score;
  throw LookupError("scored set: '" + doc_id + "' not present");
}

std::pair<Feature, Feature> q2daff_hybrid(const InvertedIndex& index, const Bm25Params& params,
                                          const std::vector<std::string>& query_tokens,
                                          const DenseScorer* dense, const std::string& query_id,
                                          const std::string& doc_id) {
  Feature x1, x2;
  if (index.has_doc(doc_id)) {
    x1.value = index.bm25_qd(query_tokens, doc_id, params);
    x1.available = true;
  }
  if (dense != nullptr && dense->has_doc(doc_id) && dense->has_query(query_id)) {
    x2.value = dense->sim_qd(query_id, doc_id);
    x2.available = true;
  }
  return {x1, x2};
}

std::pair<Feature, Feature> d2setaff_hybrid(const InvertedIndex& index, const Bm25Params& params,
                                            const ExpandedQuery* expanded,
                                            const DenseScorer* dense, const std::string& doc_id,
                                            const ScoredSet& scored_set) {
  Feature x3, set_term;
  if (expanded != nullptr && index.has_doc(doc_id)) {
    x3.value = index.bm25_expanded(*expanded, doc_id, params);
    x3.available = true;
  }
  if (!scored_set.empty() && dense != nullptr && dense->has_doc(doc_id)) {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& e : scored_set.entries()) {
      if (!dense->has_doc(e.doc_id)) continue;
      sum += e.score * dense->sim_dd(doc_id, e.doc_id);
      ++n;
    }
    if (n > 0) {
      set_term.value = sum / static_cast<double>(scored_set.size());
      set_term.available = true;
    }
  }
  return {x3, set_term};
}

Feature d2setaff_adaptive(const AffinityGraph& graph, const std::string& doc_id,
                          const ScoredSet& scored_set) {
  Feature f;
  double sum = 0.0;
  size_t n = 0;
  for (const auto& edge : graph.neighbours(doc_id)) {
    if (!scored_set.contains(edge.doc_id)) continue;
    sum += edge.weight;
    ++n;
  }
  if (n > 0) {
    f.value = sum / static_cast<double>(n);
    f.available = true;
  }
  return f;
}

Feature neighbour_score_mean(const AffinityGraph& graph, const std::string& doc_id,
                             const ScoredSet& scored_set) {
  Feature f;
  double sum = 0.0;
  size_t n = 0;
  for (const auto& edge : graph.neighbours(doc_id)) {
    if (!scored_set.contains(edge.doc_id)) continue;
    sum += scored_set.stored_score(edge.doc_id);
    ++n;
  }
  if (n > 0) {
    f.value = sum / static_cast<double>(n);
    f.available = true;
  }
  return f;
}

FeatureNormalizer::FeatureNormalizer(int dim)
    : mins_(dim, 0.0), maxs_(dim, 0.0), seen_(dim, false) {
  if (dim < 1) throw ValidationError("normalizer: dim must be >= 1");
}

void FeatureNormalizer::observe(const RawFeatures& raw) {
  if (raw.values.size() != mins_.size() || raw.mask.size() != mins_.size())
    throw ValidationError("normalizer: feature dim mismatch");
  for (size_t i = 0; i < raw.values.size(); ++i) {
    if (!raw.mask[i]) continue;
    if (!std::isfinite(raw.values[i]))
      throw ValidationError("normalizer: non-finite feature value");
    if (!seen_[i]) {
      mins_[i] = maxs_[i] = raw.values[i];
      seen_[i] = true;
    } else {
      mins_[i] = std::min(mins_[i], raw.values[i]);
      maxs_[i] = std::max(maxs_[i], raw.values[i]);
    }
  }
}

FeatureVector FeatureNormalizer::assemble(Setup setup, const RawFeatures& raw) const {
  if (static_cast<int>(raw.values.size()) != feature_dim(setup) ||
      raw.values.size() != mins_.size())
    throw ValidationError("normalizer: feature dim mismatch");
  FeatureVector out;
  out.setup = setup;
  out.values.resize(raw.values.size(), 0.0);
  out.mask = raw.mask;
  for (size_t i = 0; i < raw.values.size(); ++i) {
    if (!raw.mask[i]) continue;
    double range = maxs_[i] - mins_[i];
    // min==max carries no signal and normalizes to 0
    out.values[i] = range > 0.0 ? (raw.values[i] - mins_[i]) / range : 0.0;
  }
  return out;
}

}  // namespace ore
