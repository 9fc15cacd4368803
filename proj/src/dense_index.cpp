#include "ore/dense_index.hpp"

#include <algorithm>
#include <cmath>

#include "ore/errors.hpp"

namespace ore {

Metric parse_metric(const std::string& name) {
  if (name == "dot") return Metric::dot;
  if (name == "cosine") return Metric::cosine;
  throw ValidationError("unknown metric '" + name + "' (expected dot or cosine)");
}

DenseScorer::DenseScorer(const EmbeddingTable* docs, const EmbeddingTable* queries, Metric metric)
    : docs_(docs), queries_(queries), metric_(metric) {
  if (docs_ == nullptr) throw ValidationError("DenseScorer: null doc table");
}

bool DenseScorer::has_query(const std::string& query_id) const {
  return queries_ != nullptr ? queries_->has(query_id) : docs_->has(query_id);
}

const std::vector<double>& DenseScorer::query_vec(const std::string& query_id) const {
  return queries_ != nullptr ? queries_->at(query_id) : docs_->at(query_id);
}

double DenseScorer::similarity(const std::vector<double>& a, const std::vector<double>& b) const {
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  if (metric_ == Metric::dot) return dot;
  double na = 0.0, nb = 0.0;
  for (double v : a) na += v * v;
  for (double v : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) throw ValidationError("cosine similarity of a zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double DenseScorer::sim_qd(const std::string& query_id, const std::string& doc_id) const {
  return similarity(query_vec(query_id), docs_->at(doc_id));
}

double DenseScorer::sim_dd(const std::string& a, const std::string& b) const {
  return similarity(docs_->at(a), docs_->at(b));
}

std::vector<ScoredDoc> DenseScorer::knn(const std::string& doc_id, int k) const {
  if (k < 1) throw ValidationError("knn: k must be >= 1");
  const auto& src = docs_->at(doc_id);
  std::vector<ScoredDoc> all;
  all.reserve(docs_->vectors.size());
  for (const auto& [id, vec] : docs_->vectors) {
    if (id == doc_id) continue;
    all.push_back(ScoredDoc{id, similarity(src, vec)});
  }
  sort_ranked(all);
  if (all.size() > static_cast<size_t>(k)) all.resize(static_cast<size_t>(k));
  return all;
}

std::vector<ScoredDoc> DenseScorer::top_docs(const std::string& query_id, size_t depth) const {
  const auto& q = query_vec(query_id);
  std::vector<ScoredDoc> all;
  all.reserve(docs_->vectors.size());
  for (const auto& [id, vec] : docs_->vectors) all.push_back(ScoredDoc{id, similarity(q, vec)});
  sort_ranked(all);
  if (all.size() > depth) all.resize(depth);
  return all;
}

double psi(const DenseScorer* scorer, const std::string& query_id, const std::string& doc_id) {
  if (scorer == nullptr) return 0.0;
  return scorer->sim_qd(query_id, doc_id);
}

}  // namespace ore
