#pragma once

#include <string>
#include <vector>

#include "ore/corpus_io.hpp"

namespace ore {

enum class Metric { dot, cosine };

Metric parse_metric(const std::string& name);  // "dot" | "cosine"

// Embedding-backed scorer standing in for a dual encoder. Queries resolve
// against the query table when one is attached, otherwise against the doc
// table.
class DenseScorer {
 public:
  DenseScorer(const EmbeddingTable* docs, const EmbeddingTable* queries, Metric metric);

  double sim_qd(const std::string& query_id, const std::string& doc_id) const;
  double sim_dd(const std::string& a, const std::string& b) const;

  // Exact brute-force kNN, similarity desc with doc_id tie-break, source
  // excluded.
  std::vector<ScoredDoc> knn(const std::string& doc_id, int k) const;

  // First-stage dense retrieval over all docs.
  std::vector<ScoredDoc> top_docs(const std::string& query_id, size_t depth) const;

  bool has_doc(const std::string& doc_id) const { return docs_->has(doc_id); }
  bool has_query(const std::string& query_id) const;
  Metric metric() const { return metric_; }
  const EmbeddingTable& doc_table() const { return *docs_; }

 private:
  const std::vector<double>& query_vec(const std::string& query_id) const;
  double similarity(const std::vector<double>& a, const std::vector<double>& b) const;

  const EmbeddingTable* docs_;
  const EmbeddingTable* queries_;  // may be null
  Metric metric_;
};

// psi(q,d): the cheap second scorer added to phi for scored documents.
// A null scorer disables the feature and contributes 0.
double psi(const DenseScorer* scorer, const std::string& query_id, const std::string& doc_id);

}  // namespace ore
