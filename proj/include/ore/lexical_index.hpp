#pragma once

#include <map>
#include <string>
#include <vector>

#include "ore/corpus_io.hpp"

namespace ore {

// Common IR-toolkit defaults; the excerpted description names BM25 without
// parameters, so these stay config-overridable.
struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

// lowercase, split on non-alphanumeric, no stemming
std::vector<std::string> tokenize(const std::string& text);

// RM3-expanded query: term -> weight, weights sum to 1.
struct ExpandedQuery {
  std::map<std::string, double> weights;
};

class InvertedIndex {
 public:
  static InvertedIndex build(const std::vector<Document>& corpus);
  static InvertedIndex load(const std::string& path);
  void save(const std::string& path) const;

  int n_docs() const { return static_cast<int>(doc_ids_.size()); }
  double avg_doc_len() const { return avg_doc_len_; }
  bool has_doc(const std::string& doc_id) const;
  long doc_length(const std::string& doc_id) const;
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  // term -> tf for one document
  const std::map<std::string, int>& term_vector(const std::string& doc_id) const;

  // Okapi BM25 of a token-bag query against one document. Repeated query
  // tokens contribute once per occurrence.
  double bm25_qd(const std::vector<std::string>& query_tokens, const std::string& doc_id,
                 const Bm25Params& params = {}) const;

  // BM25 of the target against the source's terms as a tf-weighted query.
  double bm25_dd(const std::string& source_id, const std::string& target_id,
                 const Bm25Params& params = {}) const;

  // Weighted-query BM25: sum over terms of weight * idf * tf-part.
  double bm25_weighted(const std::map<std::string, double>& weighted_terms,
                       const std::string& doc_id, const Bm25Params& params = {}) const;

  double bm25_expanded(const ExpandedQuery& expanded, const std::string& doc_id,
                       const Bm25Params& params = {}) const;

  // RM3: interpolate the original query MLE with a relevance model built
  // from the feedback documents (uniform doc weights), truncated to the
  // fb_terms strongest terms. orig_weight is the interpolation toward the
  // original query.
  ExpandedQuery rm3_expand(const std::vector<std::string>& query_tokens,
                           const std::vector<std::string>& feedback_docs, int fb_terms,
                           double orig_weight) const;

  // First-stage retrieval: all docs containing at least one query term,
  // sorted score desc with doc_id tie-break, truncated to depth.
  std::vector<ScoredDoc> top_docs(const std::vector<std::string>& query_tokens, size_t depth,
                                  const Bm25Params& params = {}) const;

 private:
  struct Posting {
    int doc = 0;
    int tf = 0;
  };

  int doc_index(const std::string& doc_id) const;  // LookupError if unknown
  double idf(const std::string& term) const;
  double tf_part(int tf, int doc_idx, const Bm25Params& params) const;

  std::vector<std::string> doc_ids_;
  std::map<std::string, int> doc_index_;
  std::vector<long> doc_lengths_;
  std::vector<std::map<std::string, int>> term_vectors_;
  std::map<std::string, std::vector<Posting>> postings_;
  double avg_doc_len_ = 0.0;
};

}  // namespace ore
