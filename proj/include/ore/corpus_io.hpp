#pragma once

#include <map>
#include <string>
#include <vector>

namespace ore {

struct Document {
  std::string doc_id;
  std::string text;
};

struct Query {
  std::string query_id;
  std::string text;
};

// A (doc_id, score) pair; the in-memory unit of every ranked list.
struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
};

// Sorts score desc, ties by ascending doc_id. The one ordering rule used
// everywhere a ranking is materialized.
void sort_ranked(std::vector<ScoredDoc>& docs);

struct Qrels {
  // query_id -> doc_id -> grade; absent pair means grade 0.
  std::map<std::string, std::map<std::string, int>> grades;
  int overwrite_warnings = 0;

  int grade(const std::string& query_id, const std::string& doc_id) const;
  const std::map<std::string, int>* for_query(const std::string& query_id) const;
};

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 0;
  double score = 0.0;
  std::string tag;
};

struct EmbeddingTable {
  int dim = 0;
  std::map<std::string, std::vector<double>> vectors;

  bool has(const std::string& id) const { return vectors.count(id) != 0; }
  const std::vector<double>& at(const std::string& id) const;  // LookupError
};

// corpus / queries: one record per line, `id<TAB>text`
std::vector<Document> load_corpus(const std::string& path);
void write_corpus(const std::vector<Document>& corpus, const std::string& path);
std::vector<Query> load_queries(const std::string& path);
void write_queries(const std::vector<Query>& queries, const std::string& path);

// qrels: TREC 4-column `qid 0 did grade`; later duplicates overwrite with a
// counted warning.
Qrels load_qrels(const std::string& path);
void write_qrels(const Qrels& qrels, const std::string& path);

// run: TREC 6-column `qid Q0 did rank score tag`. Within a query ranks must
// be 1..n without gaps, scores non-increasing, ties by ascending doc_id;
// violations raise ValidationError on both read and write.
std::vector<RunEntry> load_run(const std::string& path);
void write_run(const std::vector<RunEntry>& entries, const std::string& path);

// Builds validated run entries for one query from a sorted ranking.
std::vector<RunEntry> to_run_entries(const std::string& query_id,
                                     const std::vector<ScoredDoc>& ranking,
                                     const std::string& tag);

// embeddings: header `dim=<d>`, then `id<TAB>v1 v2 ... vd`
EmbeddingTable load_embeddings(const std::string& path);
void write_embeddings(const EmbeddingTable& table, const std::string& path);

}  // namespace ore
