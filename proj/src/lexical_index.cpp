#include "ore/lexical_index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "ore/errors.hpp"

namespace ore {

namespace {
constexpr char kMagic[] = "OREIDX1\n";
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

InvertedIndex InvertedIndex::build(const std::vector<Document>& corpus) {
  if (corpus.empty()) throw ValidationError("build_index: empty corpus");
  InvertedIndex idx;
  long total_len = 0;
  for (const auto& doc : corpus) {
    if (idx.doc_index_.count(doc.doc_id))
      throw ValidationError("build_index: duplicate doc_id '" + doc.doc_id + "'");
    int d = static_cast<int>(idx.doc_ids_.size());
    idx.doc_index_[doc.doc_id] = d;
    idx.doc_ids_.push_back(doc.doc_id);
    auto tokens = tokenize(doc.text);
    std::map<std::string, int> tv;
    for (const auto& t : tokens) ++tv[t];
    idx.doc_lengths_.push_back(static_cast<long>(tokens.size()));
    total_len += static_cast<long>(tokens.size());
    for (const auto& [term, tf] : tv) idx.postings_[term].push_back(Posting{d, tf});
    idx.term_vectors_.push_back(std::move(tv));
  }
  idx.avg_doc_len_ = static_cast<double>(total_len) / static_cast<double>(corpus.size());
  return idx;
}

bool InvertedIndex::has_doc(const std::string& doc_id) const {
  return doc_index_.count(doc_id) != 0;
}

int InvertedIndex::doc_index(const std::string& doc_id) const {
  auto it = doc_index_.find(doc_id);
  if (it == doc_index_.end()) throw LookupError("index: unknown doc_id '" + doc_id + "'");
  return it->second;
}

long InvertedIndex::doc_length(const std::string& doc_id) const {
  return doc_lengths_[doc_index(doc_id)];
}

const std::map<std::string, int>& InvertedIndex::term_vector(const std::string& doc_id) const {
  return term_vectors_[doc_index(doc_id)];
}

double InvertedIndex::idf(const std::string& term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0.0;
  double df = static_cast<double>(it->second.size());
  double n = static_cast<double>(doc_ids_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double InvertedIndex::tf_part(int tf, int doc_idx, const Bm25Params& params) const {
  double dl = static_cast<double>(doc_lengths_[doc_idx]);
  double norm = params.k1 * (1.0 - params.b + params.b * dl / avg_doc_len_);
  return static_cast<double>(tf) * (params.k1 + 1.0) / (static_cast<double>(tf) + norm);
}

double InvertedIndex::bm25_weighted(const std::map<std::string, double>& weighted_terms,
                                    const std::string& doc_id, const Bm25Params& params) const {
  int d = doc_index(doc_id);
  const auto& tv = term_vectors_[d];
  double score = 0.0;
  for (const auto& [term, weight] : weighted_terms) {
    auto it = tv.find(term);
    if (it == tv.end()) continue;
    score += weight * idf(term) * tf_part(it->second, d, params);
  }
  return score;
}

double InvertedIndex::bm25_qd(const std::vector<std::string>& query_tokens,
                              const std::string& doc_id, const Bm25Params& params) const {
  std::map<std::string, double> weights;
  for (const auto& t : query_tokens) weights[t] += 1.0;
  return bm25_weighted(weights, doc_id, params);
}

double InvertedIndex::bm25_dd(const std::string& source_id, const std::string& target_id,
                              const Bm25Params& params) const {
  const auto& tv = term_vectors_[doc_index(source_id)];
  std::map<std::string, double> weights;
  for (const auto& [term, tf] : tv) weights[term] = static_cast<double>(tf);
  return bm25_weighted(weights, target_id, params);
}

double InvertedIndex::bm25_expanded(const ExpandedQuery& expanded, const std::string& doc_id,
                                    const Bm25Params& params) const {
  return bm25_weighted(expanded.weights, doc_id, params);
}

ExpandedQuery InvertedIndex::rm3_expand(const std::vector<std::string>& query_tokens,
                                        const std::vector<std::string>& feedback_docs,
                                        int fb_terms, double orig_weight) const {
  if (feedback_docs.empty()) throw ValidationError("rm3_expand: empty feedback set");
  if (orig_weight < 0.0 || orig_weight > 1.0)
    throw ValidationError("rm3_expand: orig_weight outside [0,1]");
  if (query_tokens.empty()) throw ValidationError("rm3_expand: empty query");

  // Relevance model: uniform over feedback docs, MLE within each.
  std::map<std::string, double> rm;
  double doc_weight = 1.0 / static_cast<double>(feedback_docs.size());
  for (const auto& did : feedback_docs) {
    const auto& tv = term_vectors_[doc_index(did)];
    double len = static_cast<double>(doc_lengths_[doc_index(did)]);
    if (len == 0) continue;
    for (const auto& [term, tf] : tv) rm[term] += doc_weight * static_cast<double>(tf) / len;
  }

  // Keep the fb_terms strongest terms, ties by ascending term; renormalize.
  std::vector<std::pair<std::string, double>> ranked(rm.begin(), rm.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(ranked.size()) > fb_terms) ranked.resize(fb_terms);
  double mass = 0.0;
  for (const auto& [term, w] : ranked) mass += w;

  std::map<std::string, double> qmle;
  for (const auto& t : query_tokens) qmle[t] += 1.0 / static_cast<double>(query_tokens.size());

  ExpandedQuery out;
  for (const auto& [term, p] : qmle) out.weights[term] = orig_weight * p;
  if (orig_weight < 1.0 && mass > 0.0)
    for (const auto& [term, w] : ranked)
      out.weights[term] += (1.0 - orig_weight) * w / mass;
  return out;
}

std::vector<ScoredDoc> InvertedIndex::top_docs(const std::vector<std::string>& query_tokens,
                                               size_t depth, const Bm25Params& params) const {
  std::map<std::string, double> weights;
  for (const auto& t : query_tokens) weights[t] += 1.0;

  std::vector<double> scores(doc_ids_.size(), 0.0);
  std::vector<char> touched(doc_ids_.size(), 0);
  for (const auto& [term, weight] : weights) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    double term_idf = idf(term);
    for (const auto& p : it->second) {
      scores[p.doc] += weight * term_idf * tf_part(p.tf, p.doc, params);
      touched[p.doc] = 1;
    }
  }
  std::vector<ScoredDoc> out;
  for (size_t d = 0; d < doc_ids_.size(); ++d)
    if (touched[d]) out.push_back(ScoredDoc{doc_ids_[d], scores[d]});
  sort_ranked(out);
  if (out.size() > depth) out.resize(depth);
  return out;
}

namespace {

void put_u64(std::ofstream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_d(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_str(std::ofstream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
uint64_t get_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double get_d(std::ifstream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::string get_str(std::ifstream& in) {
  uint64_t n = get_u64(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

}  // namespace

void InvertedIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open index for writing: " + path);
  out.write(kMagic, sizeof(kMagic) - 1);
  put_u64(out, doc_ids_.size());
  for (size_t d = 0; d < doc_ids_.size(); ++d) {
    put_str(out, doc_ids_[d]);
    put_u64(out, static_cast<uint64_t>(doc_lengths_[d]));
    put_u64(out, term_vectors_[d].size());
    for (const auto& [term, tf] : term_vectors_[d]) {
      put_str(out, term);
      put_u64(out, static_cast<uint64_t>(tf));
    }
  }
  put_d(out, avg_doc_len_);
  if (!out) throw IoError("failed writing index: " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index: " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, sizeof(magic)) != std::string(kMagic, sizeof(magic)))
    throw ParseError("index file has wrong magic header: " + path);
  InvertedIndex idx;
  uint64_t n = get_u64(in);
  for (uint64_t d = 0; d < n; ++d) {
    std::string id = get_str(in);
    long len = static_cast<long>(get_u64(in));
    uint64_t terms = get_u64(in);
    std::map<std::string, int> tv;
    for (uint64_t t = 0; t < terms; ++t) {
      std::string term = get_str(in);
      int tf = static_cast<int>(get_u64(in));
      tv[term] = tf;
      idx.postings_[term].push_back(Posting{static_cast<int>(d), tf});
    }
    idx.doc_index_[id] = static_cast<int>(d);
    idx.doc_ids_.push_back(std::move(id));
    idx.doc_lengths_.push_back(len);
    idx.term_vectors_.push_back(std::move(tv));
  }
  idx.avg_doc_len_ = get_d(in);
  if (!in) throw ParseError("truncated index file: " + path);
  return idx;
}

}  // namespace ore
