#include "ore/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ore/errors.hpp"

namespace ore {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

// Shortest representation that round-trips; locale-independent.
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& what, size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, const std::string& what, size_t line_no) {
  long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

void sort_ranked(std::vector<ScoredDoc>& docs) {
  std::sort(docs.begin(), docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
}

int Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
  auto q = grades.find(query_id);
  if (q == grades.end()) return 0;
  auto d = q->second.find(doc_id);
  return d == q->second.end() ? 0 : d->second;
}

const std::map<std::string, int>* Qrels::for_query(const std::string& query_id) const {
  auto q = grades.find(query_id);
  return q == grades.end() ? nullptr : &q->second;
}

const std::vector<double>& EmbeddingTable::at(const std::string& id) const {
  auto it = vectors.find(id);
  if (it == vectors.end()) throw LookupError("no embedding for id '" + id + "'");
  return it->second;
}

namespace {

// Shared by corpus and query loading: `id<TAB>text` records.
template <typename Record>
std::vector<Record> load_id_text(const std::string& path, const char* kind) {
  auto in = open_in(path);
  std::vector<Record> out;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(std::string(kind) + " line " + std::to_string(line_no) + ": expected id<TAB>text");
    std::string id = line.substr(0, tab);
    std::string text = line.substr(tab + 1);
    if (id.empty())
      throw ParseError(std::string(kind) + " line " + std::to_string(line_no) + ": empty id");
    if (text.empty())
      throw ParseError(std::string(kind) + " line " + std::to_string(line_no) + ": empty text for '" + id + "'");
    if (!seen.insert(id).second)
      throw ValidationError(std::string(kind) + ": duplicate id '" + id + "'");
    out.push_back(Record{std::move(id), std::move(text)});
  }
  return out;
}

}  // namespace

std::vector<Document> load_corpus(const std::string& path) {
  return load_id_text<Document>(path, "corpus");
}

void write_corpus(const std::vector<Document>& corpus, const std::string& path) {
  auto out = open_out(path);
  for (const auto& d : corpus) out << d.doc_id << '\t' << d.text << '\n';
}

std::vector<Query> load_queries(const std::string& path) {
  return load_id_text<Query>(path, "queries");
}

void write_queries(const std::vector<Query>& queries, const std::string& path) {
  auto out = open_out(path);
  for (const auto& q : queries) out << q.query_id << '\t' << q.text << '\n';
}

Qrels load_qrels(const std::string& path) {
  auto in = open_in(path);
  Qrels qrels;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (toks.size() != 4)
      throw ParseError("qrels line " + std::to_string(line_no) + ": expected 4 columns");
    long grade = parse_long(toks[3], "grade", line_no);
    if (grade < 0 || grade > 3)
      throw ValidationError("qrels line " + std::to_string(line_no) + ": grade out of range: " + toks[3]);
    auto& per_query = qrels.grades[toks[0]];
    auto [it, inserted] = per_query.try_emplace(toks[2], static_cast<int>(grade));
    if (!inserted) {
      it->second = static_cast<int>(grade);  // last wins
      ++qrels.overwrite_warnings;
    }
  }
  return qrels;
}

void write_qrels(const Qrels& qrels, const std::string& path) {
  auto out = open_out(path);
  for (const auto& [qid, docs] : qrels.grades)
    for (const auto& [did, grade] : docs)
      out << qid << " 0 " << did << ' ' << grade << '\n';
}

namespace {

void validate_run(const std::vector<RunEntry>& entries) {
  // Per query, in file order: ranks 1..n, scores non-increasing, score ties
  // broken by ascending doc_id. Queries must be contiguous blocks.
  std::set<std::string> closed;
  const RunEntry* prev = nullptr;
  for (const auto& e : entries) {
    if (prev == nullptr || prev->query_id != e.query_id) {
      if (prev != nullptr) closed.insert(prev->query_id);
      if (closed.count(e.query_id))
        throw ValidationError("run: entries for query '" + e.query_id + "' are not contiguous");
      if (e.rank != 1)
        throw ValidationError("run: query '" + e.query_id + "' starts at rank " + std::to_string(e.rank));
    } else {
      if (e.rank != prev->rank + 1)
        throw ValidationError("run: query '" + e.query_id + "' rank gap at rank " + std::to_string(e.rank));
      if (e.score > prev->score)
        throw ValidationError("run: query '" + e.query_id + "' score inversion at rank " + std::to_string(e.rank));
      if (e.score == prev->score && e.doc_id < prev->doc_id)
        throw ValidationError("run: query '" + e.query_id + "' tie order violation at rank " + std::to_string(e.rank));
    }
    prev = &e;
  }
}

}  // namespace

std::vector<RunEntry> load_run(const std::string& path) {
  auto in = open_in(path);
  std::vector<RunEntry> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (toks.size() != 6)
      throw ParseError("run line " + std::to_string(line_no) + ": expected 6 columns");
    RunEntry e;
    e.query_id = toks[0];
    e.doc_id = toks[2];
    e.rank = static_cast<int>(parse_long(toks[3], "rank", line_no));
    e.score = parse_double(toks[4], "score", line_no);
    e.tag = toks[5];
    entries.push_back(std::move(e));
  }
  validate_run(entries);
  return entries;
}

void write_run(const std::vector<RunEntry>& entries, const std::string& path) {
  validate_run(entries);
  auto out = open_out(path);
  for (const auto& e : entries)
    out << e.query_id << " Q0 " << e.doc_id << ' ' << e.rank << ' '
        << fmt_double(e.score) << ' ' << e.tag << '\n';
}

std::vector<RunEntry> to_run_entries(const std::string& query_id,
                                     const std::vector<ScoredDoc>& ranking,
                                     const std::string& tag) {
  std::vector<RunEntry> out;
  out.reserve(ranking.size());
  int rank = 1;
  for (const auto& d : ranking)
    out.push_back(RunEntry{query_id, d.doc_id, rank++, d.score, tag});
  return out;
}

EmbeddingTable load_embeddings(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0)
    throw ParseError("embeddings: missing `dim=<d>` header");
  EmbeddingTable table;
  table.dim = static_cast<int>(parse_long(line.substr(4), "dim", 1));
  if (table.dim <= 0) throw ValidationError("embeddings: dim must be positive");
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("embeddings line " + std::to_string(line_no) + ": expected id<TAB>values");
    std::string id = line.substr(0, tab);
    std::vector<double> vec;
    vec.reserve(table.dim);
    for (const auto& tok : split_ws(line.substr(tab + 1)))
      vec.push_back(parse_double(tok, "embedding value", line_no));
    if (static_cast<int>(vec.size()) != table.dim)
      throw ValidationError("embeddings: row '" + id + "' has " + std::to_string(vec.size()) +
                            " values, expected " + std::to_string(table.dim));
    for (double v : vec)
      if (!std::isfinite(v))
        throw ValidationError("embeddings: row '" + id + "' has non-finite value");
    if (!table.vectors.emplace(std::move(id), std::move(vec)).second)
      throw ValidationError("embeddings: duplicate id at line " + std::to_string(line_no));
  }
  return table;
}

void write_embeddings(const EmbeddingTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "dim=" << table.dim << '\n';
  for (const auto& [id, vec] : table.vectors) {
    out << id << '\t';
    for (size_t i = 0; i < vec.size(); ++i) {
      if (i) out << ' ';
      out << fmt_double(vec[i]);
    }
    out << '\n';
  }
}

}  // namespace ore
