#include "ore/affinity_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ore/errors.hpp"

namespace ore {

namespace {

const std::vector<GraphEdge> kNoEdges;

void sort_edges(std::vector<GraphEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.doc_id < b.doc_id;
  });
}

template <typename ScoreFn>
AffinityGraph build_top_k(GraphKind kind, const std::vector<std::string>& doc_ids, int k,
                          ScoreFn&& score) {
  if (k < 1) throw ValidationError("build_graph: k must be >= 1");
  AffinityGraph graph(kind, k);
  for (const auto& src : doc_ids) {
    std::vector<GraphEdge> edges;
    edges.reserve(doc_ids.size());
    for (const auto& dst : doc_ids) {
      if (dst == src) continue;
      edges.push_back(GraphEdge{dst, score(src, dst)});
    }
    sort_edges(edges);
    if (edges.size() > static_cast<size_t>(k)) edges.resize(static_cast<size_t>(k));
    for (const auto& e : edges) graph.add_edge(src, e.doc_id, e.weight);
  }
  graph.finalize();
  return graph;
}

}  // namespace

AffinityGraph AffinityGraph::build_lexical(const InvertedIndex& index,
                                           const std::vector<std::string>& doc_ids, int k,
                                           const Bm25Params& params) {
  return build_top_k(GraphKind::lexical, doc_ids, k, [&](const std::string& a, const std::string& b) {
    return index.bm25_dd(a, b, params);
  });
}

AffinityGraph AffinityGraph::build_semantic(const DenseScorer& scorer,
                                            const std::vector<std::string>& doc_ids, int k) {
  for (const auto& id : doc_ids)
    if (!scorer.has_doc(id))
      throw ValidationError("build_graph: no embedding for doc '" + id + "'");
  return build_top_k(GraphKind::semantic, doc_ids, k, [&](const std::string& a, const std::string& b) {
    return scorer.sim_dd(a, b);
  });
}

void AffinityGraph::add_edge(const std::string& from, const std::string& to, double weight) {
  if (from == to) throw ValidationError("graph: self-edge on '" + from + "'");
  if (!std::isfinite(weight))
    throw ValidationError("graph: non-finite edge weight on '" + from + "'");
  adjacency_[from].push_back(GraphEdge{to, weight});
}

void AffinityGraph::finalize() {
  size_t max_degree = 0;
  for (auto& [src, edges] : adjacency_) {
    sort_edges(edges);
    for (size_t i = 1; i < edges.size(); ++i)
      if (edges[i].doc_id == edges[i - 1].doc_id)
        throw ValidationError("graph: duplicate edge " + src + " -> " + edges[i].doc_id);
    max_degree = std::max(max_degree, edges.size());
  }
  if (k_ == 0) k_ = static_cast<int>(max_degree);
  if (max_degree > static_cast<size_t>(k_))
    throw ValidationError("graph: adjacency exceeds degree k=" + std::to_string(k_));
}

const std::vector<GraphEdge>& AffinityGraph::neighbours(const std::string& doc_id) const {
  auto it = adjacency_.find(doc_id);
  return it == adjacency_.end() ? kNoEdges : it->second;
}

double AffinityGraph::edge_weight(const std::string& from, const std::string& to,
                                  bool* found) const {
  for (const auto& e : neighbours(from)) {
    if (e.doc_id == to) {
      if (found) *found = true;
      return e.weight;
    }
  }
  if (found) *found = false;
  return 0.0;
}

bool AffinityGraph::empty_edges() const {
  for (const auto& [src, edges] : adjacency_)
    if (!edges.empty()) return false;
  return true;
}

AffinityGraph AffinityGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph: " + path);
  AffinityGraph graph;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("graph line " + std::to_string(line_no) + ": expected src<TAB>dst<TAB>weight");
    std::string src = line.substr(0, t1);
    std::string dst = line.substr(t1 + 1, t2 - t1 - 1);
    std::string wtok = line.substr(t2 + 1);
    double w = 0.0;
    auto res = std::from_chars(wtok.data(), wtok.data() + wtok.size(), w);
    if (res.ec != std::errc() || res.ptr != wtok.data() + wtok.size())
      throw ParseError("graph line " + std::to_string(line_no) + ": bad weight '" + wtok + "'");
    if (src == dst)
      throw ValidationError("graph line " + std::to_string(line_no) + ": self-edge on '" + src + "'");
    if (!std::isfinite(w))
      throw ValidationError("graph line " + std::to_string(line_no) + ": non-finite weight");
    graph.add_edge(src, dst, w);
  }
  graph.finalize();
  return graph;
}

void AffinityGraph::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open graph for writing: " + path);
  for (const auto& [src, edges] : adjacency_) {
    for (const auto& e : edges) {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), e.weight);
      out << src << '\t' << e.doc_id << '\t' << std::string(buf, res.ptr) << '\n';
    }
  }
}

}  // namespace ore
