#pragma once

#include <map>
#include <string>
#include <vector>

#include "ore/dense_index.hpp"
#include "ore/lexical_index.hpp"

namespace ore {

enum class GraphKind { lexical, semantic, laff };

struct GraphEdge {
  std::string doc_id;
  double weight = 0.0;
};

// Directed top-k affinity graph. Adjacency lists are sorted weight desc,
// ties by ascending doc_id; no self-edges.
class AffinityGraph {
 public:
  AffinityGraph() = default;
  AffinityGraph(GraphKind kind, int k) : kind_(kind), k_(k) {}

  static AffinityGraph build_lexical(const InvertedIndex& index,
                                     const std::vector<std::string>& doc_ids, int k,
                                     const Bm25Params& params = {});
  static AffinityGraph build_semantic(const DenseScorer& scorer,
                                      const std::vector<std::string>& doc_ids, int k);

  // Edge-list text format: `src<TAB>dst<TAB>weight`, one edge per line.
  static AffinityGraph load(const std::string& path);
  void save(const std::string& path) const;

  // Total: unknown ids have no neighbors.
  const std::vector<GraphEdge>& neighbours(const std::string& doc_id) const;

  // Direct edge weight d -> d'; 0 if absent. `found` reports existence.
  double edge_weight(const std::string& from, const std::string& to, bool* found = nullptr) const;

  void add_edge(const std::string& from, const std::string& to, double weight);
  void finalize();  // sort adjacency, enforce invariants

  bool empty_edges() const;
  size_t n_nodes() const { return adjacency_.size(); }
  int k() const { return k_; }
  GraphKind kind() const { return kind_; }
  const std::map<std::string, std::vector<GraphEdge>>& adjacency() const { return adjacency_; }

 private:
  GraphKind kind_ = GraphKind::laff;
  int k_ = 0;
  std::map<std::string, std::vector<GraphEdge>> adjacency_;
};

}  // namespace ore
