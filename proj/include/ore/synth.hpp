#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ore/affinity_graph.hpp"
#include "ore/corpus_io.hpp"

namespace ore {

// Planted-cluster benchmark generator. Each query owns one or more clusters
// of relevant documents; only a fraction of each cluster shares query terms
// (first-stage reachable). The rest share cluster vocabulary and embedding
// neighbourhoods only, so they are reachable through document affinity:
// RM3/embedding set similarity in hybrid mode, the chain-shaped ideal
// affinity graph in adaptive mode.
struct SynthSpec {
  int n_docs = 2000;
  int n_queries = 50;
  int clusters_per_query = 1;
  int cluster_size = 5;
  double visible_fraction = 0.2;
  int vocab_size = 5000;
  int embedding_dim = 16;
  uint64_t seed = 0;

  int query_terms = 4;
  int cluster_terms = 8;
  int doc_len = 30;
  int bg_centroids = 20;
  int graph_noise_edges = 3;
  double cluster_jitter = 0.15;
  double bg_jitter = 0.3;
  double query_own_weight = 0.2;  // rest goes to two distractor centroids
  double query_jitter = 0.03;
};

struct SynthData {
  std::vector<Document> corpus;
  std::vector<Query> queries;
  Qrels qrels;
  EmbeddingTable doc_embeddings;
  EmbeddingTable query_embeddings;
  AffinityGraph ideal_graph;
};

SynthData generate(const SynthSpec& spec);

// Writes corpus.tsv, queries.tsv, qrels.txt, docs.emb, queries.emb,
// graph_a.tsv into dir (created if missing).
void write_synth(const SynthData& data, const std::string& dir);

}  // namespace ore
