#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ore/affinity_graph.hpp"
#include "ore/dense_index.hpp"
#include "ore/estimator.hpp"
#include "ore/features.hpp"
#include "ore/lexical_index.hpp"
#include "ore/rankers.hpp"

namespace ore {

struct ScheduleConfig {
  int c = 100;   // total scoring budget per query
  int b = 16;    // batch size
  int cb = 7;    // ranker-call budget in batches
  int s = 10;    // size of the scored reference set S
  int u = 0;     // shortlist sizes; 0 means 2*b
  int v = 0;
  int first_stage_depth = 1000;
  int fb_docs = 3;
  int fb_terms = 10;
  double rm3_orig_weight = 0.5;
  Bm25Params bm25;
  double lambda = 1.0;
  uint64_t seed = 0;
  bool random_alpha_first_batch = false;
  double per_call_latency_ms = 51.0;
  // When set, after the run the ranker is probed outside the budget to
  // report |EstRel - actual| on pool documents (evaluation-side diagnostic;
  // the ledger never sees these calls).
  bool probe_estimation_error = false;
};

struct BatchDiagnostics {
  int batch_index = 0;
  int calls_used = 0;
  std::vector<double> alpha;   // after folding the batch
  double batch_mae = 0.0;      // |EstRel at selection - stored score| over the batch
  int pool_size = 0;
  int n_candidates = 0;
};

struct QueryRunResult {
  std::string query_id;
  std::vector<ScoredDoc> ranking;  // final list, length min(c, |pool|)
  std::vector<std::string> scored_order;
  std::map<std::string, double> stored_scores;  // phi+psi per scored doc
  int calls_used = 0;
  int batches_used = 0;
  double latency_ms = 0.0;
  int pool_size = 0;
  bool pool_exhausted = false;
  std::vector<BatchDiagnostics> batches;
  std::vector<double> final_alpha;
  double probe_mae_unscored = std::numeric_limits<double>::quiet_NaN();
  double probe_mae_pool = std::numeric_limits<double>::quiet_NaN();
};

// Static merged-pool mode: the candidate pool is the union of both
// first-stage lists at full depth and never grows.
QueryRunResult run_hybrid(const InvertedIndex& index, const DenseScorer& dense,
                          const DenseScorer* psi_scorer, const Ranker& ranker,
                          const Query& query, const ScheduleConfig& cfg);

// Graph-expanding mode: the pool starts from the lexical first stage and
// grows with graph neighbours of every scored document; per batch the
// estimator scores the union of the Q2DAff and D2SetAff shortlists.
QueryRunResult run_adaptive(const InvertedIndex& index, const AffinityGraph& graph,
                            const DenseScorer* psi_scorer, const Ranker& ranker,
                            const Query& query, const ScheduleConfig& cfg);

// Top-n by (key desc, doc_id asc) from (doc_id, key) pairs; scored docs must
// already be excluded by the caller.
std::vector<std::string> select_batch(const std::vector<std::pair<std::string, double>>& keyed,
                                      int n);

// Scored block sorted by stored score, then unscored fill sorted by EstRel.
// Fill scores are rewritten onto a strictly decreasing tail below the scored
// block so run files keep scores non-increasing; ordering is what matters.
std::vector<ScoredDoc> finalize_ranking(const std::map<std::string, double>& stored_scores,
                                        const std::vector<std::pair<std::string, double>>& unscored_estrel,
                                        size_t pool_size, int c);

}  // namespace ore
