#pragma once

#include <string>
#include <vector>

#include "ore/affinity_graph.hpp"
#include "ore/dense_index.hpp"
#include "ore/rankers.hpp"
#include "ore/scheduler.hpp"

namespace ore {

// Reciprocal rank fusion: score(d) = sum over lists of 1/(k + rank(d)).
// Cormack, Clarke and Buettcher, SIGIR 2009.
std::vector<ScoredDoc> rrf_fuse(const std::vector<std::vector<ScoredDoc>>& lists, int k = 60);

// Convex combination of per-list min-max normalized scores; documents
// absent from one list contribute 0 there.
std::vector<ScoredDoc> cc_fuse(const std::vector<ScoredDoc>& list_a,
                               const std::vector<ScoredDoc>& list_b, double lambda);

// Scores the top-c of the first-stage list with phi+psi and sorts.
QueryRunResult plain_rerank(const std::vector<ScoredDoc>& first_stage, const Ranker& ranker,
                            const DenseScorer* psi_scorer, const std::string& query_id, int c,
                            int b, double per_call_latency_ms = 51.0);

// Alternates batches between the first-stage frontier and a neighbour
// frontier until the budget is spent; unscored positions backfill from the
// initial list. GAR orders neighbours by (source score, edge weight); QUAM
// orders them by the set affinity of each candidate to the current top-s
// scored documents.
QueryRunResult gar_style(const std::vector<ScoredDoc>& first_stage, const AffinityGraph& graph,
                         const Ranker& ranker, const DenseScorer* psi_scorer,
                         const std::string& query_id, const ScheduleConfig& cfg);
QueryRunResult quam_style(const std::vector<ScoredDoc>& first_stage, const AffinityGraph& graph,
                          const Ranker& ranker, const DenseScorer* psi_scorer,
                          const std::string& query_id, const ScheduleConfig& cfg);

// Scores every document in the corpus; the recall ceiling reference. Guarded
// by a document cap unless overridden.
QueryRunResult exhaustive(const std::vector<std::string>& doc_ids, const Ranker& ranker,
                          const DenseScorer* psi_scorer, const std::string& query_id,
                          int doc_cap = 100000, bool override_cap = false,
                          double per_call_latency_ms = 51.0);

}  // namespace ore
