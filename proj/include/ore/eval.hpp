#pragma once

#include <map>
#include <string>
#include <vector>

#include "ore/corpus_io.hpp"

namespace ore {

// |relevant in top-k| / |relevant|, relevant = grade >= min_grade. Queries
// without relevant docs are excluded from means (trec_eval convention).
double recall_at_k(const std::vector<ScoredDoc>& ranking, const Qrels& qrels,
                   const std::string& query_id, int k, int min_grade = 1);

// Gain 2^grade - 1, log2(rank+1) discount; 0 when the query has no relevant
// docs.
double ndcg_at_k(const std::vector<ScoredDoc>& ranking, const Qrels& qrels,
                 const std::string& query_id, int k);

struct MetricsReport {
  std::string system;
  // metric name ("recall@100", "ndcg@10") -> query_id -> value. Queries
  // without judged relevant docs are absent.
  std::map<std::string, std::map<std::string, double>> per_query;
  std::map<std::string, double> means;
  double mean_calls = 0.0;
  double mean_latency_ms = 0.0;
};

MetricsReport evaluate_run(const std::string& system, const std::vector<RunEntry>& run,
                           const Qrels& qrels, const std::vector<int>& recall_ks,
                           const std::vector<int>& ndcg_ks, int min_grade = 1);

struct SystemComparison {
  std::string system;
  // metric -> (mean, delta vs reference, % gain vs reference, wins, losses)
  struct Row {
    double mean = 0.0;
    double delta = 0.0;
    double pct_gain = 0.0;
    int wins = 0;
    int losses = 0;
  };
  std::map<std::string, Row> rows;
};

// First report is the reference; remaining systems are compared per metric
// with per-query win/loss counts (sign test). ValidationError on mismatched
// query sets.
std::vector<SystemComparison> compare_systems(const std::vector<MetricsReport>& reports);

void write_comparison_csv(const std::vector<SystemComparison>& comparisons,
                          const std::string& path);

}  // namespace ore
