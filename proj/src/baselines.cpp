#include "ore/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ore/errors.hpp"

namespace ore {

namespace {

constexpr double kFillStep = 1e-6;

std::vector<ScoredDoc> sorted_stored(const std::map<std::string, double>& stored) {
  std::vector<ScoredDoc> out;
  out.reserve(stored.size());
  for (const auto& [id, score] : stored) out.push_back(ScoredDoc{id, score});
  sort_ranked(out);
  return out;
}

// Scored block first; unscored backfill from the initial list in its own
// order, scores rewritten onto a strictly decreasing tail.
std::vector<ScoredDoc> backfill_from_initial(const std::map<std::string, double>& stored,
                                             const std::vector<ScoredDoc>& first_stage, int c) {
  std::vector<ScoredDoc> ranking = sorted_stored(stored);
  size_t target = static_cast<size_t>(c);
  if (ranking.size() > target) ranking.resize(target);
  double base = ranking.empty() ? 0.0 : ranking.back().score;
  size_t i = 0;
  for (const auto& d : first_stage) {
    if (ranking.size() >= target) break;
    if (stored.count(d.doc_id)) continue;
    ranking.push_back(ScoredDoc{d.doc_id, base - kFillStep * static_cast<double>(++i)});
  }
  return ranking;
}

}  // namespace

std::vector<ScoredDoc> rrf_fuse(const std::vector<std::vector<ScoredDoc>>& lists, int k) {
  if (lists.size() < 2) throw ValidationError("rrf: need at least two ranked lists");
  if (k < 1) throw ValidationError("rrf: k must be >= 1");
  std::map<std::string, double> scores;
  for (const auto& list : lists)
    for (size_t rank = 0; rank < list.size(); ++rank)
      scores[list[rank].doc_id] += 1.0 / (static_cast<double>(k) + static_cast<double>(rank + 1));
  auto fused = sorted_stored(scores);
  return fused;
}

std::vector<ScoredDoc> cc_fuse(const std::vector<ScoredDoc>& list_a,
                               const std::vector<ScoredDoc>& list_b, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw ValidationError("cc: lambda outside [0,1]");
  auto normalized = [](const std::vector<ScoredDoc>& list) {
    std::map<std::string, double> out;
    if (list.empty()) return out;
    double lo = list.front().score, hi = list.front().score;
    for (const auto& d : list) {
      lo = std::min(lo, d.score);
      hi = std::max(hi, d.score);
    }
    double range = hi - lo;
    for (const auto& d : list) out[d.doc_id] = range > 0.0 ? (d.score - lo) / range : 0.0;
    return out;
  };
  auto norm_a = normalized(list_a);
  auto norm_b = normalized(list_b);
  std::map<std::string, double> fused;
  for (const auto& [id, v] : norm_a) fused[id] += lambda * v;
  for (const auto& [id, v] : norm_b) fused[id] += (1.0 - lambda) * v;
  return sorted_stored(fused);
}

QueryRunResult plain_rerank(const std::vector<ScoredDoc>& first_stage, const Ranker& ranker,
                            const DenseScorer* psi_scorer, const std::string& query_id, int c,
                            int b, double per_call_latency_ms) {
  if (c < 1) throw ValidationError("rerank: c must be >= 1");
  if (b < 1) throw ValidationError("rerank: b must be >= 1");
  b = std::min(b, c);
  BudgetLedger ledger(c, b, (c + b - 1) / b, per_call_latency_ms);

  QueryRunResult result;
  result.query_id = query_id;
  std::map<std::string, double> stored;

  size_t limit = std::min(first_stage.size(), static_cast<size_t>(c));
  std::vector<std::string> batch;
  for (size_t i = 0; i < limit; ++i) {
    batch.push_back(first_stage[i].doc_id);
    if (batch.size() == static_cast<size_t>(b) || i + 1 == limit) {
      for (const auto& call : score_batch(ranker, query_id, batch, ledger)) {
        stored[call.doc_id] = call.score + psi(psi_scorer, query_id, call.doc_id);
        result.scored_order.push_back(call.doc_id);
      }
      batch.clear();
    }
  }
  result.ranking = sorted_stored(stored);
  result.stored_scores = std::move(stored);
  result.calls_used = ledger.calls_used();
  result.batches_used = ledger.batches_used();
  result.latency_ms = ledger.latency_ms();
  result.pool_size = static_cast<int>(first_stage.size());
  return result;
}

namespace {

enum class NeighbourOrder { edge_weight, set_affinity };

QueryRunResult alternating_rerank(const std::vector<ScoredDoc>& first_stage,
                                  const AffinityGraph& graph, const Ranker& ranker,
                                  const DenseScorer* psi_scorer, const std::string& query_id,
                                  const ScheduleConfig& cfg, NeighbourOrder order) {
  BudgetLedger ledger(cfg.c, cfg.b, cfg.cb, cfg.per_call_latency_ms);
  QueryRunResult result;
  result.query_id = query_id;

  std::map<std::string, double> stored;
  // Neighbour frontier: doc -> best (source stored score, edge weight).
  std::map<std::string, std::pair<double, double>> frontier;

  auto add_neighbours = [&](const std::string& scored_doc) {
    double source_score = stored.at(scored_doc);
    for (const auto& edge : graph.neighbours(scored_doc)) {
      if (stored.count(edge.doc_id)) continue;
      auto key = std::make_pair(source_score, edge.weight);
      auto [it, inserted] = frontier.try_emplace(edge.doc_id, key);
      if (!inserted && key > it->second) it->second = key;
    }
  };

  size_t initial_pos = 0;
  auto take_initial = [&](std::vector<std::string>& batch, int want) {
    while (static_cast<int>(batch.size()) < want && initial_pos < first_stage.size()) {
      const auto& id = first_stage[initial_pos++].doc_id;
      if (!stored.count(id)) batch.push_back(id);
    }
  };

  auto take_neighbours = [&](std::vector<std::string>& batch, int want) {
    if (frontier.empty()) return;
    std::vector<std::pair<std::string, std::pair<double, double>>> ranked;
    if (order == NeighbourOrder::edge_weight) {
      ranked.assign(frontier.begin(), frontier.end());
    } else {
      // Set affinity of each frontier doc to the current top-s scored docs.
      ScoredSet scored_set(sorted_stored(stored), static_cast<size_t>(cfg.s));
      for (const auto& [id, key] : frontier) {
        Feature aff = d2setaff_adaptive(graph, id, scored_set);
        ranked.emplace_back(id, std::make_pair(aff.value, 0.0));
      }
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::set<std::string> in_batch(batch.begin(), batch.end());
    for (const auto& [id, key] : ranked) {
      if (static_cast<int>(batch.size()) >= want) break;
      if (!in_batch.count(id)) batch.push_back(id);
    }
  };

  for (int batch_index = 1; batch_index <= cfg.cb && ledger.remaining() > 0; ++batch_index) {
    int want = std::min(cfg.b, ledger.remaining());
    std::vector<std::string> batch;
    bool neighbour_turn = batch_index % 2 == 0;
    if (neighbour_turn) {
      take_neighbours(batch, want);
      take_initial(batch, want);  // keep the budget exact when the frontier runs dry
    } else {
      take_initial(batch, want);
      take_neighbours(batch, want);
    }
    if (batch.empty()) {
      result.pool_exhausted = true;
      break;
    }
    for (const auto& call : score_batch(ranker, query_id, batch, ledger)) {
      stored[call.doc_id] = call.score + psi(psi_scorer, query_id, call.doc_id);
      result.scored_order.push_back(call.doc_id);
      frontier.erase(call.doc_id);
    }
    for (const auto& id : batch) add_neighbours(id);
  }

  result.ranking = backfill_from_initial(stored, first_stage, cfg.c);
  result.stored_scores = std::move(stored);
  result.calls_used = ledger.calls_used();
  result.batches_used = ledger.batches_used();
  result.latency_ms = ledger.latency_ms();
  result.pool_size = static_cast<int>(first_stage.size() + frontier.size());
  return result;
}

}  // namespace

QueryRunResult gar_style(const std::vector<ScoredDoc>& first_stage, const AffinityGraph& graph,
                         const Ranker& ranker, const DenseScorer* psi_scorer,
                         const std::string& query_id, const ScheduleConfig& cfg) {
  return alternating_rerank(first_stage, graph, ranker, psi_scorer, query_id, cfg,
                            NeighbourOrder::edge_weight);
}

QueryRunResult quam_style(const std::vector<ScoredDoc>& first_stage, const AffinityGraph& graph,
                          const Ranker& ranker, const DenseScorer* psi_scorer,
                          const std::string& query_id, const ScheduleConfig& cfg) {
  return alternating_rerank(first_stage, graph, ranker, psi_scorer, query_id, cfg,
                            NeighbourOrder::set_affinity);
}

QueryRunResult exhaustive(const std::vector<std::string>& doc_ids, const Ranker& ranker,
                          const DenseScorer* psi_scorer, const std::string& query_id, int doc_cap,
                          bool override_cap, double per_call_latency_ms) {
  if (!override_cap && static_cast<int>(doc_ids.size()) > doc_cap)
    throw ValidationError("exhaustive: corpus of " + std::to_string(doc_ids.size()) +
                          " docs exceeds cap " + std::to_string(doc_cap) +
                          " (pass the override flag to force)");
  std::vector<ScoredDoc> all;
  all.reserve(doc_ids.size());
  for (const auto& id : doc_ids) all.push_back(ScoredDoc{id, 0.0});
  return plain_rerank(all, ranker, psi_scorer, query_id, static_cast<int>(doc_ids.size()),
                      1024, per_call_latency_ms);
}

}  // namespace ore
