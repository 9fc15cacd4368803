#include "ore/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

#include "ore/errors.hpp"

namespace ore {

namespace {

constexpr double kFillStep = 1e-6;

struct Candidate {
  std::string doc_id;
  RawFeatures raw;
  FeatureVector assembled;
};

std::vector<ScoredDoc> to_sorted(const std::map<std::string, double>& scores) {
  std::vector<ScoredDoc> out;
  out.reserve(scores.size());
  for (const auto& [id, score] : scores) out.push_back(ScoredDoc{id, score});
  sort_ranked(out);
  return out;
}

// RM3 feedback ids: top fb_docs of the re-ranked list so far.
std::vector<std::string> feedback_ids(const std::map<std::string, double>& stored, int fb_docs) {
  auto sorted = to_sorted(stored);
  std::vector<std::string> ids;
  for (const auto& d : sorted) {
    ids.push_back(d.doc_id);
    if (static_cast<int>(ids.size()) >= fb_docs) break;
  }
  return ids;
}

}  // namespace

std::vector<std::string> select_batch(const std::vector<std::pair<std::string, double>>& keyed,
                                      int n) {
  std::vector<std::pair<std::string, double>> sorted = keyed;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(sorted.size()) > n) sorted.resize(n);
  std::vector<std::string> out;
  out.reserve(sorted.size());
  for (auto& [id, key] : sorted) out.push_back(std::move(id));
  return out;
}

std::vector<ScoredDoc> finalize_ranking(
    const std::map<std::string, double>& stored_scores,
    const std::vector<std::pair<std::string, double>>& unscored_estrel, size_t pool_size,
    int c) {
  std::vector<ScoredDoc> ranking = to_sorted(stored_scores);
  size_t target = std::min<size_t>(pool_size, static_cast<size_t>(c));
  if (ranking.size() > target) ranking.resize(target);
  if (ranking.size() < target) {
    std::vector<std::pair<std::string, double>> fill = unscored_estrel;
    std::sort(fill.begin(), fill.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    double base = ranking.empty() ? 0.0 : ranking.back().score;
    size_t i = 0;
    while (ranking.size() < target && i < fill.size()) {
      ranking.push_back(ScoredDoc{fill[i].first, base - kFillStep * static_cast<double>(i + 1)});
      ++i;
    }
  }
  return ranking;
}

namespace {

// State shared by both modes once the per-batch candidate features exist.
struct LoopState {
  Estimator estimator;
  FeatureNormalizer normalizer;
  std::map<std::string, double> stored;  // doc -> phi+psi
  std::vector<std::string> scored_order;
  std::vector<BatchDiagnostics> diagnostics;

  LoopState(int dim, const ScheduleConfig& cfg)
      : estimator(dim, cfg.lambda, cfg.seed), normalizer(dim) {}
};

// Scores the selected batch, stores phi+psi, folds observations, records
// diagnostics. `candidates` must hold assembled features for every id in
// `batch`.
void score_and_fold(const std::vector<std::string>& batch,
                    const std::map<std::string, Candidate>& candidates, const Ranker& ranker,
                    const DenseScorer* psi_scorer, const std::string& query_id,
                    BudgetLedger& ledger, LoopState& st, int batch_index, int pool_size,
                    int n_candidates) {
  auto calls = score_batch(ranker, query_id, batch, ledger);
  std::vector<std::pair<std::vector<double>, double>> observations;
  double mae = 0.0;
  for (const auto& call : calls) {
    const Candidate& cand = candidates.at(call.doc_id);
    double stored = call.score + psi(psi_scorer, query_id, call.doc_id);
    st.stored[call.doc_id] = stored;
    st.scored_order.push_back(call.doc_id);
    mae += std::abs(st.estimator.est_rel(cand.assembled) - stored);
    observations.emplace_back(cand.assembled.values, stored);
  }
  st.estimator.observe_batch(observations);

  BatchDiagnostics diag;
  diag.batch_index = batch_index;
  diag.calls_used = ledger.calls_used();
  diag.alpha = st.estimator.alpha();
  diag.batch_mae = calls.empty() ? 0.0 : mae / static_cast<double>(calls.size());
  diag.pool_size = pool_size;
  diag.n_candidates = n_candidates;
  st.diagnostics.push_back(std::move(diag));
}

void fill_result(QueryRunResult& result, const LoopState& st, const BudgetLedger& ledger,
                 size_t pool_size, int c,
                 const std::vector<std::pair<std::string, double>>& unscored_estrel) {
  result.ranking = finalize_ranking(st.stored, unscored_estrel, pool_size, c);
  result.scored_order = st.scored_order;
  result.stored_scores = st.stored;
  result.calls_used = ledger.calls_used();
  result.batches_used = ledger.batches_used();
  result.latency_ms = ledger.latency_ms();
  result.pool_size = static_cast<int>(pool_size);
  result.batches = st.diagnostics;
  result.final_alpha = st.estimator.alpha();
}

}  // namespace

QueryRunResult run_hybrid(const InvertedIndex& index, const DenseScorer& dense,
                          const DenseScorer* psi_scorer, const Ranker& ranker,
                          const Query& query, const ScheduleConfig& cfg) {
  BudgetLedger ledger(cfg.c, cfg.b, cfg.cb, cfg.per_call_latency_ms);
  QueryRunResult result;
  result.query_id = query.query_id;

  auto query_tokens = tokenize(query.text);
  size_t depth = static_cast<size_t>(cfg.first_stage_depth);

  // Candidate pool: the entire merged list from both first stages.
  std::set<std::string> pool;
  for (const auto& d : index.top_docs(query_tokens, depth, cfg.bm25)) pool.insert(d.doc_id);
  if (dense.has_query(query.query_id))
    for (const auto& d : dense.top_docs(query.query_id, depth)) pool.insert(d.doc_id);

  LoopState st(kHybridDim, cfg);

  auto compute_candidates = [&](const ScoredSet& scored_set, const ExpandedQuery* expanded) {
    std::map<std::string, Candidate> candidates;
    for (const auto& doc_id : pool) {
      if (st.stored.count(doc_id)) continue;
      auto [x1, x2] = q2daff_hybrid(index, cfg.bm25, query_tokens, &dense, query.query_id, doc_id);
      auto [x3, set_term] = d2setaff_hybrid(index, cfg.bm25, expanded, &dense, doc_id, scored_set);
      Candidate cand;
      cand.doc_id = doc_id;
      cand.raw.values = {x1.value, x2.value, x3.value, set_term.value};
      cand.raw.mask = {x1.available, x2.available, x3.available, set_term.available};
      candidates.emplace(doc_id, std::move(cand));
    }
    for (const auto& [id, cand] : candidates) st.normalizer.observe(cand.raw);
    for (auto& [id, cand] : candidates)
      cand.assembled = st.normalizer.assemble(Setup::hybrid, cand.raw);
    return candidates;
  };

  for (int batch_index = 1; batch_index <= cfg.cb && ledger.remaining() > 0; ++batch_index) {
    ScoredSet scored_set(to_sorted(st.stored), static_cast<size_t>(cfg.s));
    ExpandedQuery expanded;
    bool have_expansion = false;
    if (!st.stored.empty() && cfg.fb_docs > 0 && !query_tokens.empty()) {
      expanded = index.rm3_expand(query_tokens, feedback_ids(st.stored, cfg.fb_docs),
                                  cfg.fb_terms, cfg.rm3_orig_weight);
      have_expansion = true;
    }
    auto candidates = compute_candidates(scored_set, have_expansion ? &expanded : nullptr);
    if (candidates.empty()) {
      result.pool_exhausted = true;
      break;
    }

    // Cold start ranks by the normalized first-stage affinities; afterwards
    // the learned utility takes over.
    bool cold = batch_index == 1 && !cfg.random_alpha_first_batch;
    std::vector<std::pair<std::string, double>> keyed;
    keyed.reserve(candidates.size());
    for (const auto& [id, cand] : candidates) {
      double key = cold ? cand.assembled.values[0] + cand.assembled.values[1]
                        : st.estimator.est_rel(cand.assembled);
      keyed.emplace_back(id, key);
    }
    auto batch = select_batch(keyed, std::min(cfg.b, ledger.remaining()));
    if (batch.empty()) {
      result.pool_exhausted = true;
      break;
    }
    score_and_fold(batch, candidates, ranker, psi_scorer, query.query_id, ledger, st,
                   batch_index, static_cast<int>(pool.size()), static_cast<int>(candidates.size()));
  }

  // Final features for the unscored remainder (EstRel is the fill proxy).
  ScoredSet final_set(to_sorted(st.stored), static_cast<size_t>(cfg.s));
  ExpandedQuery expanded;
  bool have_expansion = false;
  if (!st.stored.empty() && cfg.fb_docs > 0 && !query_tokens.empty()) {
    expanded = index.rm3_expand(query_tokens, feedback_ids(st.stored, cfg.fb_docs), cfg.fb_terms,
                                cfg.rm3_orig_weight);
    have_expansion = true;
  }
  auto final_candidates = compute_candidates(final_set, have_expansion ? &expanded : nullptr);
  std::vector<std::pair<std::string, double>> unscored_estrel;
  for (const auto& [id, cand] : final_candidates)
    unscored_estrel.emplace_back(id, st.estimator.est_rel(cand.assembled));

  fill_result(result, st, ledger, pool.size(), cfg.c, unscored_estrel);

  if (cfg.probe_estimation_error) {
    double sum_unscored = 0.0, sum_pool = 0.0;
    size_t n_unscored = 0, n_pool = 0;
    for (const auto& [id, cand] : final_candidates) {
      double truth = ranker.score(query.query_id, id) + psi(psi_scorer, query.query_id, id);
      sum_unscored += std::abs(st.estimator.est_rel(cand.assembled) - truth);
      ++n_unscored;
    }
    // Scored docs use their stored value as truth; the estimator is probed
    // on the features it would produce now.
    ScoredSet probe_set = final_set;
    for (const auto& doc_id : pool) {
      double est;
      double truth;
      auto it = final_candidates.find(doc_id);
      if (it != final_candidates.end()) {
        est = st.estimator.est_rel(it->second.assembled);
        truth = ranker.score(query.query_id, doc_id) + psi(psi_scorer, query.query_id, doc_id);
      } else {
        auto [x1, x2] =
            q2daff_hybrid(index, cfg.bm25, query_tokens, &dense, query.query_id, doc_id);
        auto [x3, set_term] = d2setaff_hybrid(index, cfg.bm25,
                                              have_expansion ? &expanded : nullptr, &dense,
                                              doc_id, probe_set);
        RawFeatures raw;
        raw.values = {x1.value, x2.value, x3.value, set_term.value};
        raw.mask = {x1.available, x2.available, x3.available, set_term.available};
        est = st.estimator.est_rel(st.normalizer.assemble(Setup::hybrid, raw));
        truth = st.stored.at(doc_id);
      }
      sum_pool += std::abs(est - truth);
      ++n_pool;
    }
    if (n_unscored > 0) result.probe_mae_unscored = sum_unscored / static_cast<double>(n_unscored);
    if (n_pool > 0) result.probe_mae_pool = sum_pool / static_cast<double>(n_pool);
  }
  return result;
}

QueryRunResult run_adaptive(const InvertedIndex& index, const AffinityGraph& graph,
                            const DenseScorer* psi_scorer, const Ranker& ranker,
                            const Query& query, const ScheduleConfig& cfg) {
  BudgetLedger ledger(cfg.c, cfg.b, cfg.cb, cfg.per_call_latency_ms);
  QueryRunResult result;
  result.query_id = query.query_id;

  auto query_tokens = tokenize(query.text);
  int u_size = cfg.u > 0 ? cfg.u : 2 * cfg.b;
  int v_size = cfg.v > 0 ? cfg.v : 2 * cfg.b;

  // Pool starts from the lexical first stage; Q2DAff is cached per member.
  std::map<std::string, double> pool;  // doc -> bm25(q,d)
  for (const auto& d : index.top_docs(query_tokens, static_cast<size_t>(cfg.first_stage_depth),
                                      cfg.bm25))
    pool.emplace(d.doc_id, d.score);

  LoopState st(kAdaptiveDim, cfg);

  auto compute_candidates = [&](const ScoredSet& scored_set) {
    std::map<std::string, Candidate> candidates;
    for (const auto& [doc_id, q2d] : pool) {
      if (st.stored.count(doc_id)) continue;
      Feature set_aff = d2setaff_adaptive(graph, doc_id, scored_set);
      Feature nbr_score = neighbour_score_mean(graph, doc_id, scored_set);
      Candidate cand;
      cand.doc_id = doc_id;
      cand.raw.values = {q2d, set_aff.value, nbr_score.value};
      cand.raw.mask = {true, set_aff.available, nbr_score.available};
      candidates.emplace(doc_id, std::move(cand));
    }
    for (const auto& [id, cand] : candidates) st.normalizer.observe(cand.raw);
    for (auto& [id, cand] : candidates)
      cand.assembled = st.normalizer.assemble(Setup::adaptive, cand.raw);
    return candidates;
  };

  for (int batch_index = 1; batch_index <= cfg.cb && ledger.remaining() > 0; ++batch_index) {
    ScoredSet scored_set(to_sorted(st.stored), static_cast<size_t>(cfg.s));
    auto candidates = compute_candidates(scored_set);
    if (candidates.empty()) {
      result.pool_exhausted = true;
      break;
    }

    // Shortlists: U by Q2DAff, V by D2SetAff (docs whose neighbourhood
    // actually meets S). The batch is chosen from U ∪ V.
    std::vector<std::pair<std::string, double>> by_q2d, by_setaff;
    for (const auto& [id, cand] : candidates) {
      by_q2d.emplace_back(id, cand.raw.values[0]);
      if (cand.raw.mask[1]) by_setaff.emplace_back(id, cand.raw.values[1]);
    }
    std::set<std::string> shortlisted;
    for (auto& id : select_batch(by_q2d, u_size)) shortlisted.insert(std::move(id));
    for (auto& id : select_batch(by_setaff, v_size)) shortlisted.insert(std::move(id));

    bool cold = batch_index == 1 && !cfg.random_alpha_first_batch;
    std::vector<std::pair<std::string, double>> keyed;
    keyed.reserve(shortlisted.size());
    for (const auto& id : shortlisted) {
      const Candidate& cand = candidates.at(id);
      double key = cold ? cand.raw.values[0] : st.estimator.est_rel(cand.assembled);
      keyed.emplace_back(id, key);
    }
    auto batch = select_batch(keyed, std::min(cfg.b, ledger.remaining()));
    if (batch.empty()) {
      result.pool_exhausted = true;
      break;
    }
    score_and_fold(batch, candidates, ranker, psi_scorer, query.query_id, ledger, st,
                   batch_index, static_cast<int>(pool.size()), static_cast<int>(candidates.size()));

    // Pool expansion: neighbours of every doc scored in this batch.
    for (const auto& doc_id : batch) {
      for (const auto& edge : graph.neighbours(doc_id)) {
        if (pool.count(edge.doc_id) || !index.has_doc(edge.doc_id)) continue;
        pool.emplace(edge.doc_id, index.bm25_qd(query_tokens, edge.doc_id, cfg.bm25));
      }
    }
  }

  ScoredSet final_set(to_sorted(st.stored), static_cast<size_t>(cfg.s));
  auto final_candidates = compute_candidates(final_set);
  std::vector<std::pair<std::string, double>> unscored_estrel;
  for (const auto& [id, cand] : final_candidates)
    unscored_estrel.emplace_back(id, st.estimator.est_rel(cand.assembled));

  fill_result(result, st, ledger, pool.size(), cfg.c, unscored_estrel);

  if (cfg.probe_estimation_error) {
    double sum_unscored = 0.0, sum_pool = 0.0;
    size_t n_unscored = 0, n_pool = 0;
    for (const auto& [id, cand] : final_candidates) {
      double truth = ranker.score(query.query_id, id) + psi(psi_scorer, query.query_id, id);
      sum_unscored += std::abs(st.estimator.est_rel(cand.assembled) - truth);
      ++n_unscored;
    }
    for (const auto& [doc_id, q2d] : pool) {
      double est;
      double truth;
      auto it = final_candidates.find(doc_id);
      if (it != final_candidates.end()) {
        est = st.estimator.est_rel(it->second.assembled);
        truth = ranker.score(query.query_id, doc_id) + psi(psi_scorer, query.query_id, doc_id);
      } else {
        Feature set_aff = d2setaff_adaptive(graph, doc_id, final_set);
        Feature nbr_score = neighbour_score_mean(graph, doc_id, final_set);
        RawFeatures raw;
        raw.values = {q2d, set_aff.value, nbr_score.value};
        raw.mask = {true, set_aff.available, nbr_score.available};
        est = st.estimator.est_rel(st.normalizer.assemble(Setup::adaptive, raw));
        truth = st.stored.at(doc_id);
      }
      sum_pool += std::abs(est - truth);
      ++n_pool;
    }
    if (n_unscored > 0) result.probe_mae_unscored = sum_unscored / static_cast<double>(n_unscored);
    if (n_pool > 0) result.probe_mae_pool = sum_pool / static_cast<double>(n_pool);
  }
  return result;
}

}  // namespace ore
