#include "ore/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ore/errors.hpp"

namespace ore {

double recall_at_k(const std::vector<ScoredDoc>& ranking, const Qrels& qrels,
                   const std::string& query_id, int k, int min_grade) {
  if (k < 1) throw ValidationError("recall_at_k: k must be >= 1");
  const auto* judged = qrels.for_query(query_id);
  if (judged == nullptr) return 0.0;
  int relevant = 0;
  for (const auto& [did, grade] : *judged)
    if (grade >= min_grade) ++relevant;
  if (relevant == 0) return 0.0;
  int hit = 0;
  for (size_t i = 0; i < ranking.size() && i < static_cast<size_t>(k); ++i)
    if (qrels.grade(query_id, ranking[i].doc_id) >= min_grade) ++hit;
  return static_cast<double>(hit) / static_cast<double>(relevant);
}

double ndcg_at_k(const std::vector<ScoredDoc>& ranking, const Qrels& qrels,
                 const std::string& query_id, int k) {
  if (k < 1) throw ValidationError("ndcg_at_k: k must be >= 1");
  const auto* judged = qrels.for_query(query_id);
  if (judged == nullptr) return 0.0;
  double dcg = 0.0;
  for (size_t i = 0; i < ranking.size() && i < static_cast<size_t>(k); ++i) {
    int grade = qrels.grade(query_id, ranking[i].doc_id);
    if (grade > 0)
      dcg += (std::pow(2.0, grade) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> grades;
  for (const auto& [did, grade] : *judged)
    if (grade > 0) grades.push_back(grade);
  if (grades.empty()) return 0.0;
  std::sort(grades.rbegin(), grades.rend());
  double idcg = 0.0;
  for (size_t i = 0; i < grades.size() && i < static_cast<size_t>(k); ++i)
    idcg += (std::pow(2.0, grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

MetricsReport evaluate_run(const std::string& system, const std::vector<RunEntry>& run,
                           const Qrels& qrels, const std::vector<int>& recall_ks,
                           const std::vector<int>& ndcg_ks, int min_grade) {
  // Group entries per query, preserving ranks.
  std::map<std::string, std::vector<ScoredDoc>> rankings;
  for (const auto& e : run) rankings[e.query_id].push_back(ScoredDoc{e.doc_id, e.score});

  MetricsReport report;
  report.system = system;
  for (const auto& [qid, ranking] : rankings) {
    const auto* judged = qrels.for_query(qid);
    bool has_relevant = false;
    if (judged != nullptr)
      for (const auto& [did, grade] : *judged)
        if (grade >= min_grade) has_relevant = true;
    if (!has_relevant) continue;
    for (int k : recall_ks)
      report.per_query["recall@" + std::to_string(k)][qid] =
          recall_at_k(ranking, qrels, qid, k, min_grade);
    for (int k : ndcg_ks)
      report.per_query["ndcg@" + std::to_string(k)][qid] = ndcg_at_k(ranking, qrels, qid, k);
  }
  for (const auto& [metric, per_query] : report.per_query) {
    double sum = 0.0;
    for (const auto& [qid, v] : per_query) sum += v;
    report.means[metric] = per_query.empty() ? 0.0 : sum / static_cast<double>(per_query.size());
  }
  return report;
}

std::vector<SystemComparison> compare_systems(const std::vector<MetricsReport>& reports) {
  if (reports.size() < 2) throw ValidationError("compare_systems: need at least two reports");
  const MetricsReport& ref = reports.front();
  for (const auto& report : reports) {
    for (const auto& [metric, per_query] : ref.per_query) {
      auto it = report.per_query.find(metric);
      if (it == report.per_query.end())
        throw ValidationError("compare_systems: system '" + report.system + "' lacks metric " + metric);
      if (it->second.size() != per_query.size())
        throw ValidationError("compare_systems: query sets differ between '" + ref.system +
                              "' and '" + report.system + "'");
      for (const auto& [qid, v] : per_query)
        if (!it->second.count(qid))
          throw ValidationError("compare_systems: query '" + qid + "' missing from '" +
                                report.system + "'");
    }
  }
  std::vector<SystemComparison> out;
  for (const auto& report : reports) {
    SystemComparison cmp;
    cmp.system = report.system;
    for (const auto& [metric, per_query] : report.per_query) {
      SystemComparison::Row row;
      row.mean = report.means.at(metric);
      double ref_mean = ref.means.at(metric);
      row.delta = row.mean - ref_mean;
      row.pct_gain = ref_mean != 0.0 ? 100.0 * row.delta / ref_mean : 0.0;
      for (const auto& [qid, v] : per_query) {
        double rv = ref.per_query.at(metric).at(qid);
        if (v > rv) ++row.wins;
        if (v < rv) ++row.losses;
      }
      cmp.rows[metric] = row;
    }
    out.push_back(std::move(cmp));
  }
  return out;
}

void write_comparison_csv(const std::vector<SystemComparison>& comparisons,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open comparison csv for writing: " + path);
  out << "system,metric,mean,delta,pct_gain,wins,losses\n";
  for (const auto& cmp : comparisons)
    for (const auto& [metric, row] : cmp.rows)
      out << cmp.system << ',' << metric << ',' << row.mean << ',' << row.delta << ','
          << row.pct_gain << ',' << row.wins << ',' << row.losses << '\n';
}

}  // namespace ore
