#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ore/corpus_io.hpp"

namespace ore {

// The expensive ranker phi. Implementations are stateless given their seed;
// scoring the same (query, doc) twice returns the same value regardless of
// call order.
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual double score(const std::string& query_id, const std::string& doc_id) const = 0;
};

struct RankerCall {
  std::string query_id;
  std::string doc_id;
  double score = 0.0;
  int call_index = 0;
  double simulated_latency_ms = 0.0;
};

// Per-query scoring budget: at most min(c, cb*b) ranker calls, issued in
// batches of at most b.
class BudgetLedger {
 public:
  BudgetLedger(int c, int b, int cb, double per_call_latency_ms = 51.0);

  int c() const { return c_; }
  int b() const { return b_; }
  int cb() const { return cb_; }
  int cap() const;  // min(c, cb*b)
  int calls_used() const { return calls_used_; }
  int batches_used() const { return batches_used_; }
  int remaining() const { return cap() - calls_used_; }
  double per_call_latency_ms() const { return per_call_latency_ms_; }
  double latency_ms() const { return calls_used_ * per_call_latency_ms_; }

  void record_batch(int n_calls);  // BudgetError on violation

 private:
  int c_, b_, cb_;
  int calls_used_ = 0;
  int batches_used_ = 0;
  double per_call_latency_ms_;
};

// Scores one batch under the ledger; |docs| must be <= b and within the
// remaining budget.
std::vector<RankerCall> score_batch(const Ranker& ranker, const std::string& query_id,
                                    const std::vector<std::string>& docs, BudgetLedger& ledger);

// phi(q,d) = grade(q,d) + Gaussian(0, sigma), noise hash-seeded per (q,d)
// so scoring order never changes outcomes.
std::unique_ptr<Ranker> make_graded_oracle(const Qrels& qrels, double sigma, uint64_t seed);

// phi(q,d) = w . features(q,d) + noise. Exists so the estimator has an
// exactly recoverable target.
using FeatureFn = std::function<std::vector<double>(const std::string&, const std::string&)>;
std::unique_ptr<Ranker> make_latent_linear_oracle(FeatureFn features, std::vector<double> w,
                                                  double sigma, uint64_t seed);

// Replays scores exported from a real ranker: file of `qid<TAB>did<TAB>score`.
std::unique_ptr<Ranker> make_cached_ranker(const std::string& path);

// Deterministic per-(q,d) standard normal draw shared by the oracles.
double seeded_noise(uint64_t seed, const std::string& query_id, const std::string& doc_id);

}  // namespace ore
