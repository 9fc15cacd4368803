#include "ore/rankers.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "ore/errors.hpp"
#include "ore/rng.hpp"

namespace ore {

BudgetLedger::BudgetLedger(int c, int b, int cb, double per_call_latency_ms)
    : c_(c), b_(b), cb_(cb), per_call_latency_ms_(per_call_latency_ms) {
  if (b_ < 1) throw ValidationError("budget: b must be >= 1");
  if (c_ < b_) throw ValidationError("budget: c must be >= b");
  if (cb_ < 1) throw ValidationError("budget: cb must be >= 1");
  int max_cb = (c_ + b_ - 1) / b_;
  if (cb_ > max_cb)
    throw ValidationError("budget: cb=" + std::to_string(cb_) + " exceeds ceil(c/b)=" +
                          std::to_string(max_cb));
}

int BudgetLedger::cap() const {
  long full = static_cast<long>(cb_) * static_cast<long>(b_);
  return static_cast<int>(std::min<long>(c_, full));
}

void BudgetLedger::record_batch(int n_calls) {
  if (n_calls < 1 || n_calls > b_)
    throw BudgetError("batch size " + std::to_string(n_calls) + " outside [1, b=" +
                      std::to_string(b_) + "]");
  if (n_calls > remaining())
    throw BudgetError("batch of " + std::to_string(n_calls) + " exceeds remaining budget " +
                      std::to_string(remaining()));
  calls_used_ += n_calls;
  ++batches_used_;
}

std::vector<RankerCall> score_batch(const Ranker& ranker, const std::string& query_id,
                                    const std::vector<std::string>& docs, BudgetLedger& ledger) {
  int base = ledger.calls_used();
  ledger.record_batch(static_cast<int>(docs.size()));
  std::vector<RankerCall> calls;
  calls.reserve(docs.size());
  for (size_t i = 0; i < docs.size(); ++i) {
    RankerCall call;
    call.query_id = query_id;
    call.doc_id = docs[i];
    call.score = ranker.score(query_id, docs[i]);
    call.call_index = base + static_cast<int>(i) + 1;
    call.simulated_latency_ms = ledger.per_call_latency_ms();
    calls.push_back(std::move(call));
  }
  return calls;
}

double seeded_noise(uint64_t seed, const std::string& query_id, const std::string& doc_id) {
  uint64_t state = rng::mix(seed, rng::mix(rng::hash_str(query_id), rng::hash_str(doc_id)));
  return rng::normal(state);
}

namespace {

class GradedOracle : public Ranker {
 public:
  GradedOracle(const Qrels& qrels, double sigma, uint64_t seed)
      : qrels_(&qrels), sigma_(sigma), seed_(seed) {
    if (sigma < 0.0) throw ValidationError("graded oracle: sigma must be >= 0");
  }

  double score(const std::string& query_id, const std::string& doc_id) const override {
    double grade = static_cast<double>(qrels_->grade(query_id, doc_id));
    if (sigma_ == 0.0) return grade;
    return grade + sigma_ * seeded_noise(seed_, query_id, doc_id);
  }

 private:
  const Qrels* qrels_;
  double sigma_;
  uint64_t seed_;
};

class LatentLinearOracle : public Ranker {
 public:
  LatentLinearOracle(FeatureFn features, std::vector<double> w, double sigma, uint64_t seed)
      : features_(std::move(features)), w_(std::move(w)), sigma_(sigma), seed_(seed) {
    if (sigma < 0.0) throw ValidationError("latent oracle: sigma must be >= 0");
  }

  double score(const std::string& query_id, const std::string& doc_id) const override {
    auto x = features_(query_id, doc_id);
    if (x.size() != w_.size())
      throw ValidationError("latent oracle: feature dim " + std::to_string(x.size()) +
                            " does not match weight dim " + std::to_string(w_.size()));
    double y = 0.0;
    for (size_t i = 0; i < x.size(); ++i) y += w_[i] * x[i];
    if (sigma_ == 0.0) return y;
    return y + sigma_ * seeded_noise(seed_, query_id, doc_id);
  }

 private:
  FeatureFn features_;
  std::vector<double> w_;
  double sigma_;
  uint64_t seed_;
};

class CachedRanker : public Ranker {
 public:
  explicit CachedRanker(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open cached scores: " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto t1 = line.find('\t');
      auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t2 == std::string::npos)
        throw ParseError("cached scores line " + std::to_string(line_no) +
                         ": expected qid<TAB>did<TAB>score");
      std::string tok = line.substr(t2 + 1);
      double v = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError("cached scores line " + std::to_string(line_no) + ": bad score '" + tok + "'");
      scores_[{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1)}] = v;
    }
  }

  double score(const std::string& query_id, const std::string& doc_id) const override {
    auto it = scores_.find({query_id, doc_id});
    if (it == scores_.end())
      throw LookupError("cached ranker: no score for (" + query_id + ", " + doc_id + ")");
    return it->second;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> scores_;
};

}  // namespace

std::unique_ptr<Ranker> make_graded_oracle(const Qrels& qrels, double sigma, uint64_t seed) {
  return std::make_unique<GradedOracle>(qrels, sigma, seed);
}

std::unique_ptr<Ranker> make_latent_linear_oracle(FeatureFn features, std::vector<double> w,
                                                  double sigma, uint64_t seed) {
  return std::make_unique<LatentLinearOracle>(std::move(features), std::move(w), sigma, seed);
}

std::unique_ptr<Ranker> make_cached_ranker(const std::string& path) {
  return std::make_unique<CachedRanker>(path);
}

}  // namespace ore
