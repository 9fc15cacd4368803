#include "ore/estimator.hpp"

#include <cmath>

#include "ore/errors.hpp"
#include "ore/rng.hpp"

namespace ore {

Estimator::Estimator(int dim, double lambda, uint64_t seed) : dim_(dim), lambda_(lambda) {
  if (dim < 1) throw ValidationError("estimator: dim must be >= 1");
  if (lambda <= 0.0) throw ValidationError("estimator: lambda must be > 0");
  gram_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
  alpha_.resize(dim);
  uint64_t state = rng::mix(seed, 0x0e57a7e5u);
  for (int i = 0; i < dim; ++i) alpha_(i) = rng::uniform01(state);
  // Anchor the ridge to the random start: gram^-1 * moment == alpha0 until
  // data arrives.
  moment_ = lambda * alpha_;
}

void Estimator::accumulate(const std::vector<double>& x, double y) {
  if (static_cast<int>(x.size()) != dim_)
    throw ValidationError("estimator: feature dim " + std::to_string(x.size()) +
                          " does not match " + std::to_string(dim_));
  if (!std::isfinite(y)) throw ValidationError("estimator: non-finite target");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), dim_);
  gram_.noalias() += xv * xv.transpose();
  moment_.noalias() += y * xv;
  ++n_samples_;
}

void Estimator::resolve() { alpha_ = gram_.ldlt().solve(moment_); }

void Estimator::observe(const std::vector<double>& x, double y) {
  accumulate(x, y);
  resolve();
}

void Estimator::observe_batch(const std::vector<std::pair<std::vector<double>, double>>& batch) {
  if (batch.empty()) return;
  for (const auto& [x, y] : batch) accumulate(x, y);
  resolve();
}

double Estimator::est_rel(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw ValidationError("estimator: feature dim " + std::to_string(x.size()) +
                          " does not match " + std::to_string(dim_));
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), dim_);
  return alpha_.dot(xv);
}

double Estimator::estimation_error(
    const std::vector<std::pair<std::vector<double>, double>>& holdout) const {
  if (holdout.empty()) throw ValidationError("estimation_error: empty holdout");
  double sum = 0.0;
  for (const auto& [x, y] : holdout) sum += std::abs(est_rel(x) - y);
  return sum / static_cast<double>(holdout.size());
}

std::vector<double> Estimator::alpha() const {
  return std::vector<double>(alpha_.data(), alpha_.data() + dim_);
}

}  // namespace ore
