#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ore/features.hpp"

namespace ore {

// Online regularized least squares over feature vectors. alpha starts at a
// seeded random point in [0,1]^dim and the ridge term anchors the solution
// to that starting point, so coordinates with no observed signal keep their
// initial weight. With lambda -> 0+ and enough independent samples the true
// weights are recovered exactly.
class Estimator {
 public:
  Estimator(int dim, double lambda, uint64_t seed);

  void observe(const std::vector<double>& x, double y);
  void observe_batch(const std::vector<std::pair<std::vector<double>, double>>& batch);

  double est_rel(const std::vector<double>& x) const;
  double est_rel(const FeatureVector& x) const { return est_rel(x.values); }

  // Mean absolute error of est_rel against true scores on a holdout.
  double estimation_error(const std::vector<std::pair<std::vector<double>, double>>& holdout) const;

  int dim() const { return dim_; }
  int n_samples() const { return n_samples_; }
  double lambda() const { return lambda_; }
  std::vector<double> alpha() const;

 private:
  void accumulate(const std::vector<double>& x, double y);
  void resolve();

  int dim_;
  double lambda_;
  int n_samples_ = 0;
  Eigen::MatrixXd gram_;     // lambda*I + sum x x^T
  Eigen::VectorXd moment_;   // lambda*alpha0 + sum y x
  Eigen::VectorXd alpha_;
};

}  // namespace ore
