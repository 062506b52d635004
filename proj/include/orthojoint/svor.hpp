#pragma once

#include <Eigen/Dense>

#include "orthojoint/core.hpp"
#include "orthojoint/empirical_map.hpp"
#include "orthojoint/kernels.hpp"

namespace orthojoint {

struct SvorSolution {
  Eigen::VectorXd w_a;         // linear path (or the empirical-space weight)
  Eigen::VectorXd beta;        // kernel path
  Eigen::VectorXd thresholds;  // b_1 <= ... <= b_{K-1}
  // Per-sample slacks; the upper one is 0 for class K and the lower one 0
  // for class 1, where the corresponding threshold does not exist.
  Eigen::VectorXd slack_upper;
  Eigen::VectorXd slack_lower;
  double primal_objective = 0.0;
  long iterations = 0;
};

// Slacks of every (sample, adjacent threshold) constraint for given scores:
// class j needs score <= b_j - 1 (j < K) and score >= b_{j-1} + 1 (j > 1).
void svor_slacks(const Eigen::VectorXd& scores, const Eigen::VectorXd& thresholds,
                 const Eigen::VectorXi& classes, int num_classes, Eigen::VectorXd& upper,
                 Eigen::VectorXd& lower);
double svor_slack_total(const Eigen::VectorXd& scores, const Eigen::VectorXd& thresholds,
                        const Eigen::VectorXi& classes, int num_classes);

// 1/2 w^T M w + lambda2 * sum of slacks
double svor_linear_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& thresholds,
                             const Dataset& d, double lambda2, const Rank1Metric& coupling);

// Explicit-threshold support vector ordinal regression under the metric
// M = I + 2 lambda3 v v^T, solved on features x M^{-1/2} as a primal
// interior point problem over (w, b) with ordered thresholds.
SvorSolution solve_svor_linear(const Dataset& d, double lambda2, const Rank1Metric& coupling,
                               const InnerOptions& opts = {});

SvorSolution solve_svor_kernel(const Dataset& d, const Eigen::MatrixXd& K, double lambda2,
                               const Eigen::VectorXd& alpha_coupling, double lambda3,
                               const InnerOptions& opts = {});
SvorSolution solve_svor_kernel(const Dataset& d, const EmpiricalFeatureMap& map, double lambda2,
                               const Eigen::VectorXd& alpha_coupling, double lambda3,
                               const InnerOptions& opts = {});

Eigen::VectorXi predict_ordinal_svor(const JointLinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_ordinal_svor(const JointKernelModel& m, const Eigen::MatrixXd& X);

}  // namespace orthojoint
