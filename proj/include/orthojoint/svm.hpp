#pragma once

#include <Eigen/Dense>

#include "orthojoint/core.hpp"
#include "orthojoint/empirical_map.hpp"
#include "orthojoint/kernels.hpp"

namespace orthojoint {

struct SvmSolution {
  Eigen::VectorXd w;      // linear path
  Eigen::VectorXd alpha;  // kernel path
  double b = 0.0;
  double primal_objective = 0.0;
  long iterations = 0;
};

// sum_i max(0, 1 - y_i (w^T x_i + b))
double hinge_total(const Eigen::VectorXd& w, double b, const Dataset& d);
// Same sum for precomputed scores s_i (the hinge is on y_i (s_i + b)).
double hinge_total_scores(const Eigen::VectorXd& scores, double b, const Eigen::VectorXi& y);

// 1/2 w^T M w + lambda1 * hinge_total(w, b, d)
double svm_linear_objective(const Eigen::VectorXd& w, double b, const Dataset& d, double lambda1,
                            const Rank1Metric& coupling);

// Minimizes 1/2 w^T (I + 2 lambda3 v v^T) w + lambda1 * sum hinge by solving
// the standard SVM on features x M^{-1/2} and mapping the weight back. When
// SMO exhausts its iteration cap the primal is solved by interior point.
SvmSolution solve_svm_linear(const Dataset& d, double lambda1, const Rank1Metric& coupling,
                             const InnerOptions& opts = {});

// Kernel form: 1/2 a^T K a + lambda1 * sum hinge(y_i (K a + b)_i)
//   + lambda3 (a^T K beta)^2, solved exactly in the empirical feature space.
SvmSolution solve_svm_kernel(const Dataset& d, double lambda1, const Eigen::MatrixXd& K,
                             const Eigen::VectorXd& beta_coupling, double lambda3,
                             const InnerOptions& opts = {});
SvmSolution solve_svm_kernel(const Dataset& d, double lambda1, const EmpiricalFeatureMap& map,
                             const Eigen::VectorXd& beta_coupling, double lambda3,
                             const InnerOptions& opts = {});

// sign with ties resolved to +1
Eigen::VectorXi sign_labels(const Eigen::VectorXd& decision);

Eigen::VectorXd gender_decision(const JointLinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd gender_decision(const JointKernelModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_binary(const JointLinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_binary(const JointKernelModel& m, const Eigen::MatrixXd& X);

}  // namespace orthojoint
