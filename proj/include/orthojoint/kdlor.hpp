#pragma once

#include <Eigen/Dense>

#include "orthojoint/core.hpp"
#include "orthojoint/empirical_map.hpp"
#include "orthojoint/kernels.hpp"

namespace orthojoint {

struct ScatterSummary {
  Eigen::MatrixXd within;       // S_w = 1/N sum_k sum_{x in X_k} (x - m_k)(x - m_k)^T
  Eigen::MatrixXd class_means;  // K x D
  Eigen::VectorXi counts;       // K
  int total = 0;

  int num_classes() const { return static_cast<int>(class_means.rows()); }
  int dim() const { return static_cast<int>(class_means.cols()); }
  // D x (K-1), column k is m_{k+1} - m_k.
  Eigen::MatrixXd mean_differences() const;
};

// Per-class partial sums are formed in parallel and reduced in class order.
ScatterSummary scatter(const Dataset& d);
// Sample-by-sample reference used by tests and the benchmark.
ScatterSummary scatter_serial(const Dataset& d);

// 1e-6 * trace(S_w) / D (1e-6 when the scatter vanishes).
double default_scatter_ridge(const ScatterSummary& s);

struct KdlorSolution {
  Eigen::VectorXd w_a;          // linear path (or the empirical-space weight)
  Eigen::VectorXd beta;         // kernel path
  double rho = 0.0;
  Eigen::VectorXd thresholds;   // K-1
  Eigen::VectorXd multipliers;  // K-1, >= 0, summing to lambda2
  double objective = 0.0;       // w^T H w - lambda2 * rho
  double ridge = 0.0;
  long iterations = 0;
};

// H = S_w + lambda3 |v|^2 u u^T + ridge * I, formed densely (tests only need it).
Eigen::MatrixXd kdlor_quadratic(const ScatterSummary& s, const Rank1Metric& coupling, double ridge);

// min_k w^T (m_{k+1} - m_k), the largest margin feasible for a fixed w.
double kdlor_margin(const Eigen::VectorXd& w, const ScatterSummary& s);

// w^T (S_w + ridge I) w + lambda3 (v^T w)^2 - lambda2 * kdlor_margin(w).
double kdlor_objective(const Eigen::VectorXd& w, const ScatterSummary& s, double lambda2,
                       const Rank1Metric& coupling, double ridge);

// Minimizes w^T H w - lambda2 rho s.t. w^T (m_{k+1} - m_k) >= rho with a
// primal interior point method in coordinates where H becomes the identity.
// The constraint multipliers sum to lambda2.
KdlorSolution solve_kdlor_linear(const ScatterSummary& s, double lambda2,
                                 const Rank1Metric& coupling, double ridge,
                                 const InnerOptions& opts = {});

// Midpoints of consecutive projected class means.
Eigen::VectorXd derive_thresholds(const Eigen::VectorXd& w_a, const ScatterSummary& s);

// Kernel form: quadratic (1/N) beta^T K (I - C) K beta + ridge * beta^T K beta
//   + lambda3 (alpha^T K beta)^2, constraints on beta^T K (c_{k+1} - c_k).
// A negative ridge selects default_scatter_ridge in the empirical space.
KdlorSolution solve_kdlor_kernel(const Dataset& d, const Eigen::MatrixXd& K, double lambda2,
                                 const Eigen::VectorXd& alpha_coupling, double lambda3,
                                 double ridge = -1.0, const InnerOptions& opts = {});
KdlorSolution solve_kdlor_kernel(const Dataset& d, const EmpiricalFeatureMap& map, double lambda2,
                                 const Eigen::VectorXd& alpha_coupling, double lambda3,
                                 double ridge = -1.0, const InnerOptions& opts = {});

Eigen::VectorXi predict_ordinal_kdlor(const JointLinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_ordinal_kdlor(const JointKernelModel& m, const Eigen::MatrixXd& X);

}  // namespace orthojoint
