#pragma once

#include <Eigen/Dense>

#include "orthojoint/kernel_spec.hpp"

namespace orthojoint {

// Pairwise kernel values between the rows of A (n x D) and B (m x D).
// Rows of the output are computed in parallel; every entry is evaluated by
// the same expression as gram_serial, so both return identical bits.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Single-threaded reference kept for tests and the benchmark.
Eigen::MatrixXd gram_serial(const KernelSpec& spec, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& B);

// 1 / (D * var(features)), the RBF bandwidth used when none is configured.
double default_gamma(const Eigen::MatrixXd& features);

// Replaces gamma == 0 on an RBF KernelSpec with default_gamma(features).
KernelSpec resolve_kernel(const KernelSpec& spec, const Eigen::MatrixXd& features);

// Gram matrix of feature vectors centered on their own class mean in
// feature space: (I - C) K (I - C)^T with C the block-averaging matrix.
Eigen::MatrixXd class_center_gram(const Eigen::MatrixXd& K, const Eigen::VectorXi& classes,
                                  int num_classes);

// The quadratic form M = I + 2 * lambda3 * v v^T, stored as a unit direction
// u and |v|^2 so that huge lambda3 never produces an explicit dense matrix.
class Rank1Metric {
 public:
  static Rank1Metric from_vector(const Eigen::VectorXd& v, double lambda3);
  static Rank1Metric identity(Eigen::Index dim);

  const Eigen::VectorXd& direction() const { return direction_; }
  double lambda3() const { return lambda3_; }
  double norm_sq() const { return norm_sq_; }
  Eigen::Index dim() const { return direction_.size(); }

  // s = 1 + 2 lambda3 |v|^2, the eigenvalue of M along u.
  double scale() const { return 1.0 + 2.0 * lambda3_ * norm_sq_; }

  // w^T M w, split into the component along u and the rest.
  double quadratic(const Eigen::VectorXd& w) const;

  // M^{1/2} w or M^{-1/2} w.
  Eigen::VectorXd apply_sqrt(const Eigen::VectorXd& w, bool inverse) const;

  // lambda3 * (v^T w)^2.
  double coupling(const Eigen::VectorXd& w) const;

 private:
  Eigen::VectorXd direction_;
  double lambda3_ = 0.0;
  double norm_sq_ = 0.0;
};

// Row-wise X * M^{1/2} (or X * M^{-1/2}) via M^{+-1/2} = I + c u u^T.
Eigen::MatrixXd metric_sqrt_apply(const Rank1Metric& m, const Eigen::MatrixXd& X, bool inverse);

}  // namespace orthojoint
