#pragma once

#include <Eigen/Dense>

namespace orthojoint {

// Finite-dimensional feature map of a training Gram matrix:
// K = V L V^T, features = V L^{1/2} (eigenvalues below rel_cutoff * max
// dropped). A weight vector w in that space corresponds to the representer
// coefficients alpha = V L^{-1/2} w, with K alpha = features * w.
class EmpiricalFeatureMap {
 public:
  explicit EmpiricalFeatureMap(const Eigen::MatrixXd& K, double rel_cutoff = 1e-10);

  const Eigen::MatrixXd& features() const { return features_; }
  Eigen::Index rank() const { return features_.cols(); }

  Eigen::VectorXd to_coefficients(const Eigen::VectorXd& w) const;
  // Minimum-norm preimage direction: w = features^T alpha.
  Eigen::VectorXd to_weights(const Eigen::VectorXd& alpha) const;

 private:
  Eigen::MatrixXd vectors_;       // N x r
  Eigen::VectorXd sqrt_values_;   // r
  Eigen::MatrixXd features_;      // N x r
};

}  // namespace orthojoint
