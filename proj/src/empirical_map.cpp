#include "orthojoint/empirical_map.hpp"

#include <cmath>

#include "orthojoint/error.hpp"

namespace orthojoint {

EmpiricalFeatureMap::EmpiricalFeatureMap(const Eigen::MatrixXd& K, double rel_cutoff) {
  if (K.rows() != K.cols() || K.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "empirical feature map needs a square Gram matrix");
  }
  const Eigen::MatrixXd sym = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eigendecomposition of the Gram matrix failed");
  }
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double top = values.maxCoeff();
  if (!(top > 0.0)) throw Error(ErrorCode::ZeroVector, "Gram matrix has no positive eigenvalue");
  const double cutoff = rel_cutoff * top;
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) > cutoff) ++keep;

  vectors_.resize(K.rows(), keep);
  sqrt_values_.resize(keep);
  // Largest eigenvalue first.
  Eigen::Index col = 0;
  for (Eigen::Index i = values.size() - 1; i >= 0 && col < keep; --i) {
    if (values(i) <= cutoff) continue;
    vectors_.col(col) = eig.eigenvectors().col(i);
    sqrt_values_(col) = std::sqrt(values(i));
    ++col;
  }
  features_ = vectors_ * sqrt_values_.asDiagonal();
}

Eigen::VectorXd EmpiricalFeatureMap::to_coefficients(const Eigen::VectorXd& w) const {
  if (w.size() != rank()) throw Error(ErrorCode::DimMismatch, "weight length differs from map rank");
  return vectors_ * w.cwiseQuotient(sqrt_values_);
}

Eigen::VectorXd EmpiricalFeatureMap::to_weights(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != vectors_.rows()) {
    throw Error(ErrorCode::DimMismatch, "coefficient length differs from N");
  }
  return features_.transpose() * alpha;
}

}  // namespace orthojoint
