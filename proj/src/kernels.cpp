#include "orthojoint/kernels.hpp"

#include <cmath>
#include <string>

#include "orthojoint/error.hpp"

namespace orthojoint {

namespace {

void check_dims(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols()) {
    throw Error(ErrorCode::DimMismatch, "gram: column counts differ (" + std::to_string(A.cols()) +
                                            " vs " + std::to_string(B.cols()) + ")");
  }
}

void check_spec(const KernelSpec& spec) {
  if (spec.kind == KernelKind::Rbf && !(spec.gamma > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "rbf kernel needs gamma > 0");
  }
}

inline double kernel_entry(const KernelSpec& spec, const Eigen::MatrixXd& A, Eigen::Index i,
                           const Eigen::MatrixXd& B, Eigen::Index j) {
  if (spec.kind == KernelKind::Linear) return A.row(i).dot(B.row(j));
  return std::exp(-spec.gamma * (A.row(i) - B.row(j)).squaredNorm());
}

}  // namespace

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  check_dims(A, B);
  check_spec(spec);
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.rows();
  Eigen::MatrixXd K(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) K(i, j) = kernel_entry(spec, A, i, B, j);
  }
  return K;
}

Eigen::MatrixXd gram_serial(const KernelSpec& spec, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& B) {
  check_dims(A, B);
  check_spec(spec);
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) K(i, j) = kernel_entry(spec, A, i, B, j);
  }
  return K;
}

double default_gamma(const Eigen::MatrixXd& features) {
  const double count = static_cast<double>(features.size());
  if (count < 2) return 1.0;
  const double mean = features.mean();
  const double var = (features.array() - mean).square().sum() / count;
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(features.cols()) * var);
}

KernelSpec resolve_kernel(const KernelSpec& spec, const Eigen::MatrixXd& features) {
  KernelSpec out = spec;
  if (out.kind == KernelKind::Rbf && out.gamma == 0.0) out.gamma = default_gamma(features);
  return out;
}

Eigen::MatrixXd class_center_gram(const Eigen::MatrixXd& K, const Eigen::VectorXi& classes,
                                  int num_classes) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n || classes.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "class_center_gram: K must be N x N with N labels");
  }
  // (I - C) K (I - C)^T entrywise: K_ij - rowmean_{c(j)}(K_i.) - colmean_{c(i)}(K_.j)
  // + blockmean_{c(i), c(j)}(K).
  std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = classes(i);
    if (k < 1 || k > num_classes) {
      throw Error(ErrorCode::InvalidLabel, "class_center_gram: label out of range");
    }
    counts[static_cast<std::size_t>(k - 1)] += 1.0;
  }
  Eigen::MatrixXd row_class_mean = Eigen::MatrixXd::Zero(n, num_classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) row_class_mean(i, classes(j) - 1) += K(i, j);
  }
  for (int k = 0; k < num_classes; ++k) {
    row_class_mean.col(k) /= counts[static_cast<std::size_t>(k)];
  }
  Eigen::MatrixXd block_mean = Eigen::MatrixXd::Zero(num_classes, num_classes);
  for (Eigen::Index i = 0; i < n; ++i) block_mean.row(classes(i) - 1) += row_class_mean.row(i);
  for (int k = 0; k < num_classes; ++k) block_mean.row(k) /= counts[static_cast<std::size_t>(k)];

  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const int ci = classes(i) - 1;
      const int cj = classes(j) - 1;
      out(i, j) = K(i, j) - row_class_mean(i, cj) - row_class_mean(j, ci) + block_mean(ci, cj);
    }
  }
  return out;
}

Rank1Metric Rank1Metric::from_vector(const Eigen::VectorXd& v, double lambda3) {
  if (!(lambda3 >= 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda3 must be nonnegative");
  Rank1Metric m;
  m.lambda3_ = lambda3;
  const double norm = v.norm();
  if (norm > 0.0 && std::isfinite(norm)) {
    m.direction_ = v / norm;
    m.norm_sq_ = norm * norm;
  } else {
    m.direction_ = Eigen::VectorXd::Zero(v.size());
    if (v.size() > 0) m.direction_(0) = 1.0;
    m.norm_sq_ = 0.0;
  }
  return m;
}

Rank1Metric Rank1Metric::identity(Eigen::Index dim) {
  return from_vector(Eigen::VectorXd::Zero(dim), 0.0);
}

double Rank1Metric::quadratic(const Eigen::VectorXd& w) const {
  const double along = direction_.dot(w);
  const double rest = (w - along * direction_).squaredNorm();
  return rest + scale() * along * along;
}

Eigen::VectorXd Rank1Metric::apply_sqrt(const Eigen::VectorXd& w, bool inverse) const {
  const double along = direction_.dot(w);
  const double root = std::sqrt(scale());
  const double factor = inverse ? 1.0 / root : root;
  // Orthogonal part stays, the part along u is rescaled.
  return (w - along * direction_) + (factor * along) * direction_;
}

double Rank1Metric::coupling(const Eigen::VectorXd& w) const {
  const double along = direction_.dot(w);
  return lambda3_ * norm_sq_ * along * along;
}

Eigen::MatrixXd metric_sqrt_apply(const Rank1Metric& m, const Eigen::MatrixXd& X, bool inverse) {
  if (X.cols() != m.dim()) {
    throw Error(ErrorCode::DimMismatch, "metric_sqrt_apply: direction length does not match D");
  }
  const double root = std::sqrt(m.scale());
  const double factor = inverse ? 1.0 / root : root;
  const Eigen::VectorXd along = X * m.direction();
  Eigen::MatrixXd out = X - along * m.direction().transpose();
  out += (factor * along) * m.direction().transpose();
  return out;
}

}  // namespace orthojoint
