#include "naive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qp_oracle.hpp"

namespace oracle {

using orthojoint::Dataset;

double naive_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  int hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) hit++;
  return double(hit) / double(pred.size());
}

double naive_mae(const std::vector<double>& pred, const std::vector<double>& truth) {
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::fabs(pred[i] - truth[i]);
  return s / double(pred.size());
}

Eigen::MatrixXd naive_class_means(const Dataset& d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.num_classes, d.dim());
  std::vector<int> n(d.num_classes, 0);
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.dim(); ++j) m(d.classes(i) - 1, j) += d.features(i, j);
    n[d.classes(i) - 1]++;
  }
  for (int k = 0; k < d.num_classes; ++k) m.row(k) /= n[k];
  return m;
}

Eigen::MatrixXd naive_within_scatter(const Dataset& d) {
  const Eigen::MatrixXd m = naive_class_means(d);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d.dim(), d.dim());
  for (int i = 0; i < d.size(); ++i)
    for (int p = 0; p < d.dim(); ++p)
      for (int q = 0; q < d.dim(); ++q)
        S(p, q) += (d.features(i, p) - m(d.classes(i) - 1, p)) * (d.features(i, q) - m(d.classes(i) - 1, q));
  return S / d.size();
}

Eigen::MatrixXd naive_gram(const orthojoint::KernelSpec& k, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& B) {
  Eigen::MatrixXd G(A.rows(), B.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < B.rows(); ++j) {
      double v = 0;
      if (k.kind == orthojoint::KernelKind::Linear) {
        for (int t = 0; t < A.cols(); ++t) v += A(i, t) * B(j, t);
      } else {
        for (int t = 0; t < A.cols(); ++t) v += (A(i, t) - B(j, t)) * (A(i, t) - B(j, t));
        v = std::exp(-k.gamma * v);
      }
      G(i, j) = v;
    }
  return G;
}

double naive_svm_objective(const Dataset& d, const Eigen::VectorXd& w, double b, double lambda1,
                           const Eigen::VectorXd& v, double lambda3) {
  double hinge = 0;
  for (int i = 0; i < d.size(); ++i) {
    double f = b;
    for (int j = 0; j < d.dim(); ++j) f += w(j) * d.features(i, j);
    hinge += std::max(0.0, 1.0 - d.genders(i) * f);
  }
  const double vw = v.dot(w);
  return 0.5 * w.squaredNorm() + lambda3 * vw * vw + lambda1 * hinge;
}

double naive_svor_objective(const Dataset& d, const Eigen::VectorXd& w, const Eigen::VectorXd& b,
                            double lambda2, const Eigen::VectorXd& v, double lambda3) {
  double slack = 0;
  for (int i = 0; i < d.size(); ++i) {
    double f = 0;
    for (int j = 0; j < d.dim(); ++j) f += w(j) * d.features(i, j);
    const int c = d.classes(i);
    if (c < d.num_classes) slack += std::max(0.0, 1.0 - (b(c - 1) - f));
    if (c > 1) slack += std::max(0.0, 1.0 - (f - b(c - 2)));
  }
  const double vw = v.dot(w);
  return 0.5 * w.squaredNorm() + lambda3 * vw * vw + lambda2 * slack;
}

Dataset random_dataset(std::mt19937_64& rng, int n, int dim, int num_classes, double shift) {
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> cls(1, num_classes);
  Eigen::VectorXd dir(dim);
  for (int j = 0; j < dim; ++j) dir(j) = nd(rng);
  dir.normalize();
  Eigen::MatrixXd X(n, dim);
  Eigen::VectorXi g(n), k(n);
  for (int i = 0; i < n; ++i) {
    k(i) = i < num_classes ? 1 + i : cls(rng);
    g(i) = i % 2 == 0 ? -1 : 1;
    for (int j = 0; j < dim; ++j) X(i, j) = nd(rng) + shift * k(i) * dir(j);
  }
  return orthojoint::make_dataset(X, g, k, num_classes);
}

double Stationarity::total() const { return std::sqrt(alpha * alpha + beta * beta); }

namespace {

// min over a of (c + B a)^T W (c + B a) + |e + F a|^2 with lo <= a <= hi and,
// when simplex is set, sum a = 1. Returns the square root of the minimum,
// recomputed from the minimizer.
double min_residual(const Eigen::VectorXd& c, const Eigen::MatrixXd& B, const Eigen::MatrixXd& W,
                    const Eigen::VectorXd& e, const Eigen::MatrixXd& F, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, bool simplex) {
  const Eigen::Index n = lo.size();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  if (n > 0) {
    DenseQp qp;
    qp.P = 2.0 * (B.transpose() * W * B + F.transpose() * F);
    qp.q = 2.0 * (B.transpose() * W * c + F.transpose() * e);
    std::vector<std::pair<Eigen::Index, double>> lower, upper;
    int rows = 0;
    for (Eigen::Index i = 0; i < n; ++i) rows += 1 + (std::isfinite(hi(i)) ? 1 : 0);
    qp.C = Eigen::MatrixXd::Zero(rows, n);
    qp.d = Eigen::VectorXd::Zero(rows);
    int r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      qp.C(r, i) = 1.0;
      qp.d(r++) = lo(i);
      if (std::isfinite(hi(i))) {
        qp.C(r, i) = -1.0;
        qp.d(r++) = -hi(i);
      }
    }
    if (simplex) {
      qp.E = Eigen::MatrixXd::Ones(1, n);
      qp.f = Eigen::VectorXd::Ones(1);
    }
    a = solve_dense_qp(qp).x;
  }
  const Eigen::VectorXd r = c + B * a;
  const Eigen::VectorXd s = e + F * a;
  return std::sqrt(std::max(0.0, r.dot(W * r)) + s.squaredNorm());
}

}  // namespace

Stationarity kernel_stationarity(const orthojoint::JointKernelModel& m, const Dataset& d,
                                 const orthojoint::TrainConfig& cfg, double margin_tol) {
  const int N = d.size();
  const Eigen::MatrixXd K = naive_gram(m.kernel, d.features, d.features);
  const Eigen::VectorXd Ka = K * m.alpha;
  const Eigen::VectorXd Kb = K * m.beta;
  const double inner = m.alpha.dot(Kb);
  const double inf = std::numeric_limits<double>::infinity();
  Stationarity out;

  {  // alpha block, with the intercept as an extra coordinate
    Eigen::VectorXd c = m.alpha + 2.0 * cfg.lambda3 * inner * m.beta;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(1);
    std::vector<int> free;
    for (int i = 0; i < N; ++i) {
      const double y = d.genders(i);
      const double margin = y * (Ka(i) + m.b_g);
      if (margin < 1.0 - margin_tol) {
        c(i) -= cfg.lambda1 * y;
        e(0) -= cfg.lambda1 * y;
      } else if (margin <= 1.0 + margin_tol) {
        free.push_back(i);
      }
    }
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, nf), F = Eigen::MatrixXd::Zero(1, nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
      const double y = d.genders(free[j]);
      B(free[j], j) = -y;
      F(0, j) = -y;
    }
    out.alpha = min_residual(c, B, K, e, F, Eigen::VectorXd::Zero(nf),
                             Eigen::VectorXd::Constant(nf, cfg.lambda1), false);
  }

  const int T = d.num_classes - 1;
  if (m.method == orthojoint::OrdinalMethod::Svor) {
    // beta block plus thresholds; pair multipliers in [0, lambda2], ordering
    // multipliers >= 0 on tied thresholds.
    Eigen::VectorXd c = m.beta + 2.0 * cfg.lambda3 * inner * m.alpha;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(T);
    std::vector<Eigen::VectorXd> bcols, fcols;
    std::vector<double> his;
    auto pair = [&](int i, int t, double sgn, double slack) {
      // sgn = +1 for the upper pair (slack 1 + f - b_t), -1 for the lower one
      Eigen::VectorXd bc = Eigen::VectorXd::Zero(N), fc = Eigen::VectorXd::Zero(T);
      bc(i) = sgn;
      fc(t) = -sgn;
      if (slack > margin_tol) {
        c += cfg.lambda2 * bc;
        e += cfg.lambda2 * fc;
      } else if (slack >= -margin_tol) {
        bcols.push_back(bc);
        fcols.push_back(fc);
        his.push_back(cfg.lambda2);
      }
    };
    for (int i = 0; i < N; ++i) {
      const int j = d.classes(i);
      if (j <= T) pair(i, j - 1, +1.0, 1.0 + Kb(i) - m.thresholds(j - 1));
      if (j > 1) pair(i, j - 2, -1.0, 1.0 - Kb(i) + m.thresholds(j - 2));
    }
    for (int t = 0; t + 1 < T; ++t) {
      if (m.thresholds(t + 1) - m.thresholds(t) <= margin_tol * (1.0 + std::fabs(m.thresholds(t)))) {
        Eigen::VectorXd fc = Eigen::VectorXd::Zero(T);
        fc(t) = 1.0;
        fc(t + 1) = -1.0;
        bcols.push_back(Eigen::VectorXd::Zero(N));
        fcols.push_back(fc);
        his.push_back(inf);
      }
    }
    const auto nf = static_cast<Eigen::Index>(his.size());
    Eigen::MatrixXd B(N, nf), F(T, nf);
    Eigen::VectorXd hi(nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
      B.col(j) = bcols[j];
      F.col(j) = fcols[j];
      hi(j) = his[j];
    }
    out.beta = min_residual(c, B, K, e, F, Eigen::VectorXd::Zero(nf), hi, false);
  } else {
    // (2/N)(I - C) K beta + 2 ridge beta + coupling - lambda2 sum_k theta_k (c_{k+1} - c_k)
    std::vector<int> counts(d.num_classes, 0);
    for (int i = 0; i < N; ++i) counts[d.classes(i) - 1]++;
    Eigen::VectorXd class_mean = Eigen::VectorXd::Zero(d.num_classes);
    for (int i = 0; i < N; ++i) class_mean(d.classes(i) - 1) += Kb(i) / counts[d.classes(i) - 1];
    Eigen::VectorXd c = 2.0 * m.scatter_ridge * m.beta + 2.0 * cfg.lambda3 * inner * m.alpha;
    for (int i = 0; i < N; ++i) c(i) += 2.0 / N * (Kb(i) - class_mean(d.classes(i) - 1));
    Eigen::VectorXd gaps(T);
    for (int t = 0; t < T; ++t) gaps(t) = class_mean(t + 1) - class_mean(t);
    const double rho = gaps.minCoeff();
    std::vector<Eigen::VectorXd> cols;
    for (int t = 0; t < T; ++t) {
      if (gaps(t) - rho > margin_tol * (1.0 + std::fabs(rho))) continue;
      Eigen::VectorXd col = Eigen::VectorXd::Zero(N);
      for (int i = 0; i < N; ++i) {
        if (d.classes(i) == t + 2) col(i) -= cfg.lambda2 / counts[t + 1];
        if (d.classes(i) == t + 1) col(i) += cfg.lambda2 / counts[t];
      }
      cols.push_back(col);
    }
    const auto nf = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd B(N, nf);
    for (Eigen::Index j = 0; j < nf; ++j) B.col(j) = cols[j];
    out.beta = min_residual(c, B, K, Eigen::VectorXd::Zero(0), Eigen::MatrixXd::Zero(0, nf),
                            Eigen::VectorXd::Zero(nf), Eigen::VectorXd::Constant(nf, inf), true);
  }
  return out;
}

}  // namespace oracle
