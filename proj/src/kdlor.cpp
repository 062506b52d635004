#include "orthojoint/kdlor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "orthojoint/hinge_qp.hpp"
#include "orthojoint/ordinal.hpp"

namespace orthojoint {

namespace {

void check_classes(const Dataset& d) {
  if (d.classes.size() != d.size()) throw Error(ErrorCode::ShapeMismatch, "scatter: label length");
  for (Eigen::Index i = 0; i < d.classes.size(); ++i) {
    if (d.classes(i) < 1 || d.classes(i) > d.num_classes) {
      throw Error(ErrorCode::InvalidLabel, "scatter: ordinal label out of range");
    }
  }
}

Eigen::VectorXi class_counts(const Dataset& d) {
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(d.num_classes);
  for (Eigen::Index i = 0; i < d.size(); ++i) ++counts(d.classes(i) - 1);
  for (int k = 0; k < d.num_classes; ++k) {
    if (counts(k) == 0) throw Error(ErrorCode::EmptyClass, "EmptyClass(" + std::to_string(k + 1) + ")");
  }
  return counts;
}

// Coordinates y with w^T H w = |y|^2, H = B + lambda3 |v|^2 u u^T, B = S_w + ridge I.
// With B = L L^T and M = I + lambda3 (L^{-1} v)(L^{-1} v)^T we have
// y = M^{1/2} L^T w; the rank-one part never enters a factorization.
class Whitening {
 public:
  Whitening(const ScatterSummary& s, const Rank1Metric& coupling, double ridge) {
    Eigen::MatrixXd B = s.within;
    B.diagonal().array() += ridge;
    llt_.compute(B);
    if (llt_.info() != Eigen::Success) {
      throw Error(ErrorCode::InvalidConfig,
                  "within-class scatter is singular; a positive scatter_ridge is required");
    }
    const Eigen::VectorXd v = coupling.direction() * std::sqrt(coupling.norm_sq());
    const Eigen::VectorXd lv = llt_.matrixL().solve(v);
    metric_ = Rank1Metric::from_vector(lv, 0.5 * coupling.lambda3());
  }

  // Rows of the constraint matrix: d_k^T w = (M^{-1/2} L^{-1} d_k)^T y.
  Eigen::MatrixXd constraint_rows(const Eigen::MatrixXd& diffs) const {
    const Eigen::MatrixXd ld = llt_.matrixL().solve(diffs);
    return metric_sqrt_apply(metric_, ld.transpose(), /*inverse=*/true);
  }

  Eigen::VectorXd weights(const Eigen::VectorXd& y) const {
    return llt_.matrixU().solve(metric_.apply_sqrt(y, /*inverse=*/true));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Rank1Metric metric_ = Rank1Metric::identity(0);
};

}  // namespace

Eigen::MatrixXd ScatterSummary::mean_differences() const {
  const int K = num_classes();
  Eigen::MatrixXd diffs(dim(), std::max(K - 1, 0));
  for (int k = 0; k + 1 < K; ++k) {
    diffs.col(k) = (class_means.row(k + 1) - class_means.row(k)).transpose();
  }
  return diffs;
}

ScatterSummary scatter(const Dataset& d) {
  check_classes(d);
  const int K = d.num_classes;
  const Eigen::Index D = d.dim();
  ScatterSummary s;
  s.counts = class_counts(d);
  s.total = d.size();
  s.class_means = Eigen::MatrixXd::Zero(K, D);

  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(K));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    members[static_cast<std::size_t>(d.classes(i) - 1)].push_back(i);
  }
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(K));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < K; ++k) {
    const auto& rows = members[static_cast<std::size_t>(k)];
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(D);
    for (auto r : rows) mean += d.features.row(r);
    mean /= static_cast<double>(rows.size());
    s.class_means.row(k) = mean;
    Eigen::MatrixXd centered(static_cast<Eigen::Index>(rows.size()), D);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      centered.row(static_cast<Eigen::Index>(j)) = d.features.row(rows[j]) - mean;
    }
    partial[static_cast<std::size_t>(k)] = centered.transpose() * centered;
  }
  s.within = Eigen::MatrixXd::Zero(D, D);
  for (const auto& p : partial) s.within += p;
  s.within /= static_cast<double>(s.total);
  s.within = 0.5 * (s.within + s.within.transpose());
  return s;
}

ScatterSummary scatter_serial(const Dataset& d) {
  check_classes(d);
  const int K = d.num_classes;
  const Eigen::Index D = d.dim();
  ScatterSummary s;
  s.counts = class_counts(d);
  s.total = d.size();
  s.class_means = Eigen::MatrixXd::Zero(K, D);
  for (Eigen::Index i = 0; i < d.size(); ++i) s.class_means.row(d.classes(i) - 1) += d.features.row(i);
  for (int k = 0; k < K; ++k) s.class_means.row(k) /= static_cast<double>(s.counts(k));
  s.within = Eigen::MatrixXd::Zero(D, D);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Eigen::VectorXd dev = (d.features.row(i) - s.class_means.row(d.classes(i) - 1)).transpose();
    for (Eigen::Index p = 0; p < D; ++p)
      for (Eigen::Index q = 0; q < D; ++q) s.within(p, q) += dev(p) * dev(q);
  }
  s.within /= static_cast<double>(s.total);
  return s;
}

double default_scatter_ridge(const ScatterSummary& s) {
  const double tr = s.within.trace();
  if (!(tr > 0.0)) return 1e-6;
  return 1e-6 * tr / static_cast<double>(s.dim());
}

Eigen::MatrixXd kdlor_quadratic(const ScatterSummary& s, const Rank1Metric& coupling, double ridge) {
  Eigen::MatrixXd H = s.within;
  H.diagonal().array() += ridge;
  H += (coupling.lambda3() * coupling.norm_sq()) * coupling.direction() *
       coupling.direction().transpose();
  return H;
}

double kdlor_margin(const Eigen::VectorXd& w, const ScatterSummary& s) {
  if (w.size() != s.dim()) throw Error(ErrorCode::DimMismatch, "kdlor: weight length differs from D");
  const Eigen::MatrixXd diffs = s.mean_differences();
  return (diffs.transpose() * w).minCoeff();
}

double kdlor_objective(const Eigen::VectorXd& w, const ScatterSummary& s, double lambda2,
                       const Rank1Metric& coupling, double ridge) {
  const double quad = w.dot(s.within * w) + ridge * w.squaredNorm() + coupling.coupling(w);
  return quad - lambda2 * kdlor_margin(w, s);
}

KdlorSolution solve_kdlor_linear(const ScatterSummary& s, double lambda2,
                                 const Rank1Metric& coupling, double ridge,
                                 const InnerOptions& opts) {
  const int K = s.num_classes();
  if (K < 2) throw Error(ErrorCode::ShapeMismatch, "kdlor: needs K >= 2");
  if (!(lambda2 > 0.0)) throw Error(ErrorCode::InvalidConfig, "kdlor: lambda2 must be positive");
  if (!(ridge >= 0.0)) throw Error(ErrorCode::InvalidConfig, "kdlor: ridge must be nonnegative");
  if (coupling.dim() != s.dim()) {
    throw Error(ErrorCode::DimMismatch, "kdlor: coupling direction length differs from D");
  }

  const Eigen::MatrixXd diffs = s.mean_differences();
  const double mean_scale = s.class_means.cwiseAbs().maxCoeff() + 1.0;
  for (int k = 0; k + 1 < K; ++k) {
    if (diffs.col(k).norm() <= 1e-12 * mean_scale) {
      throw Error(ErrorCode::DegenerateMeans, "DegenerateMeans: classes " + std::to_string(k + 1) +
                                                  " and " + std::to_string(k + 2) +
                                                  " have coinciding means");
    }
  }

  // Primal in whitened coordinates z = (y, rho):
  // min |y|^2 - lambda2 rho  s.t.  g_k^T y - rho >= 0.
  const Whitening white(s, coupling, ridge);
  const Eigen::MatrixXd rows = white.constraint_rows(diffs);
  const int T = K - 1;
  const Eigen::Index D = s.dim();
  HingeQp qp;
  qp.q = Eigen::VectorXd::Constant(D + 1, 2.0);
  qp.q(D) = 0.0;
  qp.lin = Eigen::VectorXd::Zero(D + 1);
  qp.lin(D) = -lambda2;
  qp.A = Eigen::MatrixXd::Zero(0, D + 1);
  qp.h = Eigen::VectorXd::Zero(0);
  qp.c = Eigen::VectorXd::Zero(0);
  qp.G.resize(T, D + 1);
  qp.G.leftCols(D) = rows;
  qp.G.col(D).setConstant(-1.0);
  qp.e = Eigen::VectorXd::Zero(T);

  const int cap = opts.max_iter > 0 ? static_cast<int>(opts.max_iter) : 200;
  const HingeQpResult r = solve_hinge_qp(qp, std::min(opts.tol, 1e-8), cap);
  if (!(r.merit <= kHingeQpAcceptMerit)) {
    throw Error(ErrorCode::NoConvergence,
                "NoConvergence(" + std::to_string(r.iterations) + ") in kdlor interior point");
  }
  const Eigen::VectorXd a = r.hard_duals;
  const long iter = r.iterations;

  KdlorSolution sol;
  sol.multipliers = a;
  sol.w_a = white.weights(r.z.head(D));
  sol.rho = (diffs.transpose() * sol.w_a).minCoeff();
  if (!(sol.rho > 0.0) || !sol.w_a.allFinite()) {
    throw Error(ErrorCode::DegenerateMeans,
                "DegenerateMeans: no direction separates consecutive class means");
  }
  sol.thresholds = derive_thresholds(sol.w_a, s);
  sol.ridge = ridge;
  sol.iterations = iter;
  sol.objective = kdlor_objective(sol.w_a, s, lambda2, coupling, ridge);
  return sol;
}

Eigen::VectorXd derive_thresholds(const Eigen::VectorXd& w_a, const ScatterSummary& s) {
  const Eigen::VectorXd projected = s.class_means * w_a;
  Eigen::VectorXd b(std::max<Eigen::Index>(projected.size() - 1, 0));
  for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = 0.5 * (projected(k) + projected(k + 1));
  return b;
}

KdlorSolution solve_kdlor_kernel(const Dataset& d, const EmpiricalFeatureMap& map, double lambda2,
                                 const Eigen::VectorXd& alpha_coupling, double lambda3,
                                 double ridge, const InnerOptions& opts) {
  if (map.features().rows() != d.size() || alpha_coupling.size() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "kdlor kernel: Gram / coefficient size differs from N");
  }
  const ScatterSummary s = scatter(d.with_features(map.features()));
  const double eff_ridge = ridge < 0.0 ? default_scatter_ridge(s) : ridge;
  const Rank1Metric coupling = Rank1Metric::from_vector(map.to_weights(alpha_coupling), lambda3);
  KdlorSolution sol = solve_kdlor_linear(s, lambda2, coupling, eff_ridge, opts);
  sol.beta = map.to_coefficients(sol.w_a);
  return sol;
}

KdlorSolution solve_kdlor_kernel(const Dataset& d, const Eigen::MatrixXd& K, double lambda2,
                                 const Eigen::VectorXd& alpha_coupling, double lambda3,
                                 double ridge, const InnerOptions& opts) {
  if (K.rows() != d.size() || K.cols() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "kdlor kernel: Gram must be N x N");
  }
  return solve_kdlor_kernel(d, EmpiricalFeatureMap(K), lambda2, alpha_coupling, lambda3, ridge,
                            opts);
}

Eigen::VectorXi predict_ordinal_kdlor(const JointLinearModel& m, const Eigen::MatrixXd& X) {
  return classes_from_projection(ordinal_projection(m, X), m.thresholds);
}

Eigen::VectorXi predict_ordinal_kdlor(const JointKernelModel& m, const Eigen::MatrixXd& X) {
  return classes_from_projection(ordinal_projection(m, X), m.thresholds);
}

}  // namespace orthojoint
