#include "orthojoint/svm.hpp"

#include <algorithm>
#include <string>

#include "orthojoint/hinge_qp.hpp"
#include "orthojoint/smo.hpp"

namespace orthojoint {

namespace {

long svm_iteration_cap(const InnerOptions& opts, Eigen::Index n) {
  return opts.max_iter > 0 ? opts.max_iter : 1000L * static_cast<long>(n);
}

// z = (w, b): y_i (x_i.w + b) + xi_i >= 1
HingeQpResult solve_primal(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double lambda1,
                           double tol) {
  const Eigen::Index n = X.rows();
  const Eigen::Index D = X.cols();
  HingeQp qp;
  qp.q = Eigen::VectorXd::Ones(D + 1);
  qp.q(D) = 0.0;
  qp.A.resize(n, D + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    qp.A.row(i).head(D) = y(i) * X.row(i);
    qp.A(i, D) = y(i);
  }
  qp.h = Eigen::VectorXd::Ones(n);
  qp.c = Eigen::VectorXd::Constant(n, lambda1);
  qp.G.resize(0, D + 1);
  qp.e.resize(0);
  return solve_hinge_qp(qp, std::min(tol, 1e-8));
}

}  // namespace

double hinge_total_scores(const Eigen::VectorXd& scores, double b, const Eigen::VectorXi& y) {
  if (scores.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "hinge: length mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    total += std::max(0.0, 1.0 - y(i) * (scores(i) + b));
  }
  return total;
}

double hinge_total(const Eigen::VectorXd& w, double b, const Dataset& d) {
  if (w.size() != d.dim()) throw Error(ErrorCode::DimMismatch, "hinge: weight length differs from D");
  return hinge_total_scores(d.features * w, b, d.genders);
}

double svm_linear_objective(const Eigen::VectorXd& w, double b, const Dataset& d, double lambda1,
                            const Rank1Metric& coupling) {
  return 0.5 * coupling.quadratic(w) + lambda1 * hinge_total(w, b, d);
}

SvmSolution solve_svm_linear(const Dataset& d, double lambda1, const Rank1Metric& coupling,
                             const InnerOptions& opts) {
  require_valid(d);
  if (!(lambda1 > 0.0)) throw Error(ErrorCode::InvalidConfig, "svm: lambda1 must be positive");
  if (coupling.dim() != d.dim()) {
    throw Error(ErrorCode::DimMismatch, "svm: coupling direction length differs from D");
  }
  const Eigen::MatrixXd Xt = metric_sqrt_apply(coupling, d.features, /*inverse=*/true);
  const Eigen::MatrixXd G = Xt * Xt.transpose();
  const long cap = svm_iteration_cap(opts, d.size());
  SmoResult dual = solve_svm_dual(G, d.genders, lambda1, opts.tol, cap);

  SvmSolution sol;
  if (dual.converged) {
    const Eigen::VectorXd ay = dual.a.cwiseProduct(d.genders.cast<double>());
    sol.w = coupling.apply_sqrt(Xt.transpose() * ay, /*inverse=*/true);
    sol.b = dual.b;
  } else {
    // SMO crawls on nearly rank-deficient Gram matrices; solve the primal instead.
    const HingeQpResult r = solve_primal(Xt, d.genders, lambda1, opts.tol);
    if (!(r.merit <= kHingeQpAcceptMerit)) {
      throw Error(ErrorCode::NoConvergence,
                  "NoConvergence(" + std::to_string(dual.iterations) + ") in svm dual and primal");
    }
    sol.w = coupling.apply_sqrt(r.z.head(Xt.cols()), /*inverse=*/true);
    sol.b = r.z(Xt.cols());
  }
  sol.iterations = dual.iterations;
  sol.primal_objective = svm_linear_objective(sol.w, sol.b, d, lambda1, coupling);
  return sol;
}

SvmSolution solve_svm_kernel(const Dataset& d, double lambda1, const EmpiricalFeatureMap& map,
                             const Eigen::VectorXd& beta_coupling, double lambda3,
                             const InnerOptions& opts) {
  if (map.features().rows() != d.size() || beta_coupling.size() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "svm kernel: Gram / coefficient size differs from N");
  }
  const Dataset mapped = d.with_features(map.features());
  const Rank1Metric coupling = Rank1Metric::from_vector(map.to_weights(beta_coupling), lambda3);
  SvmSolution sol = solve_svm_linear(mapped, lambda1, coupling, opts);
  sol.alpha = map.to_coefficients(sol.w);
  return sol;
}

SvmSolution solve_svm_kernel(const Dataset& d, double lambda1, const Eigen::MatrixXd& K,
                             const Eigen::VectorXd& beta_coupling, double lambda3,
                             const InnerOptions& opts) {
  if (K.rows() != d.size() || K.cols() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "svm kernel: Gram must be N x N");
  }
  return solve_svm_kernel(d, lambda1, EmpiricalFeatureMap(K), beta_coupling, lambda3, opts);
}

Eigen::VectorXi sign_labels(const Eigen::VectorXd& decision) {
  Eigen::VectorXi out(decision.size());
  for (Eigen::Index i = 0; i < decision.size(); ++i) out(i) = decision(i) < 0.0 ? -1 : 1;
  return out;
}

Eigen::VectorXd gender_decision(const JointLinearModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.w_g.size()) throw Error(ErrorCode::DimMismatch, "predict: feature count differs");
  return (X * m.w_g).array() + m.b_g;
}

Eigen::VectorXd gender_decision(const JointKernelModel& m, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd Kx = gram(m.kernel, X, m.train_features);
  return (Kx * m.alpha).array() + m.b_g;
}

Eigen::VectorXi predict_binary(const JointLinearModel& m, const Eigen::MatrixXd& X) {
  return sign_labels(gender_decision(m, X));
}

Eigen::VectorXi predict_binary(const JointKernelModel& m, const Eigen::MatrixXd& X) {
  return sign_labels(gender_decision(m, X));
}

}  // namespace orthojoint
