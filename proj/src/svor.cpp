#include "orthojoint/svor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "orthojoint/hinge_qp.hpp"
#include "orthojoint/ordinal.hpp"

namespace orthojoint {

namespace {

struct Pair {
  Eigen::Index row;
  int threshold;  // 0-based
  double sign;    // +1: score - b >= 1, -1: b - score >= 1
};

std::vector<Pair> build_pairs(const Dataset& d) {
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(2 * d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const int j = d.classes(i);
    if (j < d.num_classes) pairs.push_back({i, j - 1, -1.0});
    if (j > 1) pairs.push_back({i, j - 2, +1.0});
  }
  return pairs;
}

}  // namespace

void svor_slacks(const Eigen::VectorXd& scores, const Eigen::VectorXd& thresholds,
                 const Eigen::VectorXi& classes, int num_classes, Eigen::VectorXd& upper,
                 Eigen::VectorXd& lower) {
  if (scores.size() != classes.size() || thresholds.size() != num_classes - 1) {
    throw Error(ErrorCode::ShapeMismatch, "svor: score/label/threshold sizes disagree");
  }
  upper = Eigen::VectorXd::Zero(scores.size());
  lower = Eigen::VectorXd::Zero(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const int j = classes(i);
    if (j < num_classes) upper(i) = std::max(0.0, 1.0 + scores(i) - thresholds(j - 1));
    if (j > 1) lower(i) = std::max(0.0, 1.0 - (scores(i) - thresholds(j - 2)));
  }
}

double svor_slack_total(const Eigen::VectorXd& scores, const Eigen::VectorXd& thresholds,
                        const Eigen::VectorXi& classes, int num_classes) {
  Eigen::VectorXd upper;
  Eigen::VectorXd lower;
  svor_slacks(scores, thresholds, classes, num_classes, upper, lower);
  return upper.sum() + lower.sum();
}

double svor_linear_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& thresholds,
                             const Dataset& d, double lambda2, const Rank1Metric& coupling) {
  if (w.size() != d.dim()) throw Error(ErrorCode::DimMismatch, "svor: weight length differs from D");
  return 0.5 * coupling.quadratic(w) +
         lambda2 * svor_slack_total(d.features * w, thresholds, d.classes, d.num_classes);
}

SvorSolution solve_svor_linear(const Dataset& d, double lambda2, const Rank1Metric& coupling,
                               const InnerOptions& opts) {
  require_valid(d);
  if (!(lambda2 > 0.0)) throw Error(ErrorCode::InvalidConfig, "svor: lambda2 must be positive");
  if (coupling.dim() != d.dim()) {
    throw Error(ErrorCode::DimMismatch, "svor: coupling direction length differs from D");
  }
  const int T = d.num_classes - 1;
  const Eigen::Index D = d.dim();
  // Whitened features turn the coupled quadratic into |w|^2.
  const Eigen::MatrixXd X = metric_sqrt_apply(coupling, d.features, /*inverse=*/true);
  const std::vector<Pair> pairs = build_pairs(d);
  const auto P = static_cast<Eigen::Index>(pairs.size());

  // z = (w, b): pair p asks sign * (x.w - b_t) + xi_p >= 1.
  HingeQp qp;
  qp.q = Eigen::VectorXd::Zero(D + T);
  qp.q.head(D).setOnes();
  qp.A = Eigen::MatrixXd::Zero(P, D + T);
  for (Eigen::Index p = 0; p < P; ++p) {
    const Pair& pr = pairs[static_cast<std::size_t>(p)];
    qp.A.row(p).head(D) = pr.sign * X.row(pr.row);
    qp.A(p, D + pr.threshold) = -pr.sign;
  }
  qp.h = Eigen::VectorXd::Ones(P);
  qp.c = Eigen::VectorXd::Constant(P, lambda2);
  qp.G = Eigen::MatrixXd::Zero(T - 1, D + T);
  for (int t = 0; t + 1 < T; ++t) {
    qp.G(t, D + t) = -1.0;
    qp.G(t, D + t + 1) = 1.0;
  }
  qp.e = Eigen::VectorXd::Zero(T - 1);

  const int cap = opts.max_iter > 0 ? static_cast<int>(opts.max_iter) : 200;
  const HingeQpResult r = solve_hinge_qp(qp, std::min(opts.tol, 1e-8), cap);
  if (!(r.merit <= kHingeQpAcceptMerit)) {
    throw Error(ErrorCode::NoConvergence,
                "NoConvergence(" + std::to_string(r.iterations) + ") in svor interior point");
  }
  const Eigen::VectorXd w_t = r.z.head(D);
  const Eigen::VectorXd b = r.z.tail(T);
  const long sweeps = r.iterations;

  SvorSolution sol;
  sol.w_a = coupling.apply_sqrt(w_t, /*inverse=*/true);
  // The interior point keeps the order only up to its tolerance.
  sol.thresholds = isotonic_projection(b);
  const Eigen::VectorXd scores = d.features * sol.w_a;
  svor_slacks(scores, sol.thresholds, d.classes, d.num_classes, sol.slack_upper, sol.slack_lower);
  sol.primal_objective = 0.5 * coupling.quadratic(sol.w_a) +
                         lambda2 * (sol.slack_upper.sum() + sol.slack_lower.sum());
  sol.iterations = sweeps;
  return sol;
}

SvorSolution solve_svor_kernel(const Dataset& d, const EmpiricalFeatureMap& map, double lambda2,
                               const Eigen::VectorXd& alpha_coupling, double lambda3,
                               const InnerOptions& opts) {
  if (map.features().rows() != d.size() || alpha_coupling.size() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "svor kernel: Gram / coefficient size differs from N");
  }
  const Dataset mapped = d.with_features(map.features());
  const Rank1Metric coupling = Rank1Metric::from_vector(map.to_weights(alpha_coupling), lambda3);
  SvorSolution sol = solve_svor_linear(mapped, lambda2, coupling, opts);
  sol.beta = map.to_coefficients(sol.w_a);
  return sol;
}

SvorSolution solve_svor_kernel(const Dataset& d, const Eigen::MatrixXd& K, double lambda2,
                               const Eigen::VectorXd& alpha_coupling, double lambda3,
                               const InnerOptions& opts) {
  if (K.rows() != d.size() || K.cols() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "svor kernel: Gram must be N x N");
  }
  return solve_svor_kernel(d, EmpiricalFeatureMap(K), lambda2, alpha_coupling, lambda3, opts);
}

Eigen::VectorXi predict_ordinal_svor(const JointLinearModel& m, const Eigen::MatrixXd& X) {
  return classes_from_projection(ordinal_projection(m, X), m.thresholds);
}

Eigen::VectorXi predict_ordinal_svor(const JointKernelModel& m, const Eigen::MatrixXd& X) {
  return classes_from_projection(ordinal_projection(m, X), m.thresholds);
}

}  // namespace orthojoint
