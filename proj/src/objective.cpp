#include <algorithm>
#include <cmath>
#include <limits>

#include "orthojoint/joint.hpp"
#include "orthojoint/kdlor.hpp"
#include "orthojoint/kernels.hpp"
#include "orthojoint/svm.hpp"
#include "orthojoint/svor.hpp"

namespace orthojoint {

JointObjective evaluate_objective(const JointLinearModel& m, const Dataset& d, const TrainConfig& cfg) {
  if (m.w_g.size() != d.dim() || m.w_a.size() != d.dim()) {
    throw Error(ErrorCode::DimMismatch, "evaluate_objective: model dimension differs from data");
  }
  if (m.thresholds.size() != d.num_classes - 1) {
    throw Error(ErrorCode::ShapeMismatch, "evaluate_objective: model has the wrong threshold count");
  }
  JointObjective obj;
  obj.svm_part = 0.5 * m.w_g.squaredNorm() + cfg.lambda1 * hinge_total(m.w_g, m.b_g, d);
  if (m.method == OrdinalMethod::Kdlor) {
    const ScatterSummary s = scatter(d);
    obj.ordinal_part = m.w_a.dot(s.within * m.w_a) + m.scatter_ridge * m.w_a.squaredNorm() -
                       cfg.lambda2 * kdlor_margin(m.w_a, s);
  } else {
    obj.ordinal_part = 0.5 * m.w_a.squaredNorm() +
                       cfg.lambda2 * svor_slack_total(d.features * m.w_a, m.thresholds, d.classes,
                                                      d.num_classes);
  }
  const double inner = m.w_g.dot(m.w_a);
  obj.coupling_part = cfg.lambda3 * inner * inner;
  return obj;
}

JointObjective evaluate_objective(const JointKernelModel& m, const Dataset& d, const TrainConfig& cfg) {
  if (m.alpha.size() != d.size() || m.beta.size() != d.size() ||
      m.train_features.rows() != d.size()) {
    throw Error(ErrorCode::ShapeMismatch, "evaluate_objective: kernel model was not trained on d");
  }
  const Eigen::MatrixXd K = gram(m.kernel, d.features, m.train_features);
  const Eigen::VectorXd Ka = K * m.alpha;
  const Eigen::VectorXd Kb = K * m.beta;

  JointObjective obj;
  obj.svm_part = 0.5 * m.alpha.dot(Ka) + cfg.lambda1 * hinge_total_scores(Ka, m.b_g, d.genders);
  if (m.method == OrdinalMethod::Kdlor) {
    // (I - C) K beta: every entry minus the mean of its class.
    Eigen::VectorXd class_mean = Eigen::VectorXd::Zero(d.num_classes);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(d.num_classes);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      class_mean(d.classes(i) - 1) += Kb(i);
      counts(d.classes(i) - 1) += 1.0;
    }
    class_mean = class_mean.cwiseQuotient(counts);
    double within = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double dev = Kb(i) - class_mean(d.classes(i) - 1);
      within += dev * dev;
    }
    within /= static_cast<double>(d.size());
    double rho = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < d.num_classes; ++k) rho = std::min(rho, class_mean(k + 1) - class_mean(k));
    obj.ordinal_part = within + m.scatter_ridge * m.beta.dot(Kb) - cfg.lambda2 * rho;
  } else {
    obj.ordinal_part = 0.5 * m.beta.dot(Kb) +
                       cfg.lambda2 * svor_slack_total(Kb, m.thresholds, d.classes, d.num_classes);
  }
  const double inner = m.alpha.dot(Kb);
  obj.coupling_part = cfg.lambda3 * inner * inner;
  return obj;
}

double cos_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::DimMismatch, "cos_angle: length mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) throw Error(ErrorCode::ZeroVector, "cos_angle: zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

double cos_angle(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, const Eigen::MatrixXd& K) {
  if (alpha.size() != K.rows() || beta.size() != K.rows()) {
    throw Error(ErrorCode::DimMismatch, "cos_angle: coefficient length differs from Gram size");
  }
  const Eigen::VectorXd Kb = K * beta;
  const double aa = alpha.dot(K * alpha);
  const double bb = beta.dot(Kb);
  if (!(aa > 0.0) || !(bb > 0.0)) throw Error(ErrorCode::ZeroVector, "cos_angle: zero vector");
  return std::clamp(alpha.dot(Kb) / std::sqrt(aa * bb), -1.0, 1.0);
}

double model_cos_angle(const JointLinearModel& m) { return cos_angle(m.w_g, m.w_a); }

double model_cos_angle(const JointKernelModel& m) {
  return cos_angle(m.alpha, m.beta, gram(m.kernel, m.train_features, m.train_features));
}

double model_cos_angle(const JointModel& m) {
  return std::visit([](const auto& x) { return model_cos_angle(x); }, m);
}

}  // namespace orthojoint
