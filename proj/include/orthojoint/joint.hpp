#pragma once

#include <Eigen/Dense>

#include "orthojoint/core.hpp"

namespace orthojoint {

// Parts of the joint objective at one point.
//   svm_part      1/2 |w_g|^2 + lambda1 * sum hinge
//   ordinal_part  KDLOR: w_a^T (S_w + ridge I) w_a - lambda2 * rho(w_a)
//                 SVOR:  1/2 |w_a|^2 + lambda2 * sum slacks
//   coupling_part lambda3 * (w_g^T w_a)^2
// Kernel models use the same expressions with w = Phi^T alpha, w_a = Phi^T beta.
struct JointObjective {
  double svm_part = 0.0;
  double ordinal_part = 0.0;
  double coupling_part = 0.0;

  double total() const { return svm_part + ordinal_part + coupling_part; }
};

JointObjective evaluate_objective(const JointLinearModel& m, const Dataset& d, const TrainConfig& cfg);
// d must be the model's training set (its Gram matrix is rebuilt).
JointObjective evaluate_objective(const JointKernelModel& m, const Dataset& d, const TrainConfig& cfg);

// <u, v> / (|u| |v|); throws ZeroVector when either norm vanishes.
double cos_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
// Same under the inner product <a, b>_K = a^T K b.
double cos_angle(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, const Eigen::MatrixXd& K);

double model_cos_angle(const JointLinearModel& m);
double model_cos_angle(const JointKernelModel& m);
double model_cos_angle(const JointModel& m);

struct LinearFit {
  JointLinearModel model;
  FitReport report;
};

struct KernelFit {
  JointKernelModel model;
  FitReport report;
};

struct JointFit {
  JointModel model;
  FitReport report;
};

// Alternates the gender step (ordinal direction fixed) and the ordinal step
// (gender direction fixed). The first outer iteration runs both steps with
// the coupling disabled; later ones use lambda3. Stops when the relative
// change of the total objective drops below outer_tol.
LinearFit train_joint_linear(const Dataset& d, const TrainConfig& cfg);
// Representer form for any kernel (including the linear one).
KernelFit train_joint_kernel(const Dataset& d, const TrainConfig& cfg);
// Linear kernel without kernel_form -> linear model, otherwise kernel model.
JointFit train_joint(const Dataset& d, const TrainConfig& cfg);

// Relative change between consecutive objective totals.
double relative_change(double previous, double current);

Eigen::VectorXi predict_genders(const JointModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_classes(const JointModel& m, const Eigen::MatrixXd& X);
const LabelMaps& model_labels(const JointModel& m);
int model_num_classes(const JointModel& m);

}  // namespace orthojoint
