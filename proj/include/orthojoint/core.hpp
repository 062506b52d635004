#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "orthojoint/error.hpp"
#include "orthojoint/kernel_spec.hpp"

namespace orthojoint {

// Maps from the dense internal encodings back to the values found in input
// files: class index k (1-based) -> original age, and gender -1/+1 -> label.
struct LabelMaps {
  std::vector<double> class_ages;
  std::array<std::string, 2> gender_names{"-1", "1"};

  double age_of(int class_index) const;
  const std::string& gender_name(int gender) const;

  bool operator==(const LabelMaps&) const = default;
};

// N samples with features, a binary label in {-1, +1} and an ordinal class
// index in {1..K}. Passed around by const reference and never mutated.
struct Dataset {
  Eigen::MatrixXd features;  // N x D
  Eigen::VectorXi genders;   // N, entries -1 / +1
  Eigen::VectorXi classes;   // N, entries 1..K
  int num_classes = 0;
  LabelMaps labels;

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Rows in the given order; label maps and K are kept.
  Dataset subset(std::span<const int> rows) const;
  // Same labels, different feature representation (same row count).
  Dataset with_features(Eigen::MatrixXd new_features) const;
};

// Builds a dataset whose label maps default to age(k) = k.
Dataset make_dataset(Eigen::MatrixXd features, Eigen::VectorXi genders,
                     Eigen::VectorXi classes, int num_classes);

std::optional<Error> validate_dataset(const Dataset& d);
// Throws the error validate_dataset would return.
void require_valid(const Dataset& d);

enum class OrdinalMethod { Kdlor, Svor };

// Stopping rule shared by the inner (subproblem) solvers. A max_iter of 0
// selects the solver's own cap.
struct InnerOptions {
  double tol = 1e-6;
  long max_iter = 0;
};

struct TrainConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1e6;
  KernelSpec kernel{};
  // Train in representer form even when the kernel is linear.
  bool kernel_form = false;
  OrdinalMethod ordinal_method = OrdinalMethod::Svor;
  int max_outer_iters = 10;
  double outer_tol = 1e-4;
  double inner_tol = 1e-6;
  // Ridge added to the discriminant quadratic form. Unset means
  // 1e-6 * trace(S_w) / D, computed from the training data.
  std::optional<double> scatter_ridge;
};

std::optional<Error> validate_config(const TrainConfig& cfg);
void require_valid(const TrainConfig& cfg);

struct JointLinearModel {
  OrdinalMethod method = OrdinalMethod::Svor;
  Eigen::VectorXd w_g;
  double b_g = 0.0;
  Eigen::VectorXd w_a;
  Eigen::VectorXd thresholds;  // K-1, nondecreasing
  double scatter_ridge = 0.0;  // KDLOR only; part of the minimized objective
  LabelMaps labels;
};

struct JointKernelModel {
  OrdinalMethod method = OrdinalMethod::Svor;
  KernelSpec kernel{};
  Eigen::MatrixXd train_features;  // N x D, kept for prediction
  Eigen::VectorXd alpha;
  double b_g = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd thresholds;
  double scatter_ridge = 0.0;
  // KDLOR bookkeeping: projected training class means beta^T K c_k.
  Eigen::VectorXd projected_class_means;
  LabelMaps labels;
};

using JointModel = std::variant<JointLinearModel, JointKernelModel>;

struct ObjectiveRecord {
  int iteration = 0;
  double svm_objective = 0.0;
  double ordinal_objective = 0.0;
  double coupling_value = 0.0;

  double total() const { return svm_objective + ordinal_objective + coupling_value; }
};

struct FitReport {
  std::vector<ObjectiveRecord> objective_trace;
  double cos_angle = 0.0;
  bool converged = false;
  int outer_iters_used = 0;
  // Outer steps whose block update was rejected because it did not lower
  // the objective (only possible through inexact inner solves).
  int rejected_steps = 0;
};

std::string_view to_string(OrdinalMethod m);
OrdinalMethod parse_ordinal_method(std::string_view s);

}  // namespace orthojoint
