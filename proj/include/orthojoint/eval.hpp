#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthojoint/core.hpp"

namespace orthojoint {

// N_correct / N_total
double accuracy(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth);
// 1/N sum |pred_i - truth_i|, in whatever units the inputs carry (ages).
double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Class indices -> original ages through the label map.
Eigen::VectorXd to_ages(const Eigen::VectorXi& classes, const LabelMaps& labels);

struct EvalResult {
  double gender_accuracy = 0.0;
  double age_mae = 0.0;  // original age units
  double cos_angle = 0.0;
  Eigen::MatrixXi confusion;  // K x K, rows = true class, cols = predicted class
  int n = 0;
};

EvalResult evaluate(const JointModel& m, const Dataset& d);

struct Split {
  Dataset train;
  Dataset test;
  std::vector<int> train_rows;
  std::vector<int> test_rows;
};

// Draws per_class_train samples from every (class, gender) cell for training,
// the rest go to test. Row order is preserved inside both parts.
Split stratified_split(const Dataset& d, int per_class_train, std::uint64_t seed);

// Fold id (0..folds-1) per row, balanced within every (class, gender) cell.
std::vector<int> stratified_folds(const Dataset& d, int folds, std::uint64_t seed);

struct GridSpec {
  std::vector<double> lambda1{1.0};
  std::vector<double> lambda2{1.0};
  std::vector<double> lambda3{1e0, 1e3, 1e6, 1e9, 1e12, 1e15};
};

struct ScoreRow {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  int fold = 0;
  bool ok = false;
  double acc = 0.0;
  double mae = 0.0;
  double cos_angle = 0.0;
  std::string error;
};

struct ConfigScore {
  TrainConfig config;
  bool ok = false;
  double mean_acc = 0.0;
  double mean_mae = 0.0;
};

struct GridResult {
  TrainConfig best;
  ConfigScore best_score;
  std::vector<ConfigScore> configs;  // grid order: lambda1, lambda2, lambda3
  std::vector<ScoreRow> table;       // grid order, then fold
};

// Cross-validated sweep. The chosen config has the smallest mean MAE, then
// the higher mean accuracy, then the smaller lambda3. Cells whose training
// fails are marked in the table and excluded from selection. Fold jobs run
// in parallel; results do not depend on the thread count.
GridResult grid_search(const Dataset& d, const TrainConfig& base, const GridSpec& grid, int folds,
                       std::uint64_t seed);

// CSV with header lambda1,lambda2,lambda3,fold,acc,mae,cos_angle
void write_score_table(std::ostream& os, const std::vector<ScoreRow>& rows);

}  // namespace orthojoint
