#include "orthojoint/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <utility>

#include "orthojoint/joint.hpp"
#include "orthojoint/util.hpp"

namespace orthojoint {

double accuracy(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth) {
  if (pred.size() != truth.size()) throw Error(ErrorCode::ShapeMismatch, "accuracy: length mismatch");
  if (pred.size() == 0) throw Error(ErrorCode::EmptyInput, "accuracy: empty input");
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    if (pred(i) == truth(i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size()) throw Error(ErrorCode::ShapeMismatch, "mae: length mismatch");
  if (pred.size() == 0) throw Error(ErrorCode::EmptyInput, "mae: empty input");
  return (pred - truth).cwiseAbs().sum() / static_cast<double>(pred.size());
}

Eigen::VectorXd to_ages(const Eigen::VectorXi& classes, const LabelMaps& labels) {
  Eigen::VectorXd out(classes.size());
  for (Eigen::Index i = 0; i < classes.size(); ++i) out(i) = labels.age_of(classes(i));
  return out;
}

EvalResult evaluate(const JointModel& m, const Dataset& d) {
  const int K = model_num_classes(m);
  if (d.num_classes != K) throw Error(ErrorCode::ShapeMismatch, "evaluate: class count differs from model");
  const LabelMaps& labels = model_labels(m);
  const Eigen::VectorXi genders = predict_genders(m, d.features);
  const Eigen::VectorXi classes = predict_classes(m, d.features);

  EvalResult r;
  r.n = d.size();
  r.gender_accuracy = accuracy(genders, d.genders);
  r.age_mae = mae(to_ages(classes, labels), to_ages(d.classes, labels));
  try {
    r.cos_angle = model_cos_angle(m);
  } catch (const Error&) {
    r.cos_angle = 0.0;
  }
  r.confusion = Eigen::MatrixXi::Zero(K, K);
  for (Eigen::Index i = 0; i < d.size(); ++i) ++r.confusion(d.classes(i) - 1, classes(i) - 1);
  return r;
}

namespace {

// Rows grouped by (class, gender), cells in ascending order.
std::map<std::pair<int, int>, std::vector<int>> cells_of(const Dataset& d) {
  std::map<std::pair<int, int>, std::vector<int>> cells;
  for (int i = 0; i < d.size(); ++i) cells[{d.classes(i), d.genders(i)}].push_back(i);
  return cells;
}

}  // namespace

Split stratified_split(const Dataset& d, int per_class_train, std::uint64_t seed) {
  require_valid(d);
  if (per_class_train < 1) throw Error(ErrorCode::InvalidConfig, "per_class_train must be >= 1");
  std::mt19937_64 rng(seed);
  Split s;
  for (auto& [cell, rows] : cells_of(d)) {
    if (static_cast<int>(rows.size()) <= per_class_train) {
      throw Error(ErrorCode::InsufficientSamples,
                  "InsufficientSamples(" + std::to_string(cell.first) + ", " +
                      std::to_string(cell.second) + "): " + std::to_string(rows.size()) +
                      " samples, need more than " + std::to_string(per_class_train));
    }
    std::vector<int> shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    s.train_rows.insert(s.train_rows.end(), shuffled.begin(), shuffled.begin() + per_class_train);
    s.test_rows.insert(s.test_rows.end(), shuffled.begin() + per_class_train, shuffled.end());
  }
  std::sort(s.train_rows.begin(), s.train_rows.end());
  std::sort(s.test_rows.begin(), s.test_rows.end());
  s.train = d.subset(s.train_rows);
  s.test = d.subset(s.test_rows);
  return s;
}

std::vector<int> stratified_folds(const Dataset& d, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::InvalidConfig, "folds must be >= 2");
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(static_cast<std::size_t>(d.size()), 0);
  int next = 0;
  for (auto& [cell, rows] : cells_of(d)) {
    std::vector<int> shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (int r : shuffled) {
      fold_of[static_cast<std::size_t>(r)] = next;
      next = (next + 1) % folds;
    }
  }
  return fold_of;
}

GridResult grid_search(const Dataset& d, const TrainConfig& base, const GridSpec& grid, int folds,
                       std::uint64_t seed) {
  require_valid(d);
  if (grid.lambda1.empty() || grid.lambda2.empty() || grid.lambda3.empty()) {
    throw Error(ErrorCode::InvalidConfig, "grid_search: every grid needs at least one value");
  }
  const std::vector<int> fold_of = stratified_folds(d, folds, seed);

  GridResult result;
  for (double l1 : grid.lambda1)
    for (double l2 : grid.lambda2)
      for (double l3 : grid.lambda3) {
        ConfigScore c;
        c.config = base;
        c.config.lambda1 = l1;
        c.config.lambda2 = l2;
        c.config.lambda3 = l3;
        result.configs.push_back(c);
      }

  const int n_jobs = static_cast<int>(result.configs.size()) * folds;
  result.table.resize(static_cast<std::size_t>(n_jobs));
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < n_jobs; ++job) {
    const auto& cfg = result.configs[static_cast<std::size_t>(job / folds)].config;
    const int fold = job % folds;
    ScoreRow& row = result.table[static_cast<std::size_t>(job)];
    row.lambda1 = cfg.lambda1;
    row.lambda2 = cfg.lambda2;
    row.lambda3 = cfg.lambda3;
    row.fold = fold;
    try {
      std::vector<int> train_rows;
      std::vector<int> val_rows;
      for (int i = 0; i < d.size(); ++i) {
        (fold_of[static_cast<std::size_t>(i)] == fold ? val_rows : train_rows).push_back(i);
      }
      const Dataset train = d.subset(train_rows);
      const Dataset val = d.subset(val_rows);
      const JointFit fit = train_joint(train, cfg);
      const EvalResult ev = evaluate(fit.model, val);
      row.acc = ev.gender_accuracy;
      row.mae = ev.age_mae;
      row.cos_angle = fit.report.cos_angle;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  }

  // Fold scores are summed in fold order, independent of job scheduling.
  for (std::size_t c = 0; c < result.configs.size(); ++c) {
    ConfigScore& score = result.configs[c];
    score.ok = true;
    double acc = 0.0;
    double err = 0.0;
    for (int f = 0; f < folds; ++f) {
      const ScoreRow& row = result.table[c * static_cast<std::size_t>(folds) + static_cast<std::size_t>(f)];
      if (!row.ok) {
        score.ok = false;
        break;
      }
      acc += row.acc;
      err += row.mae;
    }
    if (score.ok) {
      score.mean_acc = acc / folds;
      score.mean_mae = err / folds;
    }
  }

  const ConfigScore* best = nullptr;
  auto better = [](const ConfigScore& a, const ConfigScore& b) {
    const double scale = std::max({1.0, std::abs(a.mean_mae), std::abs(b.mean_mae)});
    if (std::abs(a.mean_mae - b.mean_mae) > 1e-12 * scale) return a.mean_mae < b.mean_mae;
    if (std::abs(a.mean_acc - b.mean_acc) > 1e-12) return a.mean_acc > b.mean_acc;
    return a.config.lambda3 < b.config.lambda3;
  };
  for (const auto& c : result.configs) {
    if (!c.ok) continue;
    if (best == nullptr || better(c, *best)) best = &c;
  }
  if (best == nullptr) {
    std::string first;
    for (const auto& row : result.table)
      if (!row.ok) {
        first = row.error;
        break;
      }
    throw Error(ErrorCode::NoConvergence, "grid_search: every configuration failed; first error: " + first);
  }
  result.best = best->config;
  result.best_score = *best;
  return result;
}

void write_score_table(std::ostream& os, const std::vector<ScoreRow>& rows) {
  os << "lambda1,lambda2,lambda3,fold,acc,mae,cos_angle\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda1) << ',' << format_double(r.lambda2) << ','
       << format_double(r.lambda3) << ',' << r.fold << ',';
    if (r.ok) {
      os << format_double(r.acc) << ',' << format_double(r.mae) << ',' << format_double(r.cos_angle);
    } else {
      os << "nan,nan,nan";
    }
    os << '\n';
  }
}

}  // namespace orthojoint
