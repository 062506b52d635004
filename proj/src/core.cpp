#include "orthojoint/core.hpp"

#include <cmath>
#include <string>

namespace orthojoint {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::SingleGender: return "SingleGender";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateMeans: return "DegenerateMeans";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

std::string_view to_string(OrdinalMethod m) {
  return m == OrdinalMethod::Kdlor ? "kdlor" : "svor";
}

OrdinalMethod parse_ordinal_method(std::string_view s) {
  if (s == "kdlor") return OrdinalMethod::Kdlor;
  if (s == "svor") return OrdinalMethod::Svor;
  throw Error(ErrorCode::InvalidConfig, "unknown ordinal method '" + std::string(s) + "'");
}

double LabelMaps::age_of(int class_index) const {
  if (class_ages.empty()) return class_index;
  return class_ages.at(static_cast<std::size_t>(class_index - 1));
}

const std::string& LabelMaps::gender_name(int gender) const {
  return gender_names[gender > 0 ? 1 : 0];
}

Dataset Dataset::subset(std::span<const int> rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.genders.resize(static_cast<Eigen::Index>(rows.size()));
  out.classes.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    if (r < 0 || r >= size()) {
      throw Error(ErrorCode::ShapeMismatch, "subset row " + std::to_string(r) + " out of range");
    }
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
    out.genders(static_cast<Eigen::Index>(i)) = genders(r);
    out.classes(static_cast<Eigen::Index>(i)) = classes(r);
  }
  out.num_classes = num_classes;
  out.labels = labels;
  return out;
}

Dataset Dataset::with_features(Eigen::MatrixXd new_features) const {
  if (new_features.rows() != features.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "replacement features have a different row count");
  }
  Dataset out = *this;
  out.features = std::move(new_features);
  return out;
}

Dataset make_dataset(Eigen::MatrixXd features, Eigen::VectorXi genders,
                     Eigen::VectorXi classes, int num_classes) {
  Dataset d;
  d.features = std::move(features);
  d.genders = std::move(genders);
  d.classes = std::move(classes);
  d.num_classes = num_classes;
  d.labels.class_ages.resize(static_cast<std::size_t>(std::max(num_classes, 0)));
  for (int k = 1; k <= num_classes; ++k) d.labels.class_ages[static_cast<std::size_t>(k - 1)] = k;
  return d;
}

std::optional<Error> validate_dataset(const Dataset& d) {
  const auto n = d.features.rows();
  if (d.genders.size() != n || d.classes.size() != n) {
    return Error(ErrorCode::ShapeMismatch,
                 "label vectors have length " + std::to_string(d.genders.size()) + "/" +
                     std::to_string(d.classes.size()) + " but N = " + std::to_string(n));
  }
  if (n < 2 || d.features.cols() < 1 || d.num_classes < 2) {
    return Error(ErrorCode::ShapeMismatch, "dataset needs N >= 2, D >= 1 and K >= 2");
  }
  if (!d.labels.class_ages.empty() &&
      static_cast<int>(d.labels.class_ages.size()) != d.num_classes) {
    return Error(ErrorCode::ShapeMismatch, "class-to-age map does not have K entries");
  }
  if (!d.features.allFinite()) {
    return Error(ErrorCode::ShapeMismatch, "features contain non-finite values");
  }
  std::vector<int> counts(static_cast<std::size_t>(d.num_classes), 0);
  bool seen_neg = false;
  bool seen_pos = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = d.genders(i);
    if (g != -1 && g != 1) {
      return Error(ErrorCode::InvalidLabel, "binary label " + std::to_string(g) + " at row " +
                                                std::to_string(i) + " is not -1/+1");
    }
    (g < 0 ? seen_neg : seen_pos) = true;
    const int k = d.classes(i);
    if (k < 1 || k > d.num_classes) {
      return Error(ErrorCode::InvalidLabel, "ordinal label " + std::to_string(k) + " at row " +
                                                std::to_string(i) + " outside 1.." +
                                                std::to_string(d.num_classes));
    }
    ++counts[static_cast<std::size_t>(k - 1)];
  }
  for (int k = 1; k <= d.num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k - 1)] == 0) {
      return Error(ErrorCode::EmptyClass, "EmptyClass(" + std::to_string(k) + ")");
    }
  }
  if (!(seen_neg && seen_pos)) {
    return Error(ErrorCode::SingleGender, "binary labels take a single value");
  }
  return std::nullopt;
}

void require_valid(const Dataset& d) {
  if (auto err = validate_dataset(d)) throw *err;
}

std::optional<Error> validate_config(const TrainConfig& cfg) {
  auto bad = [](const std::string& msg) { return Error(ErrorCode::InvalidConfig, msg); };
  if (!(cfg.lambda1 >= 0.0) || !(cfg.lambda2 >= 0.0) || !(cfg.lambda3 >= 0.0) ||
      !std::isfinite(cfg.lambda1) || !std::isfinite(cfg.lambda2) || !std::isfinite(cfg.lambda3)) {
    return bad("lambdas must be finite and nonnegative");
  }
  if (cfg.max_outer_iters < 1) return bad("max_outer_iters must be >= 1");
  if (!(cfg.outer_tol > 0.0) || !(cfg.inner_tol > 0.0)) return bad("tolerances must be positive");
  if (cfg.scatter_ridge && !(*cfg.scatter_ridge >= 0.0)) return bad("scatter_ridge must be >= 0");
  if (cfg.kernel.kind == KernelKind::Rbf && !(cfg.kernel.gamma >= 0.0)) {
    return bad("rbf gamma must be positive (or 0 for the data-driven default)");
  }
  return std::nullopt;
}

void require_valid(const TrainConfig& cfg) {
  if (auto err = validate_config(cfg)) throw *err;
}

}  // namespace orthojoint
