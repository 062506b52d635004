#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orthojoint/core.hpp"

namespace orthojoint {

// Column selection for load_csv. Empty feature_cols means every column other
// than the two label columns, in file order.
struct CsvColumns {
  std::vector<std::string> feature_cols;
  std::string gender_col = "gender";
  std::string age_col = "age";
};

// Ages are mapped to classes 1..K by sorted distinct value. Gender values are
// ordered numerically when they all parse as numbers, otherwise
// lexicographically; the lower one becomes -1.
Dataset read_csv(std::istream& in, const CsvColumns& cols = {});
Dataset load_csv(const std::string& path, const CsvColumns& cols = {});

// Feature matrix only, for prediction. Label columns, when present, are
// skipped unless listed in feature_cols.
Eigen::MatrixXd read_feature_csv(std::istream& in, const CsvColumns& cols = {});
Eigen::MatrixXd load_feature_csv(const std::string& path, const CsvColumns& cols = {});

// Header f1..fD,gender,age with the original label values.
void write_csv(std::ostream& out, const Dataset& d);
void save_csv(const std::string& path, const Dataset& d);

}  // namespace orthojoint
