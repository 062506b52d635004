#include "orthojoint/ordinal.hpp"

#include <algorithm>
#include <vector>

#include "orthojoint/kernels.hpp"

namespace orthojoint {

Eigen::VectorXi classes_from_projection(const Eigen::VectorXd& projection,
                                        const Eigen::VectorXd& thresholds) {
  Eigen::VectorXi out(projection.size());
  for (Eigen::Index i = 0; i < projection.size(); ++i) {
    int c = 1;
    for (Eigen::Index k = 0; k < thresholds.size(); ++k)
      if (projection(i) > thresholds(k)) ++c;
    out(i) = c;
  }
  return out;
}

Eigen::VectorXd ordinal_projection(const JointLinearModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.w_a.size()) throw Error(ErrorCode::DimMismatch, "predict: feature count differs");
  return X * m.w_a;
}

Eigen::VectorXd ordinal_projection(const JointKernelModel& m, const Eigen::MatrixXd& X) {
  return gram(m.kernel, X, m.train_features) * m.beta;
}

Eigen::VectorXd isotonic_projection(const Eigen::VectorXd& values) {
  struct Block {
    double sum;
    double count;
    double mean() const { return sum / count; }
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    blocks.push_back({values(i), 1.0});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().count += last.count;
    }
  }
  Eigen::VectorXd out(values.size());
  Eigen::Index pos = 0;
  for (const auto& b : blocks) {
    const double m = b.mean();
    for (int j = 0; j < static_cast<int>(b.count); ++j) out(pos++) = m;
  }
  // Pooled means can differ from each other by rounding; make the order exact.
  for (Eigen::Index i = 1; i < out.size(); ++i) out(i) = std::max(out(i), out(i - 1));
  return out;
}

}  // namespace orthojoint
