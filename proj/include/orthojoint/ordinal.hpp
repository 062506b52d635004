#pragma once

#include <Eigen/Dense>

#include "orthojoint/core.hpp"

namespace orthojoint {

// class(x) = 1 + #{k : projection(x) > b_k}; a projection equal to b_k stays
// in the lower class.
Eigen::VectorXi classes_from_projection(const Eigen::VectorXd& projection,
                                        const Eigen::VectorXd& thresholds);

// w_a^T x (linear) or beta^T k(X_train, x) (kernel).
Eigen::VectorXd ordinal_projection(const JointLinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd ordinal_projection(const JointKernelModel& m, const Eigen::MatrixXd& X);

// Pool-adjacent-violators projection onto nondecreasing sequences (equal
// weights).
Eigen::VectorXd isotonic_projection(const Eigen::VectorXd& values);

}  // namespace orthojoint
