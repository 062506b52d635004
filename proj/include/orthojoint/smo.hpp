#pragma once

#include <Eigen/Dense>

namespace orthojoint {

struct SmoResult {
  Eigen::VectorXd a;  // dual variables, 0 <= a_i <= C
  double b = 0.0;     // intercept of sum_j a_j y_j G(j, .) + b
  long iterations = 0;
  bool converged = false;
};

// Standard soft-margin SVM dual with an unpenalized intercept:
//   min 1/2 a^T Q a - 1^T a,  Q_ij = y_i y_j G_ij,  0 <= a <= C,  y^T a = 0,
// solved by two-coordinate ascent with second-order working-set selection.
// Stops when the maximal KKT violation drops below tol.
SmoResult solve_svm_dual(const Eigen::MatrixXd& G, const Eigen::VectorXi& y, double C,
                         double tol, long max_iter);

}  // namespace orthojoint
