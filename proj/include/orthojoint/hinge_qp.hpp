#pragma once

#include <Eigen/Dense>

namespace orthojoint {

// min  1/2 z^T diag(q) z + lin^T z + sum_i c_i xi_i
// s.t. A z + xi >= h,  xi >= 0,  G z >= e
// Only q >= 0 is required; unpenalized coordinates (q_j = 0) must be pinned
// down by the constraints.
struct HingeQp {
  Eigen::VectorXd q;
  Eigen::VectorXd lin;  // empty means zero
  Eigen::MatrixXd A;  // may have zero rows
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  Eigen::MatrixXd G;  // may have zero rows
  Eigen::VectorXd e;
};

struct HingeQpResult {
  Eigen::VectorXd z;
  Eigen::VectorXd xi;
  Eigen::VectorXd soft_duals;  // multipliers of A z + xi >= h, in [0, c]
  Eigen::VectorXd hard_duals;  // multipliers of G z >= e
  double objective = 0.0;
  // Largest scaled KKT residual (or duality gap) of the returned iterate.
  double merit = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Mehrotra predictor-corrector interior point. Every Newton step is reduced
// to one n x n system, n = z.size(), so cost is O(iters * m * n^2).
// Iterates until the merit reaches tol or stalls; converged means merit <= tol.
HingeQpResult solve_hinge_qp(const HingeQp& p, double tol = 1e-8, int max_iter = 200);

// Merit accepted from a stalled solve by the callers in this library.
inline constexpr double kHingeQpAcceptMerit = 1e-8;

}  // namespace orthojoint
