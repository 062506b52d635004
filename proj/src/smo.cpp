#include "orthojoint/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orthojoint {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SmoResult solve_svm_dual(const Eigen::MatrixXd& G, const Eigen::VectorXi& y, double C,
                         double tol, long max_iter) {
  const Eigen::Index n = G.rows();
  SmoResult res;
  res.a = Eigen::VectorXd::Zero(n);
  if (n == 0 || C <= 0.0) {
    res.converged = true;
    return res;
  }

  Eigen::MatrixXd Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) Q(i, j) = y(i) * y(j) * G(i, j);
  const Eigen::VectorXd QD = Q.diagonal();

  Eigen::VectorXd& a = res.a;
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  auto in_up = [&](Eigen::Index t) { return y(t) > 0 ? a(t) < C : a(t) > 0.0; };
  auto in_low = [&](Eigen::Index t) { return y(t) > 0 ? a(t) > 0.0 : a(t) < C; };

  long iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y(t) * grad(t) >= gmax) {
        gmax = -y(t) * grad(t);
        i = t;
      }
    }
    Eigen::Index j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double yg = y(t) * grad(t);
      gmax2 = std::max(gmax2, yg);
      if (i < 0) continue;
      const double diff = gmax + yg;
      if (diff > 0.0) {
        double quad = QD(i) + QD(t) - 2.0 * y(i) * y(t) * Q(i, t);
        if (quad <= 0.0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < tol) {
      res.converged = true;
      break;
    }

    const double ai_old = a(i);
    const double aj_old = a(j);
    if (y(i) != y(j)) {
      double quad = QD(i) + QD(j) + 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = a(i) - a(j);
      a(i) += delta;
      a(j) += delta;
      if (diff > 0.0) {
        if (a(j) < 0.0) {
          a(j) = 0.0;
          a(i) = diff;
        }
      } else if (a(i) < 0.0) {
        a(i) = 0.0;
        a(j) = -diff;
      }
      if (diff > 0.0) {
        if (a(i) > C) {
          a(i) = C;
          a(j) = C - diff;
        }
      } else if (a(j) > C) {
        a(j) = C;
        a(i) = C + diff;
      }
    } else {
      double quad = QD(i) + QD(j) - 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = a(i) + a(j);
      a(i) -= delta;
      a(j) += delta;
      if (sum > C) {
        if (a(i) > C) {
          a(i) = C;
          a(j) = sum - C;
        }
      } else if (a(j) < 0.0) {
        a(j) = 0.0;
        a(i) = sum;
      }
      if (sum > C) {
        if (a(j) > C) {
          a(j) = C;
          a(i) = sum - C;
        }
      } else if (a(i) < 0.0) {
        a(i) = 0.0;
        a(j) = sum;
      }
    }
    const double di = a(i) - ai_old;
    const double dj = a(j) - aj_old;
    grad += Q.col(i) * di + Q.col(j) * dj;
  }
  res.iterations = iter;

  // Intercept from the free variables, or the middle of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (a(t) >= C) {
      if (y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (a(t) <= 0.0) {
      if (y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = sum_free / n_free;
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;
  res.b = -rho;
  return res;
}

}  // namespace orthojoint
