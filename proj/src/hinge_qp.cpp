#include "orthojoint/hinge_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orthojoint/error.hpp"

namespace orthojoint {

namespace {

// Largest step in (0, 1] keeping v + step * dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double step = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) step = std::min(step, -v(i) / dv(i));
  return step;
}

}  // namespace

HingeQpResult solve_hinge_qp(const HingeQp& p, double tol, int max_iter) {
  const Eigen::Index n = p.q.size();
  const Eigen::Index m = p.A.rows();
  const Eigen::Index r = p.G.rows();
  if ((m > 0 && p.A.cols() != n) || (p.lin.size() != 0 && p.lin.size() != n) || p.h.size() != m ||
      p.c.size() != m || (r > 0 && p.G.cols() != n) ||
      p.e.size() != r) {
    throw Error(ErrorCode::ShapeMismatch, "hinge qp: inconsistent problem sizes");
  }
  using Vec = Eigen::VectorXd;
  const Vec lin = p.lin.size() == n ? p.lin : Vec(Vec::Zero(n));
  const Eigen::MatrixXd A = m > 0 ? p.A : Eigen::MatrixXd(Eigen::MatrixXd::Zero(0, n));
  const Eigen::MatrixXd G = r > 0 ? p.G : Eigen::MatrixXd(Eigen::MatrixXd::Zero(0, n));
  auto max_abs = [](const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };

  Vec z = Vec::Zero(n);
  Vec xi = (p.h.array().max(0.0) + 1.0).matrix();
  // Slacks s1 = A z + xi - h, s2 = xi, s3 = G z - e and their duals.
  Vec s1 = Vec::Ones(m), s2 = xi, s3 = Vec::Ones(r);
  Vec l1 = (p.c * 0.5).cwiseMax(1e-8), l2 = (p.c * 0.5).cwiseMax(1e-8), l3 = Vec::Ones(r);

  const double scale = 1.0 + std::max({max_abs(p.h), max_abs(p.c), max_abs(p.e), max_abs(lin)});
  const Eigen::Index n_pairs = 2 * m + r;

  HingeQpResult out;
  // Late iterations can lose accuracy once the Newton system becomes badly
  // scaled, so the best iterate seen is what gets returned.
  double best_merit = std::numeric_limits<double>::infinity();
  int best_it = 0;
  Vec best_z = z, best_xi = xi, best_l1 = l1, best_l3 = l3;
  for (int it = 0; it < max_iter; ++it) {
    const Vec Az = A * z;
    const Vec Gz = G * z;
    const Vec rz = p.q.cwiseProduct(z) + lin - A.transpose() * l1 - G.transpose() * l3;
    const Vec rxi = p.c - l1 - l2;
    const Vec rp1 = Az + xi - p.h - s1;
    const Vec rp2 = xi - s2;
    const Vec rp3 = Gz - p.e - s3;
    const double gap = s1.dot(l1) + s2.dot(l2) + s3.dot(l3);
    const double mu = gap / static_cast<double>(std::max<Eigen::Index>(n_pairs, 1));

    const double primal_obj = 0.5 * z.dot(p.q.cwiseProduct(z)) + lin.dot(z) + p.c.dot(xi);
    // Each residual relative to the size of the terms it balances.
    const double dual_scale = 1.0 + std::max({max_abs(p.q.cwiseProduct(z)), max_abs(lin),
                                              max_abs(A.transpose() * l1), max_abs(G.transpose() * l3)});
    const double primal_scale = 1.0 + std::max({max_abs(Az), max_abs(Gz), max_abs(p.h), max_abs(p.e),
                                                max_abs(xi)});
    const double res = std::max({max_abs(rz) / dual_scale, max_abs(rxi) / scale,
                                 max_abs(rp1) / primal_scale, max_abs(rp2) / primal_scale,
                                 max_abs(rp3) / primal_scale});
    const double merit = std::max(res, gap / (1.0 + std::abs(primal_obj)));
    if (!std::isfinite(merit)) break;
    out.iterations = it;
    if (merit < best_merit) {
      best_merit = merit;
      best_it = it;
      best_z = z;
      best_xi = xi;
      best_l1 = l1;
      best_l3 = l3;
    }
    if (merit <= tol || it - best_it > 20) break;

    const Vec d1 = l1.cwiseQuotient(s1);
    const Vec d2 = l2.cwiseQuotient(s2);
    const Vec d3 = l3.cwiseQuotient(s3);
    const Vec eff = d1.cwiseProduct(d2).cwiseQuotient(d1 + d2);

    Eigen::MatrixXd H = A.transpose() * eff.asDiagonal() * A;
    H.diagonal() += p.q;
    H += G.transpose() * d3.asDiagonal() * G;
    // Unpenalized coordinates can make H nearly singular early on.
    H.diagonal().array() += 1e-14 * (1.0 + max_abs(p.q));
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);

    struct Step {
      Vec dz, dxi, dl1, dl2, dl3, ds1, ds2, ds3;
    };
    // rc* are the complementarity targets s .* l - sigma mu (+ corrector).
    auto solve = [&](const Vec& rc1, const Vec& rc2, const Vec& rc3) {
      Step st;
      const Vec u1 = rp1 + rc1.cwiseQuotient(l1);
      const Vec u2 = rp2 + rc2.cwiseQuotient(l2);
      const Vec u3 = rp3 + rc3.cwiseQuotient(l3);
      const Vec v = d1.cwiseQuotient(d1 + d2).cwiseProduct(rxi + d2.cwiseProduct(u2 - u1));
      const Vec rhs = -rz + A.transpose() * v - G.transpose() * d3.cwiseProduct(u3);
      st.dz = ldlt.solve(rhs);
      const Vec Adz = A * st.dz;
      st.dxi = -(rxi + d1.cwiseProduct(u1 + Adz) + d2.cwiseProduct(u2)).cwiseQuotient(d1 + d2);
      st.dl1 = d1.cwiseProduct(-u1 - Adz - st.dxi);
      st.dl2 = d2.cwiseProduct(-u2 - st.dxi);
      st.dl3 = d3.cwiseProduct(-u3 - G * st.dz);
      st.ds1 = -(rc1 + s1.cwiseProduct(st.dl1)).cwiseQuotient(l1);
      st.ds2 = -(rc2 + s2.cwiseProduct(st.dl2)).cwiseQuotient(l2);
      st.ds3 = -(rc3 + s3.cwiseProduct(st.dl3)).cwiseQuotient(l3);
      return st;
    };
    auto step_lengths = [&](const Step& st) {
      const double ap = std::min({max_step(s1, st.ds1), max_step(s2, st.ds2), max_step(s3, st.ds3)});
      const double ad = std::min({max_step(l1, st.dl1), max_step(l2, st.dl2), max_step(l3, st.dl3)});
      return std::min(ap, ad);
    };

    const Vec sl1 = s1.cwiseProduct(l1), sl2 = s2.cwiseProduct(l2), sl3 = s3.cwiseProduct(l3);
    const Step aff = solve(sl1, sl2, sl3);
    const double a_aff = step_lengths(aff);
    const double gap_aff = (s1 + a_aff * aff.ds1).dot(l1 + a_aff * aff.dl1) +
                           (s2 + a_aff * aff.ds2).dot(l2 + a_aff * aff.dl2) +
                           (s3 + a_aff * aff.ds3).dot(l3 + a_aff * aff.dl3);
    const double sigma = std::pow(std::clamp(gap_aff / gap, 0.0, 1.0), 3);
    const double target = sigma * mu;
    const Step st = solve((sl1 + aff.ds1.cwiseProduct(aff.dl1)).array() - target,
                          (sl2 + aff.ds2.cwiseProduct(aff.dl2)).array() - target,
                          (sl3 + aff.ds3.cwiseProduct(aff.dl3)).array() - target);
    const double a = std::min(1.0, 0.995 * step_lengths(st));

    z += a * st.dz;
    xi += a * st.dxi;
    s1 += a * st.ds1;
    s2 += a * st.ds2;
    s3 += a * st.ds3;
    l1 += a * st.dl1;
    l2 += a * st.dl2;
    l3 += a * st.dl3;
    out.iterations = it + 1;
  }
  out.converged = best_merit <= tol;
  out.merit = best_merit;
  out.z = std::move(best_z);
  out.xi = std::move(best_xi);
  out.soft_duals = std::move(best_l1);
  out.hard_duals = std::move(best_l3);
  out.objective = 0.5 * out.z.dot(p.q.cwiseProduct(out.z)) + lin.dot(out.z) + p.c.dot(out.xi);
  return out;
}

}  // namespace orthojoint
