#include <cmath>
#include <random>

#include "helpers.hpp"
#include "naive.hpp"
#include "orthojoint/joint.hpp"
#include "orthojoint/kdlor.hpp"
#include "qp_oracle.hpp"

using namespace orthojoint;
using test::ivec;
using test::rows;
using test::vec;

TEST_SUITE("kdlor") {
  TEST_CASE("scatter of singleton classes vanishes") {
    const Dataset d = make_dataset(rows({{1, 2}, {3, 1}}), ivec({-1, 1}), ivec({1, 2}), 2);
    CHECK(scatter(d).within.isZero(0.0));
  }

  TEST_CASE("scatter of two mirrored classes") {
    const Dataset d = make_dataset(rows({{0, 0}, {2, 0}, {0, 0}, {2, 0}}), ivec({-1, 1, -1, 1}),
                                   ivec({1, 1, 2, 2}), 2);
    const ScatterSummary s = scatter(d);
    CHECK((s.within - rows({{1, 0}, {0, 0}})).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(s.counts == ivec({2, 2}));
  }

  TEST_CASE("scatter matches the naive double loop") {
    std::mt19937_64 rng(12);
    const Dataset d = oracle::random_dataset(rng, 10, 3, 3);
    const ScatterSummary s = scatter(d);
    CHECK((s.within - oracle::naive_within_scatter(d)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.class_means - oracle::naive_class_means(d)).cwiseAbs().maxCoeff() < 1e-12);
    const ScatterSummary r = scatter_serial(d);
    CHECK((s.within - r.within).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("one active constraint in one dimension") {
    // class means 0 and 2, zero within-class spread
    const Dataset d = make_dataset(rows({{0}, {0}, {2}, {2}}), ivec({-1, 1, -1, 1}), ivec({1, 1, 2, 2}), 2);
    const ScatterSummary s = scatter(d);
    const KdlorSolution sol = solve_kdlor_linear(s, 1.0, Rank1Metric::identity(1), 0.1);
    CHECK(sol.w_a(0) > 0.0);
    CHECK(sol.w_a(0) * 2.0 == doctest::Approx(sol.rho).epsilon(1e-8));
    // min 0.1 w^2 - 2 w: w = 10
    CHECK(sol.w_a(0) == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(sol.multipliers.sum() == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("uncoupled solver matches the QP oracle") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
      const Dataset d = oracle::random_dataset(rng, 9, 2, 3, 1.5);
      const ScatterSummary s = scatter(d);
      const double ridge = default_scatter_ridge(s);
      const KdlorSolution sol = solve_kdlor_linear(s, 1.0, Rank1Metric::identity(2), ridge);
      const oracle::KdlorOracle o = oracle::kdlor_primal(d, 1.0, vec({0, 0}), 0.0, ridge);
      REQUIRE(o.converged);
      CHECK(test::rel(sol.objective, o.objective) < 1e-4);
      CHECK(test::rel(kdlor_objective(sol.w_a, s, 1.0, Rank1Metric::identity(2), ridge), o.objective) < 1e-4);
      const Eigen::MatrixXd diffs = s.mean_differences();
      for (int k = 0; k < 2; ++k) CHECK(sol.w_a.dot(diffs.col(k)) >= sol.rho - 1e-6);
    }
  }

  TEST_CASE("strong coupling keeps the direction orthogonal to the partner") {
    // classes separated along (0, 1) and (1, 1); partner direction (1, 0)
    const Dataset d = make_dataset(rows({{0, 0}, {0.5, 0.2}, {1, 1}, {1.5, 1.2}, {2, 2}, {2.5, 2.2}}),
                                   ivec({-1, 1, -1, 1, -1, 1}), ivec({1, 1, 2, 2, 3, 3}), 3);
    const ScatterSummary s = scatter(d);
    const Eigen::VectorXd wg = vec({1, 0});
    const double ridge = default_scatter_ridge(s);
    const KdlorSolution free = solve_kdlor_linear(s, 1.0, Rank1Metric::from_vector(wg, 0.0), ridge);
    const KdlorSolution coupled = solve_kdlor_linear(s, 1.0, Rank1Metric::from_vector(wg, 1e6), ridge);
    CHECK(std::abs(cos_angle(free.w_a, wg)) > 0.1);
    CHECK(std::abs(cos_angle(coupled.w_a, wg)) < 0.05);
    CHECK(coupled.rho > 0.0);
  }

  TEST_CASE("quadratic form has the ridge as its spectral floor") {
    std::mt19937_64 rng(14);
    const Dataset d = oracle::random_dataset(rng, 5, 4, 2);
    const ScatterSummary s = scatter(d);
    const Eigen::MatrixXd H = kdlor_quadratic(s, Rank1Metric::from_vector(vec({1, 2, 0, 1}), 10.0), 0.25);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    CHECK(es.eigenvalues().minCoeff() >= 0.25 * (1 - 1e-8));
  }

  TEST_CASE("thresholds are midpoints of projected means") {
    ScatterSummary s;
    s.class_means = rows({{0}, {2}, {6}});
    const Eigen::VectorXd b = derive_thresholds(vec({1}), s);
    CHECK(b(0) == 1.0);
    CHECK(b(1) == 4.0);
    s.class_means = rows({{-1, 0}, {3, 0}});
    CHECK(derive_thresholds(vec({0.5, 7}), s)(0) == doctest::Approx(0.5));
  }

  TEST_CASE("positive margin gives strictly increasing thresholds") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 10; ++rep) {
      const Dataset d = oracle::random_dataset(rng, 20, 3, 4, 1.5);
      const ScatterSummary s = scatter(d);
      const KdlorSolution sol = solve_kdlor_linear(s, 1.0, Rank1Metric::identity(3), default_scatter_ridge(s));
      REQUIRE(sol.rho > 0.0);
      for (int k = 0; k + 1 < 3; ++k) CHECK(sol.thresholds(k + 1) > sol.thresholds(k));
    }
  }

  TEST_CASE("unorderable means are reported") {
    // class means 0, 2, 0 on a line cannot all be separated
    const Dataset d = make_dataset(rows({{0}, {0}, {2}, {2}, {0}, {0}}), ivec({-1, 1, -1, 1, -1, 1}),
                                   ivec({1, 1, 2, 2, 3, 3}), 3);
    const ScatterSummary s = scatter(d);
    CHECK(test::code_of([&] { solve_kdlor_linear(s, 1.0, Rank1Metric::identity(1), 0.1); }) ==
          ErrorCode::DegenerateMeans);
  }

  TEST_CASE("class prediction with ties going down") {
    JointLinearModel m;
    m.method = OrdinalMethod::Kdlor;
    m.w_a = vec({1});
    m.thresholds = vec({1, 4});
    CHECK(predict_ordinal_kdlor(m, rows({{-5}, {9}, {1}, {2}, {4}})) == ivec({1, 3, 1, 2, 2}));
  }

  TEST_CASE("linear kernel reproduces the linear solver") {
    std::mt19937_64 rng(16);
    const Dataset d = oracle::random_dataset(rng, 30, 3, 3, 1.5);
    const ScatterSummary s = scatter(d);
    const double ridge = default_scatter_ridge(s);
    const KdlorSolution lin = solve_kdlor_linear(s, 1.0, Rank1Metric::identity(3), ridge);
    const Eigen::MatrixXd K = gram({}, d.features, d.features);
    const KdlorSolution ker = solve_kdlor_kernel(d, K, 1.0, Eigen::VectorXd::Zero(30), 0.0, ridge);
    const Eigen::MatrixXd T = oracle::random_dataset(rng, 40, 3, 3, 1.5).features;
    const Eigen::VectorXd p_lin = T * lin.w_a;
    const Eigen::VectorXd p_ker = gram({}, T, d.features) * ker.beta;
    CHECK((p_lin - p_ker).cwiseAbs().maxCoeff() < 1e-3 * (1 + p_lin.cwiseAbs().maxCoeff()));
    CHECK((lin.thresholds - ker.thresholds).cwiseAbs().maxCoeff() < 1e-3 * (1 + lin.thresholds.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("duplicated samples add nothing to the centered quadratic form") {
    const Eigen::MatrixXd X = rows({{1, 1}, {1, 1}, {3, 0}, {4, 1}});
    const Eigen::VectorXi cls = ivec({1, 1, 2, 2});
    const Eigen::MatrixXd Kc = class_center_gram(gram({KernelKind::Rbf, 0.5}, X, X), cls, 2);
    CHECK(Kc.row(0).isZero(1e-15));
    CHECK(Kc.row(1).isZero(1e-15));
  }

  TEST_CASE("uncoupled kernel solver matches the QP oracle") {
    std::mt19937_64 rng(17);
    const Dataset d = oracle::random_dataset(rng, 6, 2, 2, 1.5);
    const double ridge = 0.05;
    const Eigen::MatrixXd K = gram({}, d.features, d.features);
    const KdlorSolution ker = solve_kdlor_kernel(d, K, 1.0, Eigen::VectorXd::Zero(6), 0.0, ridge);
    const oracle::KdlorOracle o = oracle::kdlor_primal(d, 1.0, vec({0, 0}), 0.0, ridge);
    CHECK(test::rel(ker.objective, o.objective) < 1e-4);
  }
}
