#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <omp.h>

#include "helpers.hpp"
#include "naive.hpp"
#include "orthojoint/eval.hpp"
#include "orthojoint/joint.hpp"
#include "orthojoint/synthetic.hpp"

using namespace orthojoint;
using test::ivec;
using test::vec;

namespace {

std::map<std::pair<int, int>, int> cell_counts(const Dataset& d) {
  std::map<std::pair<int, int>, int> c;
  for (int i = 0; i < d.size(); ++i) c[{d.classes(i), d.genders(i)}]++;
  return c;
}

SyntheticSpec small_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.n_per_cell = 6;
  s.num_classes = 4;
  s.dim = 4;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("accuracy values") {
    CHECK(accuracy(ivec({1, -1, 1}), ivec({1, -1, 1})) == 1.0);
    CHECK(accuracy(ivec({1, -1}), ivec({-1, 1})) == 0.0);
    CHECK(accuracy(ivec({1, 1, -1, -1}), ivec({1, 1, -1, 1})) == 0.75);
    CHECK(test::code_of([] { accuracy(ivec({1}), ivec({1, 1})); }) == ErrorCode::ShapeMismatch);
    CHECK(test::code_of([] { accuracy(Eigen::VectorXi(), Eigen::VectorXi()); }) == ErrorCode::EmptyInput);
  }

  TEST_CASE("mae values") {
    CHECK(mae(vec({3, 4}), vec({3, 4})) == 0.0);
    CHECK(mae(vec({20, 30}), vec({22, 26})) == 3.0);
    CHECK(test::code_of([] { mae(Eigen::VectorXd(), Eigen::VectorXd()); }) == ErrorCode::EmptyInput);
  }

  TEST_CASE("metrics match naive loops") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 50; ++rep) {
      const int n = 1 + rep;
      Eigen::VectorXd p(n), t(n);
      Eigen::VectorXi a(n), b(n);
      for (int i = 0; i < n; ++i) {
        p(i) = nd(rng) * 30;
        t(i) = nd(rng) * 30;
        a(i) = nd(rng) > 0 ? 1 : -1;
        b(i) = nd(rng) > 0 ? 1 : -1;
      }
      CHECK(std::abs(mae(p, t) - oracle::naive_mae({p.data(), p.data() + n}, {t.data(), t.data() + n})) < 1e-12);
      CHECK(std::abs(accuracy(a, b) - oracle::naive_accuracy({a.data(), a.data() + n}, {b.data(), b.data() + n})) <
            1e-12);
    }
  }

  TEST_CASE("evaluate reports ages in original units") {
    Dataset d = generate_synthetic(small_spec(1));
    d.labels.class_ages = {10, 20, 40, 80};
    TrainConfig c;
    const JointFit fit = train_joint(d, c);
    const EvalResult r = evaluate(fit.model, d);
    CHECK(r.n == d.size());
    CHECK(r.confusion.sum() == d.size());
    CHECK(r.age_mae >= 0.0);
    // every misclassified sample costs at least 10 years here
    const int wrong = d.size() - static_cast<int>(r.confusion.trace());
    CHECK(r.age_mae * d.size() >= 10.0 * wrong - 1e-9);
  }

  TEST_CASE("split leaving one sample per cell for testing") {
    const Dataset d = generate_synthetic(small_spec(2));
    const Split s = stratified_split(d, 5, 9);
    for (const auto& [cell, n] : cell_counts(s.test)) CHECK(n == 1);
    for (const auto& [cell, n] : cell_counts(s.train)) CHECK(n == 5);
    CHECK(s.train.size() + s.test.size() == d.size());
  }

  TEST_CASE("split determinism and seed sensitivity") {
    SyntheticSpec spec = small_spec(3);
    spec.n_per_cell = 12;
    spec.num_classes = 4;  // 96 samples
    const Dataset d = generate_synthetic(spec);
    const Split a = stratified_split(d, 6, 1), b = stratified_split(d, 6, 1), c = stratified_split(d, 6, 2);
    CHECK(a.train_rows == b.train_rows);
    CHECK(a.train_rows != c.train_rows);
    CHECK(cell_counts(a.train) == cell_counts(c.train));
    CHECK(cell_counts(a.test) == cell_counts(c.test));
  }

  TEST_CASE("split needs enough samples in every cell") {
    const Dataset d = generate_synthetic(small_spec(4));
    const auto code = test::code_of([&] { stratified_split(d, 6, 1); });
    CHECK(code == ErrorCode::InsufficientSamples);
  }

  TEST_CASE("folds are balanced per cell") {
    const Dataset d = generate_synthetic(small_spec(5));
    const std::vector<int> f = stratified_folds(d, 3, 4);
    std::map<std::pair<int, int>, std::vector<int>> per;
    for (int i = 0; i < d.size(); ++i) {
      auto& v = per[{d.classes(i), d.genders(i)}];
      v.resize(3, 0);
      v[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])]++;
    }
    for (const auto& [cell, counts] : per) {
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
    }
  }

  TEST_CASE("single-point grid returns that config") {
    const Dataset d = generate_synthetic(small_spec(6));
    GridSpec g;
    g.lambda1 = {0.5};
    g.lambda2 = {2.0};
    g.lambda3 = {1e3};
    const GridResult r = grid_search(d, TrainConfig{}, g, 3, 1);
    CHECK(r.best.lambda1 == 0.5);
    CHECK(r.best.lambda2 == 2.0);
    CHECK(r.best.lambda3 == 1e3);
    CHECK(r.table.size() == 3);
    CHECK(r.best_score.ok);
  }

  TEST_CASE("selection follows mae, then accuracy, then smaller lambda3") {
    const Dataset d = generate_synthetic(small_spec(7));
    GridSpec g;
    g.lambda1 = {1e-6, 1.0};
    g.lambda2 = {1e-6, 1.0};
    g.lambda3 = {0.0, 1e3};
    const GridResult r = grid_search(d, TrainConfig{}, g, 3, 2);
    const ConfigScore* expect = nullptr;
    for (const auto& c : r.configs) {
      if (!c.ok) continue;
      if (expect == nullptr || c.mean_mae < expect->mean_mae - 1e-12 ||
          (std::abs(c.mean_mae - expect->mean_mae) <= 1e-12 &&
           (c.mean_acc > expect->mean_acc + 1e-12 ||
            (std::abs(c.mean_acc - expect->mean_acc) <= 1e-12 && c.config.lambda3 < expect->config.lambda3)))) {
        expect = &c;
      }
    }
    REQUIRE(expect != nullptr);
    CHECK(r.best.lambda1 == expect->config.lambda1);
    CHECK(r.best.lambda2 == expect->config.lambda2);
    CHECK(r.best.lambda3 == expect->config.lambda3);
    for (const auto& c : r.configs) {
      if (c.ok) CHECK(r.best_score.mean_mae <= c.mean_mae + 1e-12);
    }
  }

  TEST_CASE("coupled config wins on the benchmark") {
    const Dataset d = generate_synthetic(benchmark_spec(1));
    for (OrdinalMethod m : {OrdinalMethod::Svor, OrdinalMethod::Kdlor}) {
      TrainConfig base;
      base.ordinal_method = m;
      GridSpec g;
      g.lambda3 = {0.0, 1e6};
      const GridResult r = grid_search(d, base, g, 3, 1);
      CHECK(r.best.lambda3 == 1e6);
      CHECK(r.configs[1].mean_mae <= r.configs[0].mean_mae);
    }
  }

  TEST_CASE("grid scores do not depend on the thread count") {
    const Dataset d = generate_synthetic(small_spec(8));
    GridSpec g;
    g.lambda3 = {1.0, 1e3, 1e6};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const GridResult one = grid_search(d, TrainConfig{}, g, 3, 5);
    omp_set_num_threads(std::max(saved, 4));
    const GridResult many = grid_search(d, TrainConfig{}, g, 3, 5);
    omp_set_num_threads(saved);
    std::ostringstream a, b;
    write_score_table(a, one.table);
    write_score_table(b, many.table);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("lambda1,lambda2,lambda3,fold,acc,mae,cos_angle\n", 0) == 0);
  }
}
