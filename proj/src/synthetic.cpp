#include "orthojoint/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace orthojoint {

std::optional<Error> validate_spec(const SyntheticSpec& s) {
  if (s.n_per_cell < 1) return Error(ErrorCode::InvalidConfig, "synthetic: n_per_cell must be >= 1");
  if (s.num_classes < 2) return Error(ErrorCode::InvalidConfig, "synthetic: K must be >= 2");
  if (s.dim < 2) return Error(ErrorCode::InvalidConfig, "synthetic: D must be >= 2");
  if (!(s.axis_angle_deg > 0.0 && s.axis_angle_deg <= 90.0)) {
    return Error(ErrorCode::InvalidConfig, "synthetic: axis_angle_deg must be in (0, 90]");
  }
  if (!(s.gender_gap > 0.0) || !std::isfinite(s.gender_gap)) {
    return Error(ErrorCode::InvalidConfig, "synthetic: gender_gap must be positive");
  }
  if (!(s.age_step > 0.0) || !std::isfinite(s.age_step)) {
    return Error(ErrorCode::InvalidConfig, "synthetic: age_step must be positive");
  }
  if (!(s.noise_sigma >= 0.0) || !std::isfinite(s.noise_sigma)) {
    return Error(ErrorCode::InvalidConfig, "synthetic: noise_sigma must be >= 0");
  }
  return std::nullopt;
}

Dataset generate_synthetic(const SyntheticSpec& s) {
  if (auto e = validate_spec(s)) throw *e;
  const double theta = s.axis_angle_deg * std::numbers::pi / 180.0;
  const double a1 = s.axis_angle_deg == 90.0 ? 0.0 : std::cos(theta);
  const double a2 = std::sin(theta);
  const int n = s.n_per_cell * s.num_classes * 2;

  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd X(n, s.dim);
  Eigen::VectorXi g(n);
  Eigen::VectorXi k(n);
  int row = 0;
  for (int c = 1; c <= s.num_classes; ++c) {
    for (int sign : {-1, 1}) {
      for (int r = 0; r < s.n_per_cell; ++r, ++row) {
        const double along_age = c * s.age_step;
        for (int j = 0; j < s.dim; ++j) X(row, j) = s.noise_sigma * noise(rng);
        X(row, 0) += sign * 0.5 * s.gender_gap + along_age * a1;
        X(row, 1) += along_age * a2;
        g(row) = sign;
        k(row) = c;
      }
    }
  }
  return make_dataset(std::move(X), std::move(g), std::move(k), s.num_classes);
}

SyntheticSpec benchmark_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.n_per_cell = 10;
  s.num_classes = 10;
  s.dim = 10;
  s.axis_angle_deg = 90.0;
  s.gender_gap = 2.0;
  s.age_step = 1.0;
  s.noise_sigma = 0.5;
  s.seed = seed;
  return s;
}

}  // namespace orthojoint
