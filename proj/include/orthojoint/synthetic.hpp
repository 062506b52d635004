#pragma once

#include <cstdint>
#include <optional>

#include "orthojoint/core.hpp"

namespace orthojoint {

// Two labelled axes in the first two coordinates: g = e1 carries the binary
// label, a = cos(angle) e1 + sin(angle) e2 carries the ordinal class.
// Coordinates 3..D are pure noise.
struct SyntheticSpec {
  int n_per_cell = 10;  // samples per (class, gender) cell
  int num_classes = 10;
  int dim = 10;
  double axis_angle_deg = 90.0;
  double gender_gap = 2.0;
  double age_step = 1.0;
  double noise_sigma = 0.5;
  std::uint64_t seed = 0;
};

std::optional<Error> validate_spec(const SyntheticSpec& s);

// x = sign * gap/2 * g + k * age_step * a + N(0, sigma^2 I), rows ordered by
// class, then gender, then draw.
Dataset generate_synthetic(const SyntheticSpec& s);

// The fixed geometry used by the benchmarks: K = D = 10, orthogonal axes,
// noise 0.5 * age_step, 10 samples per cell.
SyntheticSpec benchmark_spec(std::uint64_t seed);

}  // namespace orthojoint
