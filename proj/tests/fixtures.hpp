#pragma once

// Seeded correspondence fixtures shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "segreg/eval_bench.hpp"
#include "segreg/geo_fit.hpp"

namespace fixture {

struct Outliers {
  std::vector<segreg::Correspondence> pairs;
  std::vector<std::uint8_t> truly_inlier;
  segreg::TransformModel truth;
};

/// `n` query points uniform over a size x size image, mapped by a rotation
/// about the center plus gaussian noise; a fraction of the reference points
/// is replaced by uniform positions.
inline Outliers rotation_with_outliers(std::uint64_t seed, double degrees, std::size_t n, double outlier_fraction,
                                       double noise, int size = 512) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, size);
  std::normal_distribution<double> jitter(0.0, noise);
  Outliers f;
  f.truth = segreg::rotate_about_center(degrees, size, size);
  const auto outliers = static_cast<std::size_t>(std::lround(outlier_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  f.truly_inlier.assign(n, 1);
  for (std::size_t i = 0; i < outliers; ++i) f.truly_inlier[order[i]] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const segreg::Point2 q{pos(rng), pos(rng)};
    segreg::Point2 r = segreg::apply_transform(f.truth, q);
    r.x += jitter(rng);
    r.y += jitter(rng);
    if (!f.truly_inlier[i]) r = {pos(rng), pos(rng)};
    f.pairs.push_back({q, r});
  }
  return f;
}

/// Rotation angle of the linear part, in degrees.
inline double rotation_degrees(const segreg::TransformModel& t) {
  const auto& m = t.matrix();
  return std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1)) * 180.0 / std::numbers::pi;
}

/// Correspondences with no common geometry, spread thinly enough that no
/// random model gathers a fourth inlier.
inline std::vector<segreg::Correspondence> random_pairs(std::uint64_t seed, std::size_t n, double extent) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::vector<segreg::Correspondence> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
  return pairs;
}

}  // namespace fixture
