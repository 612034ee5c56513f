#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; the two must agree bitwise for any thread count, so
// reductions are accumulated per row and combined in index order.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "segreg/descproc.hpp"
#include "segreg/geo_fit.hpp"
#include "segreg/tensor_io.hpp"

namespace segreg::kernels {

/// Two nearest rows of a reference matrix for one query row. Ties go to the
/// lowest reference index.
struct Neighbors {
  std::int64_t first = -1;
  std::int64_t second = -1;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
};

std::vector<Neighbors> nearest_two_serial(const Matrix& query, const Matrix& ref);
std::vector<Neighbors> nearest_two_omp(const Matrix& query, const Matrix& ref);

void warp_bilinear_serial(const RasterImage& src, const Eigen::Matrix3d& inverse, RasterImage& dst);
void warp_bilinear_omp(const RasterImage& src, const Eigen::Matrix3d& inverse, RasterImage& dst);

/// Sum over the pixel-center grid (stride `step`) of the squared distance
/// between the images of each point under `a` and `b`, plus the point count.
/// Sets `ok` to false if either map sends a grid point to infinity.
struct DisplacementSum {
  double sum = 0.0;
  std::size_t count = 0;
  bool ok = true;
};
DisplacementSum displacement_sq_serial(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, int width, int height,
                                       int step);
DisplacementSum displacement_sq_omp(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, int width, int height,
                                    int step);

struct TrialResult {
  bool valid = false;
  Eigen::Matrix3d model = Eigen::Matrix3d::Identity();
  std::size_t inliers = 0;
};

/// RANSAC trials [first, first + count), trial i seeded with seed + i.
std::vector<TrialResult> ransac_trials_serial(std::span<const Correspondence> pairs, ModelKind kind,
                                              double threshold, std::uint64_t seed, std::size_t first,
                                              std::size_t count);
std::vector<TrialResult> ransac_trials_omp(std::span<const Correspondence> pairs, ModelKind kind, double threshold,
                                           std::uint64_t seed, std::size_t first, std::size_t count);

/// Sum of plane waves: channel c at world point p is
/// sin(dot(direction[c], p) * wavenumber[c] + phase[c]).
struct WaveField {
  std::vector<double> dir_x;
  std::vector<double> dir_y;
  std::vector<double> wavenumber;
  std::vector<double> phase;

  std::size_t channels() const { return phase.size(); }
};

/// Writes channel-major samples (C x points.size()) into `out`.
void sample_field_serial(const WaveField& field, std::span<const Point2> points, std::span<float> out);
void sample_field_omp(const WaveField& field, std::span<const Point2> points, std::span<float> out);

}  // namespace segreg::kernels
