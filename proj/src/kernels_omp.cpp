#include "kernel_ops.hpp"

namespace segreg::kernels {

std::vector<Neighbors> nearest_two_omp(const Matrix& query, const Matrix& ref) {
  const auto n = static_cast<std::int64_t>(query.rows());
  std::vector<Neighbors> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = detail::nearest_two_row(query.data() + i * query.cols(), ref);
  return out;
}

void warp_bilinear_omp(const RasterImage& src, const Eigen::Matrix3d& inverse, RasterImage& dst) {
#pragma omp parallel for schedule(static)
  for (int y = 0; y < dst.height; ++y) detail::warp_row(src, inverse, dst, y);
}

DisplacementSum displacement_sq_omp(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, int width, int height,
                                    int step) {
  const int rows = (height + step - 1) / step;
  std::vector<DisplacementSum> partial(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) partial[static_cast<std::size_t>(r)] = detail::displacement_row(a, b, width, r * step, step);

  // combined in row order so the sum matches the serial kernel bitwise
  DisplacementSum total;
  for (const auto& row : partial) {
    total.sum += row.sum;
    total.count += row.count;
    total.ok = total.ok && row.ok;
  }
  return total;
}

std::vector<TrialResult> ransac_trials_omp(std::span<const Correspondence> pairs, ModelKind kind, double threshold,
                                           std::uint64_t seed, std::size_t first, std::size_t count) {
  std::vector<TrialResult> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        detail::run_trial(pairs, kind, threshold, seed + first + static_cast<std::uint64_t>(i));
  return out;
}

void sample_field_omp(const WaveField& field, std::span<const Point2> points, std::span<float> out) {
  if (out.size() != field.channels() * points.size()) throw ValidationError("field output size mismatch");
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    detail::sample_point(field, points[static_cast<std::size_t>(i)], out, static_cast<std::size_t>(i), points.size());
}

}  // namespace segreg::kernels
