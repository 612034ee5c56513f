#include "kernel_ops.hpp"

namespace segreg::kernels {

std::vector<Neighbors> nearest_two_serial(const Matrix& query, const Matrix& ref) {
  std::vector<Neighbors> out(static_cast<std::size_t>(query.rows()));
  for (Eigen::Index i = 0; i < query.rows(); ++i)
    out[static_cast<std::size_t>(i)] = detail::nearest_two_row(query.data() + i * query.cols(), ref);
  return out;
}

void warp_bilinear_serial(const RasterImage& src, const Eigen::Matrix3d& inverse, RasterImage& dst) {
  for (int y = 0; y < dst.height; ++y) detail::warp_row(src, inverse, dst, y);
}

DisplacementSum displacement_sq_serial(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, int width, int height,
                                       int step) {
  DisplacementSum total;
  for (int y = 0; y < height; y += step) {
    const auto row = detail::displacement_row(a, b, width, y, step);
    total.sum += row.sum;
    total.count += row.count;
    total.ok = total.ok && row.ok;
  }
  return total;
}

std::vector<TrialResult> ransac_trials_serial(std::span<const Correspondence> pairs, ModelKind kind,
                                              double threshold, std::uint64_t seed, std::size_t first,
                                              std::size_t count) {
  std::vector<TrialResult> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = detail::run_trial(pairs, kind, threshold, seed + first + i);
  return out;
}

void sample_field_serial(const WaveField& field, std::span<const Point2> points, std::span<float> out) {
  if (out.size() != field.channels() * points.size()) throw ValidationError("field output size mismatch");
  for (std::size_t i = 0; i < points.size(); ++i) detail::sample_point(field, points[i], out, i, points.size());
}

}  // namespace segreg::kernels
