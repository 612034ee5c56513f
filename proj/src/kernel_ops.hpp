#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <random>

#include "segreg/error.hpp"
#include "segreg/kernels.hpp"

namespace segreg::kernels::detail {

inline Neighbors nearest_two_row(const double* q, const Matrix& ref) {
  Neighbors n;
  const Eigen::Index dim = ref.cols();
  for (Eigen::Index j = 0; j < ref.rows(); ++j) {
    const double* r = ref.data() + j * dim;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double diff = q[k] - r[k];
      acc += diff * diff;
    }
    const double d = std::sqrt(acc);
    if (d < n.d1) {
      n.second = n.first;
      n.d2 = n.d1;
      n.first = j;
      n.d1 = d;
    } else if (d < n.d2) {
      n.second = j;
      n.d2 = d;
    }
  }
  return n;
}

inline void warp_row(const RasterImage& src, const Eigen::Matrix3d& inv, RasterImage& dst, int y) {
  const int c = dst.channels;
  for (int x = 0; x < dst.width; ++x) {
    const auto mapped = try_map(inv, {x + 0.5, y + 0.5});
    std::uint8_t* out = &dst.at(x, y, 0);
    if (!mapped) {
      std::fill(out, out + c, std::uint8_t{0});
      continue;
    }
    const double sx = mapped->x - 0.5;
    const double sy = mapped->y - 0.5;
    if (!(sx >= 0.0 && sy >= 0.0 && sx <= src.width - 1.0 && sy <= src.height - 1.0)) {
      std::fill(out, out + c, std::uint8_t{0});
      continue;
    }
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const int x1 = std::min(x0 + 1, src.width - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    for (int ch = 0; ch < c; ++ch) {
      const double top = (1.0 - fx) * src.at(x0, y0, ch) + fx * src.at(x1, y0, ch);
      const double bottom = (1.0 - fx) * src.at(x0, y1, ch) + fx * src.at(x1, y1, ch);
      const double v = (1.0 - fy) * top + fy * bottom;
      out[ch] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
}

inline DisplacementSum displacement_row(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, int width, int y,
                                        int step) {
  DisplacementSum row;
  for (int x = 0; x < width; x += step) {
    const Point2 p{x + 0.5, y + 0.5};
    const auto pa = try_map(a, p);
    const auto pb = try_map(b, p);
    if (!pa || !pb) {
      row.ok = false;
      continue;
    }
    const double dx = pa->x - pb->x;
    const double dy = pa->y - pb->y;
    row.sum += dx * dx + dy * dy;
    ++row.count;
  }
  return row;
}

inline TrialResult run_trial(std::span<const Correspondence> pairs, ModelKind kind, double threshold,
                             std::uint64_t seed) {
  constexpr int kMaxDraws = 100;
  const std::size_t s = minimal_sample_size(kind);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  std::array<Correspondence, 4> sample{};
  std::array<std::size_t, 4> idx{};
  TrialResult result;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    for (std::size_t k = 0; k < s; ++k) {
      std::size_t candidate;
      do {
        candidate = pick(rng);
      } while (std::find(idx.begin(), idx.begin() + k, candidate) != idx.begin() + k);
      idx[k] = candidate;
      sample[k] = pairs[candidate];
    }
    const std::span<const Correspondence> view(sample.data(), s);
    if (sample_is_degenerate(view)) continue;
    try {
      result.model = estimate_lsq(kind, view).matrix();
    } catch (const DegenerateConfiguration&) {
      continue;
    }
    result.valid = true;
    break;
  }
  if (!result.valid) return result;
  const double t2 = threshold * threshold;
  for (const auto& c : pairs) {
    const auto m = try_map(result.model, c.query);
    if (!m) continue;
    const double dx = m->x - c.ref.x;
    const double dy = m->y - c.ref.y;
    if (dx * dx + dy * dy < t2) ++result.inliers;
  }
  return result;
}

inline void sample_point(const WaveField& field, Point2 p, std::span<float> out, std::size_t index,
                         std::size_t stride) {
  for (std::size_t c = 0; c < field.channels(); ++c) {
    const double arg = (field.dir_x[c] * p.x + field.dir_y[c] * p.y) * field.wavenumber[c] + field.phase[c];
    out[c * stride + index] = static_cast<float>(std::sin(arg));
  }
}

}  // namespace segreg::kernels::detail
