#include "segreg/geo_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "segreg/error.hpp"
#include "segreg/kernels.hpp"

namespace segreg {

namespace {

constexpr double kMinW = 1e-12;
constexpr double kCollinear = 1e-9;
constexpr int kRefitRounds = 10;

double cross(Point2 a, Point2 b, Point2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Similarity that moves the centroid to the origin and the mean distance
// from it to sqrt(2).
Eigen::Matrix3d normalizer(std::span<const Correspondence> pairs, bool query_side) {
  double cx = 0.0, cy = 0.0;
  for (const auto& c : pairs) {
    const Point2 p = query_side ? c.query : c.ref;
    cx += p.x;
    cy += p.y;
  }
  const double n = static_cast<double>(pairs.size());
  cx /= n;
  cy /= n;
  double mean_dist = 0.0;
  for (const auto& c : pairs) {
    const Point2 p = query_side ? c.query : c.ref;
    mean_dist += std::hypot(p.x - cx, p.y - cy);
  }
  mean_dist /= n;
  if (!(mean_dist > 0.0) || !std::isfinite(mean_dist)) throw DegenerateConfiguration();
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

bool well_conditioned(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) return false;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(2) > s(0) * 1e-15;
}

}  // namespace

ModelKind parse_model_kind(std::string_view text) {
  if (text == "affine") return ModelKind::Affine;
  if (text == "homography") return ModelKind::Homography;
  throw ValidationError("unknown model kind '" + std::string(text) + "' (expected affine|homography)");
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::Affine ? "affine" : "homography"; }

std::size_t minimal_sample_size(ModelKind kind) { return kind == ModelKind::Affine ? 3 : 4; }

TransformModel TransformModel::from_matrix(ModelKind kind, const Eigen::Matrix3d& m) {
  TransformModel t;
  t.kind_ = kind;
  t.m_ = m;
  if (kind == ModelKind::Affine) {
    if (m(2, 0) != 0.0 || m(2, 1) != 0.0 || m(2, 2) != 1.0)
      throw ValidationError("affine transform must have bottom row (0, 0, 1)");
  } else {
    if (!std::isfinite(m(2, 2)) || std::abs(m(2, 2)) <= std::numeric_limits<double>::epsilon() * m.norm())
      throw DegenerateConfiguration();
    t.m_ /= m(2, 2);
  }
  if (!well_conditioned(t.m_)) throw DegenerateConfiguration();
  return t;
}

TransformModel TransformModel::from_row_major(ModelKind kind, std::span<const double, 9> v) {
  Eigen::Matrix3d m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return from_matrix(kind, m);
}

TransformModel TransformModel::translation(double dx, double dy) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 2) = dx;
  m(1, 2) = dy;
  return from_matrix(ModelKind::Affine, m);
}

std::array<double, 9> TransformModel::row_major() const {
  return {m_(0, 0), m_(0, 1), m_(0, 2), m_(1, 0), m_(1, 1), m_(1, 2), m_(2, 0), m_(2, 1), m_(2, 2)};
}

TransformModel TransformModel::inverse() const {
  if (kind_ == ModelKind::Affine) {
    const double a = m_(0, 0), b = m_(0, 1), c = m_(0, 2);
    const double d = m_(1, 0), e = m_(1, 1), f = m_(1, 2);
    const double det = a * e - b * d;
    if (det == 0.0 || !std::isfinite(det)) throw DegenerateConfiguration();
    Eigen::Matrix3d inv = Eigen::Matrix3d::Identity();
    inv(0, 0) = e / det;
    inv(0, 1) = -b / det;
    inv(1, 0) = -d / det;
    inv(1, 1) = a / det;
    inv(0, 2) = -(inv(0, 0) * c + inv(0, 1) * f);
    inv(1, 2) = -(inv(1, 0) * c + inv(1, 1) * f);
    return from_matrix(ModelKind::Affine, inv);
  }
  return from_matrix(ModelKind::Homography, m_.inverse());
}

TransformModel TransformModel::then(const TransformModel& next) const {
  const ModelKind kind =
      kind_ == ModelKind::Affine && next.kind_ == ModelKind::Affine ? ModelKind::Affine : ModelKind::Homography;
  Eigen::Matrix3d m = next.m_ * m_;
  if (kind == ModelKind::Affine) m.row(2) << 0.0, 0.0, 1.0;
  return from_matrix(kind, m);
}

std::optional<Point2> try_map(const Eigen::Matrix3d& m, Point2 p) noexcept {
  const double w = m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2);
  if (!(w > kMinW)) return std::nullopt;
  const double x = m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2);
  const double y = m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2);
  if (w == 1.0) return Point2{x, y};
  return Point2{x / w, y / w};
}

Point2 apply_transform(const TransformModel& t, Point2 p) {
  const auto out = try_map(t.matrix(), p);
  if (!out) throw PointAtInfinity();
  return *out;
}

bool sample_is_degenerate(std::span<const Correspondence> sample) {
  const std::size_t n = sample.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (std::abs(cross(sample[i].query, sample[j].query, sample[k].query)) < kCollinear) return true;
        if (std::abs(cross(sample[i].ref, sample[j].ref, sample[k].ref)) < kCollinear) return true;
      }
  return false;
}

TransformModel estimate_affine_lsq(std::span<const Correspondence> pairs) {
  if (pairs.size() < 3) throw DegenerateConfiguration();
  const Eigen::Matrix3d tq = normalizer(pairs, true);
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = pairs[static_cast<std::size_t>(i)];
    design(i, 0) = tq(0, 0) * c.query.x + tq(0, 2);
    design(i, 1) = tq(1, 1) * c.query.y + tq(1, 2);
    design(i, 2) = 1.0;
    rhs(i, 0) = c.ref.x;
    rhs(i, 1) = c.ref.y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw DegenerateConfiguration();
  const Eigen::MatrixXd sol = qr.solve(rhs);  // 3 x 2

  Eigen::Matrix3d normalized = Eigen::Matrix3d::Identity();
  normalized.block<2, 3>(0, 0) = sol.transpose();
  Eigen::Matrix3d m = normalized * tq;
  m.row(2) << 0.0, 0.0, 1.0;
  return TransformModel::from_matrix(ModelKind::Affine, m);
}

TransformModel estimate_homography_lsq(std::span<const Correspondence> pairs) {
  if (pairs.size() < 4) throw DegenerateConfiguration();
  if (pairs.size() == 4 && sample_is_degenerate(pairs)) throw DegenerateConfiguration();
  const Eigen::Matrix3d tq = normalizer(pairs, true);
  const Eigen::Matrix3d tr = normalizer(pairs, false);
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = pairs[static_cast<std::size_t>(i)];
    const double x = tq(0, 0) * c.query.x + tq(0, 2);
    const double y = tq(1, 1) * c.query.y + tq(1, 2);
    const double u = tr(0, 0) * c.ref.x + tr(0, 2);
    const double v = tr(1, 1) * c.ref.y + tr(1, 2);
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  // null space must be one-dimensional
  if (!(sigma(7) > sigma(0) * 1e-12)) throw DegenerateConfiguration();
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d m = tr.inverse() * hn * tq;
  return TransformModel::from_matrix(ModelKind::Homography, m);
}

TransformModel estimate_lsq(ModelKind kind, std::span<const Correspondence> pairs) {
  return kind == ModelKind::Affine ? estimate_affine_lsq(pairs) : estimate_homography_lsq(pairs);
}

void RansacParams::validate() const {
  if (!(threshold > 0.0)) throw ValidationError("RANSAC threshold must be > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("RANSAC confidence must be in (0, 1)");
  if (max_iterations < 1) throw ValidationError("RANSAC max iterations must be >= 1");
}

std::size_t count_inliers(const TransformModel& t, std::span<const Correspondence> pairs, double threshold,
                          std::vector<std::uint8_t>* flags) {
  if (flags) flags->assign(pairs.size(), 0);
  const double t2 = threshold * threshold;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto m = try_map(t.matrix(), pairs[i].query);
    if (!m) continue;
    const double dx = m->x - pairs[i].ref.x;
    const double dy = m->y - pairs[i].ref.y;
    if (dx * dx + dy * dy < t2) {
      ++count;
      if (flags) (*flags)[i] = 1;
    }
  }
  return count;
}

RansacResult ransac_fit(std::span<const Correspondence> pairs, ModelKind kind, const RansacParams& params,
                        Exec exec) {
  params.validate();
  const std::size_t s = minimal_sample_size(kind);
  if (pairs.size() < s) throw NotEnoughMatches();

  const double n = static_cast<double>(pairs.size());
  const double log_fail = std::log(1.0 - params.confidence);
  std::size_t budget = params.max_iterations;
  std::size_t next = 0;
  bool have_best = false;
  kernels::TrialResult best;

  const std::size_t batch = exec == Exec::Serial ? 1 : 64;
  while (next < budget) {
    const std::size_t count = std::min(batch, budget - next);
    const auto trials = exec == Exec::Serial
                            ? kernels::ransac_trials_serial(pairs, kind, params.threshold, params.seed, next, count)
                            : kernels::ransac_trials_omp(pairs, kind, params.threshold, params.seed, next, count);
    // Sequential scan keeps the adaptive stopping rule independent of batching.
    for (const auto& trial : trials) {
      if (next >= budget) break;
      ++next;
      if (!trial.valid || (have_best && trial.inliers <= best.inliers)) continue;
      best = trial;
      have_best = true;
      const double w = static_cast<double>(best.inliers) / n;
      const double all_inlier = std::pow(w, static_cast<double>(s));
      if (all_inlier >= 1.0) {
        budget = next;
      } else if (all_inlier > 0.0) {
        const double needed = std::ceil(log_fail / std::log1p(-all_inlier));
        if (needed < static_cast<double>(budget)) budget = std::max(next, static_cast<std::size_t>(needed));
      }
    }
  }

  if (!have_best || best.inliers < s + 1) throw NoConsensus();

  RansacResult result;
  result.iterations = next;
  result.sample_inlier_count = best.inliers;
  const TransformModel sample_model = TransformModel::from_matrix(kind, best.model);

  // Least-squares refit, repeated on the refit's own inlier set until that set
  // stops changing. A refit is kept only if it retains at least as many
  // inliers as the minimal-sample model.
  result.model = sample_model;
  result.refit_used = false;
  std::vector<std::uint8_t> flags;
  count_inliers(sample_model, pairs, params.threshold, &flags);
  for (int round = 0; round < kRefitRounds; ++round) {
    std::vector<Correspondence> support;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (flags[i]) support.push_back(pairs[i]);
    TransformModel refit;
    try {
      refit = estimate_lsq(kind, support);
    } catch (const DegenerateConfiguration&) {
      break;
    }
    std::vector<std::uint8_t> refit_flags;
    if (count_inliers(refit, pairs, params.threshold, &refit_flags) < best.inliers) break;
    result.model = refit;
    result.refit_used = true;
    if (refit_flags == flags) break;
    flags.swap(refit_flags);
  }
  result.inlier_count = count_inliers(result.model, pairs, params.threshold, &result.inliers);
  return result;
}

RasterImage warp_image(const RasterImage& img, const TransformModel& t, int width, int height, Exec exec) {
  const Eigen::Matrix3d inv = t.inverse().matrix();
  RasterImage out(width, height, img.channels);
  if (exec == Exec::Serial)
    kernels::warp_bilinear_serial(img, inv, out);
  else
    kernels::warp_bilinear_omp(img, inv, out);
  return out;
}

}  // namespace segreg
