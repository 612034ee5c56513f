#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "segreg/tensor_io.hpp"
#include "segreg/types.hpp"

namespace segreg {

enum class ModelKind { Affine, Homography };

ModelKind parse_model_kind(std::string_view text);
std::string_view to_string(ModelKind kind);

/// Smallest sample that determines a model: 3 for affine, 4 for homography.
std::size_t minimal_sample_size(ModelKind kind);

/// Invertible 3x3 map from query pixel coordinates to reference pixel
/// coordinates. Affine models keep a bottom row of exactly (0, 0, 1);
/// homographies are scaled so element (2,2) is 1.
class TransformModel {
 public:
  TransformModel() = default;

  /// Validates and normalizes; throws DegenerateConfiguration if singular.
  static TransformModel from_matrix(ModelKind kind, const Eigen::Matrix3d& m);
  static TransformModel from_row_major(ModelKind kind, std::span<const double, 9> values);
  static TransformModel translation(double dx, double dy);

  ModelKind kind() const { return kind_; }
  const Eigen::Matrix3d& matrix() const { return m_; }
  std::array<double, 9> row_major() const;

  TransformModel inverse() const;
  /// `next` applied after this transform.
  TransformModel then(const TransformModel& next) const;

 private:
  ModelKind kind_ = ModelKind::Affine;
  Eigen::Matrix3d m_ = Eigen::Matrix3d::Identity();
};

/// Homogeneous multiply and dehomogenize; nullopt when w <= 1e-12.
std::optional<Point2> try_map(const Eigen::Matrix3d& m, Point2 p) noexcept;

/// Throws PointAtInfinity when the mapped w is <= 1e-12.
Point2 apply_transform(const TransformModel& t, Point2 p);

struct Correspondence {
  Point2 query;
  Point2 ref;
};

/// Least-squares affine over >= 3 pairs; throws DegenerateConfiguration when
/// the query points are collinear.
TransformModel estimate_affine_lsq(std::span<const Correspondence> pairs);

/// Normalized DLT over >= 4 pairs.
TransformModel estimate_homography_lsq(std::span<const Correspondence> pairs);

TransformModel estimate_lsq(ModelKind kind, std::span<const Correspondence> pairs);

/// True when some triple of the sample is collinear (|cross| < 1e-9) on
/// either side of the correspondence.
bool sample_is_degenerate(std::span<const Correspondence> sample);

struct RansacParams {
  double threshold = 3.0;  // pixels, reference frame
  double confidence = 0.995;
  std::size_t max_iterations = 5000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RansacResult {
  TransformModel model;
  std::vector<std::uint8_t> inliers;
  std::size_t inlier_count = 0;
  std::size_t iterations = 0;
  /// Inlier count of the best minimal-sample model before the refit.
  std::size_t sample_inlier_count = 0;
  /// False when the least-squares refit lost inliers and the minimal-sample
  /// model was kept instead.
  bool refit_used = true;
};

/// Seeded RANSAC with adaptive termination, then least-squares refits on the
/// inlier set until it stops changing.
/// Trial i draws its sample from a generator seeded with seed + i, so the
/// parallel path reproduces the serial result exactly.
RansacResult ransac_fit(std::span<const Correspondence> pairs, ModelKind kind, const RansacParams& params,
                        Exec exec = Exec::Parallel);

/// Count of pairs with reference-frame reprojection error < threshold.
std::size_t count_inliers(const TransformModel& t, std::span<const Correspondence> pairs, double threshold,
                          std::vector<std::uint8_t>* flags = nullptr);

/// Inverse-mapped bilinear warp of `img` into a width x height canvas in the
/// transform's target frame. Samples outside the source are 0.
RasterImage warp_image(const RasterImage& img, const TransformModel& t, int width, int height,
                       Exec exec = Exec::Parallel);

}  // namespace segreg
