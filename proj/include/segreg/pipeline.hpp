#pragma once

#include <vector>

#include "segreg/geo_fit.hpp"
#include "segreg/matching.hpp"
#include "segreg/rf_geom.hpp"
#include "segreg/segsf.hpp"
#include "segreg/tensor_io.hpp"

namespace segreg {

/// Every knob of the registration pipeline. Defaults: ratio 0.7, PCA to 100
/// dimensions, affine model, mask threshold 0.5, all classes.
struct PipelineConfig {
  std::vector<LayerSpec> layers = resnet34_decoder3_preset();
  KeypointMode keypoint_mode = KeypointMode::JumpCenter;
  std::vector<int> classes;  // empty: every class
  Eigen::Index pca_dim = 100;
  double ratio = 0.7;
  ModelKind model = ModelKind::Affine;
  RansacParams ransac;
  /// Ignore ransac.threshold and use max(3, 0.75 * jump): keypoints sit on a
  /// grid of pitch `jump`, so correct matches carry up to jump/2 of
  /// quantization error per axis.
  bool grid_threshold = true;
  int grid_stride = 1;
  float mask_threshold = 0.5f;
  bool cross_check = false;
  Exec exec = Exec::Parallel;

  void validate() const;
  RFState geometry() const { return chain(layers); }
  RansacParams resolved_ransac() const;
};

struct RegistrationResult {
  MatchSet matches;
  RansacResult ransac;
};

/// Class-conditioned matching followed by robust fitting. Throws
/// NotEnoughMatches / NoConsensus when no transform can be established.
RegistrationResult register_features(const SegSFSet& query, const SegSFSet& ref, const PipelineConfig& config);

/// Assembles features from C x h x w maps and H x W masks (f32 probability or
/// u8 labels), then registers.
RegistrationResult register_tensors(const Tensor& query_features, const Tensor& query_mask,
                                    const Tensor& ref_features, const Tensor& ref_mask,
                                    const PipelineConfig& config);

std::vector<Correspondence> correspondences(const MatchSet& matches);

}  // namespace segreg
