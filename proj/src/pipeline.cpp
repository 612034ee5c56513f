#include "segreg/pipeline.hpp"

#include <algorithm>

#include "segreg/error.hpp"

namespace segreg {

void PipelineConfig::validate() const {
  for (const auto& l : layers)
    if (l.kernel < 1 || l.stride < 1 || l.padding < 0) throw ValidationError("invalid layer in stack");
  if (pca_dim < 1) throw ValidationError("PCA dimension must be >= 1");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ValidationError("ratio must be in (0, 1]");
  if (grid_stride < 1) throw ValidationError("grid stride must be >= 1");
  if (!(mask_threshold >= 0.0f && mask_threshold <= 1.0f)) throw ValidationError("mask threshold must be in [0, 1]");
  for (int c : classes)
    if (c < 0) throw ValidationError("class ids must be nonnegative");
  ransac.validate();
}

RansacParams PipelineConfig::resolved_ransac() const {
  RansacParams params = ransac;
  if (grid_threshold) params.threshold = std::max(3.0, 0.75 * static_cast<double>(geometry().jump));
  return params;
}

std::vector<Correspondence> correspondences(const MatchSet& matches) {
  std::vector<Correspondence> out;
  out.reserve(matches.pairs.size());
  for (const auto& m : matches.pairs) out.push_back({m.query, m.ref});
  return out;
}

RegistrationResult register_features(const SegSFSet& query, const SegSFSet& ref, const PipelineConfig& config) {
  config.validate();
  RegistrationResult result;
  MatchOptions options;
  options.ratio = config.ratio;
  options.pca_dim = config.pca_dim;
  options.cross_check = config.cross_check;
  options.exec = config.exec;
  result.matches = match_all(query, ref, config.classes, options);
  const auto pairs = correspondences(result.matches);
  result.ransac = ransac_fit(pairs, config.model, config.resolved_ransac(), config.exec);
  return result;
}

RegistrationResult register_tensors(const Tensor& query_features, const Tensor& query_mask,
                                    const Tensor& ref_features, const Tensor& ref_mask,
                                    const PipelineConfig& config) {
  config.validate();
  const RFState state = config.geometry();
  const SegSFSet q = assemble_features(query_features, mask_from_tensor(query_mask, config.mask_threshold), state,
                                       config.keypoint_mode);
  const SegSFSet r = assemble_features(ref_features, mask_from_tensor(ref_mask, config.mask_threshold), state,
                                       config.keypoint_mode);
  return register_features(q, r, config);
}

}  // namespace segreg
