#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "segreg/rf_geom.hpp"
#include "segreg/tensor_io.hpp"
#include "segreg/types.hpp"

namespace segreg {

/// Per-pixel class ids at input resolution.
struct LabelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Semantic features of one image: keypoint, descriptor, and class label per
/// feature-map cell. Descriptors are stored row-major, `channels` floats each.
struct SegSFSet {
  int width = 0;
  int height = 0;
  std::size_t channels = 0;
  std::vector<Point2> keypoints;
  std::vector<float> descriptors;
  std::vector<int> labels;

  std::size_t size() const { return keypoints.size(); }
  std::span<const float> descriptor(std::size_t i) const {
    return {descriptors.data() + i * channels, channels};
  }
};

/// Strict threshold: label 1 where prob > threshold. Input is H x W f32 in [0,1].
LabelMask threshold_mask(const Tensor& prob, float threshold = 0.5f);

/// f32 tensors are thresholded, u8 tensors are taken as class ids directly.
LabelMask mask_from_tensor(const Tensor& mask, float threshold = 0.5f);

/// One feature per cell of a C x h x w f32 map. Labels are sampled from `mask`
/// at the floor of each keypoint, clamped into the mask extent. Keypoints are
/// stored as computed.
SegSFSet assemble_features(const Tensor& fmap, const LabelMask& mask, const RFState& state,
                           KeypointMode mode);

/// Order-preserving subset of features whose label is in `classes`.
SegSFSet select_classes(const SegSFSet& set, std::span<const int> classes);

}  // namespace segreg
