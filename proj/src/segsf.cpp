#include "segreg/segsf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "segreg/error.hpp"

namespace segreg {

namespace {

std::pair<int, int> mask_extent(const Tensor& t) {
  if (t.rank() != 2) throw ValidationError("mask must be 2-dimensional (H x W)");
  return {static_cast<int>(t.dims()[1]), static_cast<int>(t.dims()[0])};
}

}  // namespace

LabelMask threshold_mask(const Tensor& prob, float threshold) {
  const auto [w, h] = mask_extent(prob);
  const auto values = prob.f32_data();
  LabelMask mask{w, h, std::vector<std::uint8_t>(values.size())};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float v = values[i];
    if (!(v >= 0.0f && v <= 1.0f))
      throw ValidationError("probability mask value " + std::to_string(v) + " outside [0,1]");
    mask.labels[i] = v > threshold ? 1 : 0;
  }
  return mask;
}

LabelMask mask_from_tensor(const Tensor& mask, float threshold) {
  if (mask.dtype() == DType::F32) return threshold_mask(mask, threshold);
  const auto [w, h] = mask_extent(mask);
  const auto values = mask.u8_data();
  return {w, h, std::vector<std::uint8_t>(values.begin(), values.end())};
}

SegSFSet assemble_features(const Tensor& fmap, const LabelMask& mask, const RFState& state,
                           KeypointMode mode) {
  if (fmap.rank() != 3) throw ValidationError("feature map must be 3-dimensional (C x h x w)");
  if (mask.width < 1 || mask.height < 1) throw ValidationError("mask must be nonempty");
  const std::size_t channels = fmap.dims()[0];
  const std::size_t rows = fmap.dims()[1];
  const std::size_t cols = fmap.dims()[2];
  const std::size_t cells = rows * cols;
  const auto data = fmap.f32_data();

  SegSFSet set;
  set.width = mask.width;
  set.height = mask.height;
  set.channels = channels;
  set.keypoints.resize(cells);
  set.labels.resize(cells);
  set.descriptors.resize(cells * channels);

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      const Point2 kp = keypoint_location(state, static_cast<std::int64_t>(c), static_cast<std::int64_t>(r), mode);
      set.keypoints[i] = kp;
      const auto px = std::clamp<double>(std::floor(kp.x), 0.0, mask.width - 1.0);
      const auto py = std::clamp<double>(std::floor(kp.y), 0.0, mask.height - 1.0);
      set.labels[i] = mask.at(static_cast<int>(px), static_cast<int>(py));
      // channel-major source, cell-major destination
      for (std::size_t ch = 0; ch < channels; ++ch)
        set.descriptors[i * channels + ch] = data[ch * cells + i];
    }
  }
  return set;
}

SegSFSet select_classes(const SegSFSet& set, std::span<const int> classes) {
  SegSFSet out;
  out.width = set.width;
  out.height = set.height;
  out.channels = set.channels;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (std::find(classes.begin(), classes.end(), set.labels[i]) == classes.end()) continue;
    out.keypoints.push_back(set.keypoints[i]);
    out.labels.push_back(set.labels[i]);
    const auto d = set.descriptor(i);
    out.descriptors.insert(out.descriptors.end(), d.begin(), d.end());
  }
  return out;
}

}  // namespace segreg
