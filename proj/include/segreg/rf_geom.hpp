#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segreg/types.hpp"

namespace segreg {

/// One sliding-window layer (convolution or pooling).
struct LayerSpec {
  int kernel = 1;
  int stride = 1;
  int padding = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Cumulative receptive-field geometry after a stack of layers, in input pixels.
/// `start` is the center of the first feature's receptive field; pixel i covers
/// [i, i+1), so the identity stack has start 0.5.
struct RFState {
  std::int64_t jump = 1;
  std::int64_t rf = 1;
  double start = 0.5;

  friend bool operator==(const RFState&, const RFState&) = default;
};

enum class KeypointMode {
  JumpCenter,    // loc * jump + start: the receptive-field center
  RfScaled,    // loc * rf + start: rf-scaled variant, kept for comparison
};

RFState propagate_layer(const RFState& state, const LayerSpec& layer);

/// Left fold of propagate_layer from the identity state.
RFState chain(std::span<const LayerSpec> layers);

/// State after each prefix; element 0 is the identity state.
std::vector<RFState> chain_stages(std::span<const LayerSpec> layers);

Point2 keypoint_location(const RFState& state, std::int64_t col, std::int64_t row, KeypointMode mode);

/// Parses "k7s2p3,k3s2p1,k3s1p1x6" (optional xN repeats a layer) or a preset name.
std::vector<LayerSpec> parse_layers(std::string_view text);
std::string format_layers(std::span<const LayerSpec> layers);

KeypointMode parse_keypoint_mode(std::string_view text);
std::string_view to_string(KeypointMode mode);

/// ResNet34-style encoder stem plus layer1 and layer2. Its output grid has
/// stride 8, the resolution of the LinkNet34 Decoder3 output.
std::vector<LayerSpec> resnet34_decoder3_preset();

/// Full ResNet34 encoder (stride 32).
std::vector<LayerSpec> resnet34_encoder_preset();

inline constexpr std::string_view kDefaultLayerPreset = "resnet34-decoder3";

}  // namespace segreg
