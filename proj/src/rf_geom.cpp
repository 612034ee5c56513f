#include "segreg/rf_geom.hpp"

#include <charconv>
#include <sstream>

#include "segreg/error.hpp"

namespace segreg {

namespace {

void validate(const LayerSpec& layer) {
  if (layer.kernel < 1 || layer.stride < 1 || layer.padding < 0)
    throw ValidationError("invalid layer k" + std::to_string(layer.kernel) + "s" +
                          std::to_string(layer.stride) + "p" + std::to_string(layer.padding));
}

// 3x3/s1/p1 basic-block convolutions, with the first conv of a stage strided.
void append_stage(std::vector<LayerSpec>& out, int blocks, int first_stride) {
  for (int b = 0; b < blocks; ++b) {
    out.push_back({3, b == 0 ? first_stride : 1, 1});
    out.push_back({3, 1, 1});
  }
}

}  // namespace

RFState propagate_layer(const RFState& state, const LayerSpec& layer) {
  validate(layer);
  RFState next;
  next.jump = state.jump * layer.stride;
  next.rf = state.rf + (layer.kernel - 1) * state.jump;
  // (k-1)/2 kept as an exact half-integer.
  next.start = state.start + ((layer.kernel - 1) / 2.0 - layer.padding) * static_cast<double>(state.jump);
  return next;
}

RFState chain(std::span<const LayerSpec> layers) {
  RFState state;
  for (const auto& layer : layers) state = propagate_layer(state, layer);
  return state;
}

std::vector<RFState> chain_stages(std::span<const LayerSpec> layers) {
  std::vector<RFState> stages{RFState{}};
  stages.reserve(layers.size() + 1);
  for (const auto& layer : layers) stages.push_back(propagate_layer(stages.back(), layer));
  return stages;
}

Point2 keypoint_location(const RFState& state, std::int64_t col, std::int64_t row, KeypointMode mode) {
  const double step = static_cast<double>(mode == KeypointMode::JumpCenter ? state.jump : state.rf);
  return {static_cast<double>(col) * step + state.start, static_cast<double>(row) * step + state.start};
}

std::vector<LayerSpec> resnet34_decoder3_preset() {
  std::vector<LayerSpec> layers{{7, 2, 3}, {3, 2, 1}};
  append_stage(layers, 3, 1);
  append_stage(layers, 4, 2);
  return layers;
}

std::vector<LayerSpec> resnet34_encoder_preset() {
  auto layers = resnet34_decoder3_preset();
  append_stage(layers, 6, 2);
  append_stage(layers, 3, 2);
  return layers;
}

std::vector<LayerSpec> parse_layers(std::string_view text) {
  if (text == "resnet34-decoder3") return resnet34_decoder3_preset();
  if (text == "resnet34-encoder") return resnet34_encoder_preset();
  if (text.empty() || text == "identity") return {};

  std::vector<LayerSpec> layers;
  std::size_t pos = 0;
  auto fail = [&] { throw ValidationError("malformed layer stack '" + std::string(text) + "'"); };
  auto number = [&](char tag) {
    if (pos >= text.size() || text[pos] != tag) fail();
    ++pos;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) fail();
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
  };
  while (pos < text.size()) {
    LayerSpec layer;
    layer.kernel = number('k');
    layer.stride = number('s');
    layer.padding = number('p');
    validate(layer);
    int repeat = 1;
    if (pos < text.size() && text[pos] == 'x') {
      repeat = number('x');
      if (repeat < 1) fail();
    }
    layers.insert(layers.end(), static_cast<std::size_t>(repeat), layer);
    if (pos < text.size()) {
      if (text[pos] != ',') fail();
      ++pos;
      if (pos == text.size()) fail();
    }
  }
  return layers;
}

std::string format_layers(std::span<const LayerSpec> layers) {
  std::ostringstream out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) out << ',';
    out << 'k' << layers[i].kernel << 's' << layers[i].stride << 'p' << layers[i].padding;
  }
  return out.str();
}

KeypointMode parse_keypoint_mode(std::string_view text) {
  if (text == "jump") return KeypointMode::JumpCenter;
  if (text == "eq4") return KeypointMode::RfScaled;
  throw ValidationError("unknown keypoint mode '" + std::string(text) + "' (expected jump|eq4)");
}

std::string_view to_string(KeypointMode mode) {
  return mode == KeypointMode::JumpCenter ? "jump" : "eq4";
}

}  // namespace segreg
