#pragma once

#include <cstdint>

#include "segreg/geo_fit.hpp"
#include "segreg/kernels.hpp"
#include "segreg/rf_geom.hpp"
#include "segreg/tensor_io.hpp"

namespace segreg {

/// Desk-scale stand-in for an aerial image pair. The world carries a smooth
/// C-channel descriptor field (random plane waves) and a grid of straight
/// "roads"; each view samples both at its own keypoint grid.
struct SynthSpec {
  int width = 256;
  int height = 256;
  std::size_t channels = 64;
  RFState geometry{8, 8, 0.5};
  double min_wavelength = 32.0;  // pixels
  double max_wavelength = 128.0;
  double road_spacing = 64.0;
  double road_width = 12.0;
  double noise = 0.01;  // gaussian sigma added to every descriptor value
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthView {
  Tensor features;  // f32, C x h x w
  Tensor mask;      // f32 road probability, H x W
};

struct SynthPair {
  SynthView query;
  SynthView ref;
};

/// The reference view is the world seen through the identity; a query pixel p
/// sees world point truth(p), so the query is the reference warped by the
/// inverse of `truth`. Deterministic in spec.seed.
SynthPair synth_pair(const SynthSpec& spec, const TransformModel& truth, Exec exec = Exec::Parallel);

/// Feature-grid extent (rows, cols) for the spec: ceil(extent / jump).
std::pair<std::size_t, std::size_t> synth_grid(const SynthSpec& spec);

kernels::WaveField synth_field(const SynthSpec& spec);

/// Road probability at a world point.
double synth_road_probability(const SynthSpec& spec, Point2 world);

/// RGB rendering of the world seen through `truth`, for checkerboard output.
RasterImage render_view(const SynthSpec& spec, const TransformModel& truth);

}  // namespace segreg
