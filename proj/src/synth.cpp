#include "segreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "segreg/error.hpp"

namespace segreg {

namespace {

struct RoadLayout {
  double offset_x;
  double offset_y;
};

RoadLayout road_layout(const SynthSpec& spec) {
  std::seed_seq seq{spec.seed, std::uint64_t{0x726f616473}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> offset(0.0, spec.road_spacing);
  const double ox = offset(rng);
  const double oy = offset(rng);
  return {ox, oy};
}

double distance_to_road(double coord, double offset, double spacing) {
  const double r = std::fmod(coord - offset, spacing);
  const double m = r < 0.0 ? r + spacing : r;
  return std::min(m, spacing - m);
}

double road_probability(const SynthSpec& spec, const RoadLayout& layout, Point2 world) {
  const double d = std::min(distance_to_road(world.x, layout.offset_x, spec.road_spacing),
                            distance_to_road(world.y, layout.offset_y, spec.road_spacing));
  // one-pixel logistic edge; exactly 0.5 on the road boundary
  return 1.0 / (1.0 + std::exp(d - spec.road_width / 2.0));
}

std::vector<Point2> view_points(const SynthSpec& spec, const TransformModel& truth) {
  const auto [rows, cols] = synth_grid(spec);
  std::vector<Point2> points;
  points.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      points.push_back(apply_transform(
          truth, keypoint_location(spec.geometry, static_cast<std::int64_t>(c), static_cast<std::int64_t>(r),
                                   KeypointMode::JumpCenter)));
  return points;
}

SynthView make_view(const SynthSpec& spec, const kernels::WaveField& field, const TransformModel& truth,
                    std::uint64_t noise_stream, Exec exec) {
  const auto [rows, cols] = synth_grid(spec);
  const auto points = view_points(spec, truth);
  std::vector<float> data(spec.channels * points.size());
  if (exec == Exec::Serial)
    kernels::sample_field_serial(field, points, data);
  else
    kernels::sample_field_omp(field, points, data);

  if (spec.noise > 0.0) {
    std::seed_seq seq{spec.seed, noise_stream};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, spec.noise);
    for (auto& v : data) v = static_cast<float>(v + gauss(rng));
  }

  const RoadLayout layout = road_layout(spec);
  std::vector<float> prob(static_cast<std::size_t>(spec.width) * spec.height);
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x)
      prob[static_cast<std::size_t>(y) * spec.width + x] =
          static_cast<float>(road_probability(spec, layout, apply_transform(truth, {x + 0.5, y + 0.5})));

  SynthView view;
  view.features = Tensor::f32({spec.channels, rows, cols}, std::move(data));
  view.mask = Tensor::f32({static_cast<std::size_t>(spec.height), static_cast<std::size_t>(spec.width)},
                          std::move(prob));
  return view;
}

}  // namespace

void SynthSpec::validate() const {
  if (width < 1 || height < 1) throw ValidationError("synthetic extent must be positive");
  if (channels < 8) throw ValidationError("synthetic descriptors need at least 8 channels");
  if (geometry.jump < 1) throw ValidationError("synthetic feature stride must be >= 1");
  if (!(min_wavelength > 0.0 && max_wavelength >= min_wavelength)) throw ValidationError("bad wavelength range");
  if (!(road_spacing > road_width && road_width >= 0.0)) throw ValidationError("bad road layout");
  if (!(noise >= 0.0)) throw ValidationError("noise must be nonnegative");
}

std::pair<std::size_t, std::size_t> synth_grid(const SynthSpec& spec) {
  const auto j = static_cast<std::size_t>(spec.geometry.jump);
  return {(static_cast<std::size_t>(spec.height) + j - 1) / j, (static_cast<std::size_t>(spec.width) + j - 1) / j};
}

kernels::WaveField synth_field(const SynthSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> wavelength(spec.min_wavelength, spec.max_wavelength);
  kernels::WaveField field;
  for (std::size_t c = 0; c < spec.channels; ++c) {
    const double a = angle(rng);
    field.dir_x.push_back(std::cos(a));
    field.dir_y.push_back(std::sin(a));
    field.wavenumber.push_back(2.0 * std::numbers::pi / wavelength(rng));
    field.phase.push_back(angle(rng));
  }
  return field;
}

double synth_road_probability(const SynthSpec& spec, Point2 world) {
  return road_probability(spec, road_layout(spec), world);
}

SynthPair synth_pair(const SynthSpec& spec, const TransformModel& truth, Exec exec) {
  spec.validate();
  truth.inverse();  // rejects singular ground truth
  const auto field = synth_field(spec);
  SynthPair pair;
  pair.ref = make_view(spec, field, TransformModel{}, 1, exec);
  pair.query = make_view(spec, field, truth, 2, exec);
  return pair;
}

RasterImage render_view(const SynthSpec& spec, const TransformModel& truth) {
  spec.validate();
  const auto field = synth_field(spec);
  const RoadLayout layout = road_layout(spec);
  RasterImage img(spec.width, spec.height, 3);
  std::vector<float> texture(field.channels());
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      const Point2 w = apply_transform(truth, {x + 0.5, y + 0.5});
      const Point2 one[1] = {w};
      kernels::sample_field_serial(field, one, texture);
      const double road = road_probability(spec, layout, w);
      const double g = 0.5 + 0.25 * texture[0] + 0.15 * texture[1];
      const double r = (1.0 - road) * (60 + 50 * g) + road * 150;
      const double gr = (1.0 - road) * (90 + 110 * g) + road * 150;
      const double b = (1.0 - road) * (40 + 30 * texture[2]) + road * 155;
      img.at(x, y, 0) = static_cast<std::uint8_t>(std::lround(std::clamp(r, 0.0, 255.0)));
      img.at(x, y, 1) = static_cast<std::uint8_t>(std::lround(std::clamp(gr, 0.0, 255.0)));
      img.at(x, y, 2) = static_cast<std::uint8_t>(std::lround(std::clamp(b, 0.0, 255.0)));
    }
  return img;
}

}  // namespace segreg
