// segreg: register aerial image pairs from exported semantic feature maps.
//
//   segreg register  --query-features q.stf --query-mask qm.stf --ref-features r.stf --ref-mask rm.stf
//   segreg sweep     --pairs 10 --out report.json
//   segreg synth     --angle 5 --out fixture/pair
//   segreg checkerboard --ref-image r.ppm --query-image q.ppm --transform t.json --out mosaic.ppm
//   segreg rfcalc    --layers k7s2p3,k3s2p1
//
// Exit codes: 0 success, 1 input error, 2 no consensus.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "segreg/error.hpp"
#include "segreg/eval_bench.hpp"
#include "segreg/pipeline.hpp"
#include "segreg/report.hpp"
#include "segreg/synth.hpp"
#include "segreg/transform_io.hpp"

namespace {

using namespace segreg;

constexpr int kInputError = 1;
constexpr int kNoConsensus = 2;

struct PipelineFlags {
  std::string layers{kDefaultLayerPreset};
  std::string keypoint_mode = "jump";
  std::string classes = "all";
  long pca_dim = 100;
  double ratio = 0.7;
  std::string model = "affine";
  std::optional<double> ransac_threshold;
  double ransac_confidence = 0.995;
  std::size_t ransac_max_iters = 5000;
  std::uint64_t seed = 0;
  int grid_stride = 1;
  bool cross_check = false;

  void attach(CLI::App* app) {
    app->add_option("--layers", layers, "layer stack, e.g. k7s2p3,k3s2p1, or a preset name")->capture_default_str();
    app->add_option("--keypoint-mode", keypoint_mode, "jump | eq4")->capture_default_str();
    app->add_option("--classes", classes, "comma-separated class ids, or 'all'")->capture_default_str();
    app->add_option("--pca-dim", pca_dim, "retained PCA dimensions")->capture_default_str();
    app->add_option("--ratio", ratio, "ratio-test threshold (strict)")->capture_default_str();
    app->add_option("--model", model, "affine | homography")->capture_default_str();
    app->add_option("--ransac-threshold", ransac_threshold, "inlier threshold in pixels (default: max(3, 0.75 * jump))");
    app->add_option("--ransac-confidence", ransac_confidence)->capture_default_str();
    app->add_option("--ransac-max-iters", ransac_max_iters)->capture_default_str();
    app->add_option("--seed", seed, "RANSAC seed")->capture_default_str();
    app->add_option("--grid-stride", grid_stride, "RMSE grid stride")->capture_default_str();
    app->add_flag("--cross-check", cross_check, "keep only mutual nearest neighbours");
  }

  PipelineConfig build() const {
    PipelineConfig c;
    c.layers = parse_layers(layers);
    c.keypoint_mode = parse_keypoint_mode(keypoint_mode);
    if (classes != "all") {
      std::stringstream in(classes);
      std::string item;
      while (std::getline(in, item, ',')) {
        try {
          std::size_t used = 0;
          c.classes.push_back(std::stoi(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ValidationError("bad --classes entry '" + item + "'");
        }
      }
      if (c.classes.empty()) throw ValidationError("--classes is empty");
    }
    c.pca_dim = pca_dim;
    c.ratio = ratio;
    c.model = parse_model_kind(model);
    if (ransac_threshold) {
      c.ransac.threshold = *ransac_threshold;
      c.grid_threshold = false;
    }
    c.ransac.confidence = ransac_confidence;
    c.ransac.max_iterations = ransac_max_iters;
    c.ransac.seed = seed;
    c.grid_stride = grid_stride;
    c.cross_check = cross_check;
    c.validate();
    return c;
  }
};

struct FixtureFlags {
  int size = 256;
  std::size_t channels = 64;
  double noise = 0.01;

  void attach(CLI::App* app) {
    app->add_option("--size", size, "synthetic image width and height")->capture_default_str();
    app->add_option("--channels", channels, "descriptor channels")->capture_default_str();
    app->add_option("--noise", noise, "descriptor noise sigma")->capture_default_str();
  }

  SynthSpec build(const PipelineConfig& config, std::uint64_t pair_seed) const {
    SynthSpec spec;
    spec.width = spec.height = size;
    spec.channels = channels;
    spec.noise = noise;
    spec.geometry = config.geometry();
    spec.seed = pair_seed;
    spec.validate();
    return spec;
  }
};

Tensor load_tensor(const std::string& path) { return read_tensor(path); }

int cmd_register(const PipelineFlags& flags, const std::string& qf, const std::string& qm, const std::string& rf,
                 const std::string& rm, const std::string& out, const std::string& mosaic, const std::string& qimg,
                 const std::string& rimg, int tile, const std::string& dump) {
  const PipelineConfig config = flags.build();
  const Tensor query_features = load_tensor(qf);
  const Tensor query_mask = load_tensor(qm);
  const Tensor ref_features = load_tensor(rf);
  const Tensor ref_mask = load_tensor(rm);

  RegistrationResult result;
  try {
    result = register_tensors(query_features, query_mask, ref_features, ref_mask, config);
  } catch (const NoConsensus& e) {
    std::cerr << "segreg: " << e.what() << '\n';
    return kNoConsensus;
  } catch (const NotEnoughMatches& e) {
    std::cerr << "segreg: " << e.what() << '\n';
    return kNoConsensus;
  }
  for (int c : result.matches.skipped_classes) std::cerr << "segreg: class " << c << " skipped\n";

  TransformDocument doc;
  doc.model = result.ransac.model;
  doc.inlier_count = result.ransac.inlier_count;
  doc.match_count = result.matches.pairs.size();
  doc.seed = config.ransac.seed;
  doc.iterations = result.ransac.iterations;
  if (out.empty() || out == "-")
    std::cout << to_json_text(doc);
  else
    write_transform(doc, out);

  if (!dump.empty()) {
    std::ofstream d(dump);
    if (!d) throw IoError("cannot open " + dump + " for writing");
    write_match_dump(result.matches, d);
  }
  if (!mosaic.empty()) {
    if (qimg.empty() || rimg.empty()) throw ValidationError("--checkerboard needs --query-image and --ref-image");
    const RasterImage q = read_image(qimg);
    const RasterImage r = read_image(rimg);
    const RasterImage warped = warp_image(q, doc.model, r.width, r.height);
    write_image(checkerboard(r, warped, tile), mosaic);
  }
  return 0;
}

std::vector<double> parse_angles(const std::string& text) {
  std::vector<double> angles;
  if (text.empty() || text == "default") return {std::begin(kDefaultAngles), std::end(kDefaultAngles)};
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      angles.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad --angles entry '" + item + "'");
    }
  }
  if (angles.empty()) throw ValidationError("--angles is empty");
  return angles;
}

int cmd_sweep(const PipelineFlags& flags, const FixtureFlags& fixture, const std::string& angles_text,
              std::size_t pairs, std::uint64_t pair_seed, const std::string& out, const std::string& baseline,
              const std::string& method) {
  const PipelineConfig config = flags.build();
  const auto angles = parse_angles(angles_text);
  if (pairs < 1) throw ValidationError("--pairs must be >= 1");
  std::vector<SynthSpec> specs;
  for (std::size_t i = 0; i < pairs; ++i) specs.push_back(fixture.build(config, pair_seed + i));

  EvalReport report = run_sweep(specs, angles, config, method);
  if (!baseline.empty()) compare_reports(report, read_report(baseline));
  std::cout << report_table(report);
  if (!out.empty()) write_report(report, out);
  return 0;
}

int cmd_synth(const PipelineFlags& flags, const FixtureFlags& fixture, double angle, std::uint64_t pair_seed,
              const std::string& prefix) {
  const PipelineConfig config = flags.build();
  const SynthSpec spec = fixture.build(config, pair_seed);
  const TransformModel truth = rotate_about_center(angle, spec.width, spec.height);
  const SynthPair pair = synth_pair(spec, truth);
  write_tensor(pair.query.features, prefix + "_query_features.stf");
  write_tensor(pair.query.mask, prefix + "_query_mask.stf");
  write_tensor(pair.ref.features, prefix + "_ref_features.stf");
  write_tensor(pair.ref.mask, prefix + "_ref_mask.stf");
  write_image(render_view(spec, truth), prefix + "_query.ppm");
  write_image(render_view(spec, TransformModel{}), prefix + "_ref.ppm");
  TransformDocument doc;
  doc.model = truth;
  doc.seed = pair_seed;
  write_transform(doc, prefix + "_truth.json");
  std::cout << "wrote " << prefix << "_{query,ref}_{features,mask}.stf, " << prefix << "_{query,ref}.ppm, " << prefix
            << "_truth.json\n";
  return 0;
}

int cmd_checkerboard(const std::string& ref_image, const std::string& query_image, const std::string& transform,
                     int tile, const std::string& out) {
  const RasterImage r = read_image(ref_image);
  RasterImage q = read_image(query_image);
  if (!transform.empty()) q = warp_image(q, read_transform(transform).model, r.width, r.height);
  write_image(checkerboard(r, q, tile), out);
  return 0;
}

int cmd_rfcalc(const std::string& layers_text) {
  const auto layers = parse_layers(layers_text);
  const auto stages = chain_stages(layers);
  std::printf("%-6s %-10s %8s %8s %10s\n", "layer", "spec", "jump", "rf", "start");
  std::printf("%-6s %-10s %8lld %8lld %10g\n", "input", "-", static_cast<long long>(stages[0].jump),
              static_cast<long long>(stages[0].rf), stages[0].start);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string spec = format_layers(std::span(&layers[i], 1));
    std::printf("%-6zu %-10s %8lld %8lld %10g\n", i + 1, spec.c_str(), static_cast<long long>(stages[i + 1].jump),
                static_cast<long long>(stages[i + 1].rf), stages[i + 1].start);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-feature registration of multitemporal aerial image pairs"};
  app.require_subcommand(1);

  PipelineFlags reg_flags;
  std::string qf, qm, rf, rm, out, mosaic, qimg, rimg, dump;
  int tile = 64;
  auto* reg = app.add_subcommand("register", "estimate the query-to-reference transform");
  reg_flags.attach(reg);
  reg->add_option("--query-features", qf, "query feature map (STF, C x h x w)")->required();
  reg->add_option("--query-mask", qm, "query mask (STF, H x W, f32 probability or u8 labels)")->required();
  reg->add_option("--ref-features", rf, "reference feature map")->required();
  reg->add_option("--ref-mask", rm, "reference mask")->required();
  reg->add_option("--out", out, "transform document path ('-' for stdout)");
  reg->add_option("--checkerboard", mosaic, "write a checkerboard mosaic of the registered images here");
  reg->add_option("--query-image", qimg, "query source image (PGM/PPM) for --checkerboard");
  reg->add_option("--ref-image", rimg, "reference source image (PGM/PPM) for --checkerboard");
  reg->add_option("--tile", tile, "checkerboard tile size")->capture_default_str();
  reg->add_option("--dump-matches", dump, "write ratio-test matches as 'class qx qy rx ry dist'");

  PipelineFlags sweep_flags;
  FixtureFlags sweep_fixture;
  std::string angles_text = "default", sweep_out, baseline, method = "segsf";
  std::size_t pairs = 10;
  std::uint64_t pair_seed = 1;
  auto* sweep = app.add_subcommand("sweep", "rotation sweep over synthetic pairs");
  sweep_flags.attach(sweep);
  sweep_fixture.attach(sweep);
  sweep->add_option("--angles", angles_text, "comma-separated degrees")->capture_default_str();
  sweep->add_option("--pairs", pairs, "number of synthetic pairs")->capture_default_str();
  sweep->add_option("--pair-seed", pair_seed, "seed of the first synthetic pair")->capture_default_str();
  sweep->add_option("--out", sweep_out, "report document path");
  sweep->add_option("--baseline", baseline, "report document to compare against (Welch's t-test)");
  sweep->add_option("--method", method, "method name recorded in the report")->capture_default_str();

  PipelineFlags synth_flags;
  FixtureFlags synth_fixture;
  double angle = 5.0;
  std::uint64_t synth_seed = 1;
  std::string prefix;
  auto* synth = app.add_subcommand("synth", "write a synthetic rotated pair");
  synth->add_option("--layers", synth_flags.layers, "layer stack defining the feature grid")->capture_default_str();
  synth_fixture.attach(synth);
  synth->add_option("--angle", angle, "rotation about the image center, degrees")->capture_default_str();
  synth->add_option("--pair-seed", synth_seed)->capture_default_str();
  synth->add_option("--out", prefix, "output path prefix")->required();

  std::string cb_ref, cb_query, cb_transform, cb_out;
  int cb_tile = 64;
  auto* cb = app.add_subcommand("checkerboard", "mosaic two images, optionally warping the query first");
  cb->add_option("--ref-image", cb_ref)->required();
  cb->add_option("--query-image", cb_query)->required();
  cb->add_option("--transform", cb_transform, "transform document mapping query to reference");
  cb->add_option("--tile", cb_tile)->capture_default_str();
  cb->add_option("--out", cb_out)->required();

  std::string rf_layers{kDefaultLayerPreset};
  auto* rfcalc = app.add_subcommand("rfcalc", "print receptive-field geometry per layer");
  rfcalc->add_option("--layers", rf_layers)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  try {
    if (*reg) return cmd_register(reg_flags, qf, qm, rf, rm, out, mosaic, qimg, rimg, tile, dump);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_fixture, angles_text, pairs, pair_seed, sweep_out, baseline, method);
    if (*synth) return cmd_synth(synth_flags, synth_fixture, angle, synth_seed, prefix);
    if (*cb) return cmd_checkerboard(cb_ref, cb_query, cb_transform, cb_tile, cb_out);
    if (*rfcalc) return cmd_rfcalc(rf_layers);
  } catch (const std::exception& e) {
    std::cerr << "segreg: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
