// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "segreg/eval_bench.hpp"
#include "segreg/kernels.hpp"
#include "segreg/synth.hpp"

using namespace segreg;

namespace {

Matrix random_rows(Eigen::Index n, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, c);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

template <auto Kernel>
void nearest_two(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix q = random_rows(n, 64, 1), r = random_rows(n, 64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(q, r));
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Kernel>
void warp(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  RasterImage src(size, size, 3);
  for (std::size_t i = 0; i < src.pixels.size(); ++i) src.pixels[i] = static_cast<std::uint8_t>(i * 31);
  const Eigen::Matrix3d inv = rotate_about_center(7.0, size, size).inverse().matrix();
  RasterImage dst(size, size, 3);
  for (auto _ : state) {
    Kernel(src, inv, dst);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * size * size);
}

template <auto Kernel>
void displacement(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Eigen::Matrix3d a = rotate_about_center(5.0, size, size).matrix();
  const Eigen::Matrix3d b = Eigen::Matrix3d::Identity();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b, size, size, 1));
  state.SetItemsProcessed(state.iterations() * size * size);
}

template <auto Kernel>
void ransac_trials(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0, 512);
  const auto truth = rotate_about_center(10.0, 512, 512);
  std::vector<Correspondence> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 q{pos(rng), pos(rng)};
    pairs.push_back({q, i % 3 == 0 ? Point2{pos(rng), pos(rng)} : apply_transform(truth, q)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(pairs, ModelKind::Affine, 3.0, 0, 0, 64));
  state.SetItemsProcessed(state.iterations() * 64);
}

template <auto Kernel>
void sample_field(benchmark::State& state) {
  SynthSpec spec;
  const auto field = synth_field(spec);
  std::vector<Point2> pts;
  for (int y = 0; y < state.range(0); ++y)
    for (int x = 0; x < state.range(0); ++x) pts.push_back({x + 0.5, y + 0.5});
  std::vector<float> out(field.channels() * pts.size());
  for (auto _ : state) {
    Kernel(field, pts, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

}  // namespace

BENCHMARK(nearest_two<kernels::nearest_two_serial>)->Name("nearest_two/serial")->Arg(256)->Arg(1024);
BENCHMARK(nearest_two<kernels::nearest_two_omp>)->Name("nearest_two/omp")->Arg(256)->Arg(1024);
BENCHMARK(warp<kernels::warp_bilinear_serial>)->Name("warp/serial")->Arg(512)->Arg(2048);
BENCHMARK(warp<kernels::warp_bilinear_omp>)->Name("warp/omp")->Arg(512)->Arg(2048);
BENCHMARK(displacement<kernels::displacement_sq_serial>)->Name("displacement/serial")->Arg(512)->Arg(2048);
BENCHMARK(displacement<kernels::displacement_sq_omp>)->Name("displacement/omp")->Arg(512)->Arg(2048);
BENCHMARK(ransac_trials<kernels::ransac_trials_serial>)->Name("ransac_trials/serial")->Arg(300)->Arg(3000);
BENCHMARK(ransac_trials<kernels::ransac_trials_omp>)->Name("ransac_trials/omp")->Arg(300)->Arg(3000);
BENCHMARK(sample_field<kernels::sample_field_serial>)->Name("sample_field/serial")->Arg(64)->Arg(256);
BENCHMARK(sample_field<kernels::sample_field_omp>)->Name("sample_field/omp")->Arg(64)->Arg(256);

BENCHMARK_MAIN();
