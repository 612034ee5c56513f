#include <doctest.h>

#include <map>
#include <random>

#include "segreg/error.hpp"
#include "segreg/segsf.hpp"

using namespace segreg;

TEST_CASE("threshold_mask is strict") {
  const auto m = threshold_mask(Tensor::f32({2, 2}, {0.4f, 0.6f, 0.5f, 0.9f}));
  CHECK(m.width == 2);
  CHECK(m.height == 2);
  CHECK(m.labels == std::vector<std::uint8_t>{0, 1, 0, 1});
  CHECK(threshold_mask(Tensor::f32({3, 2}, std::vector<float>(6, 0.0f))).labels == std::vector<std::uint8_t>(6, 0));
  CHECK(threshold_mask(Tensor::f32({3, 2}, std::vector<float>(6, 0.5001f))).labels == std::vector<std::uint8_t>(6, 1));
}

TEST_CASE("threshold_mask rejects bad input") {
  CHECK_THROWS_AS(threshold_mask(Tensor::f32({1, 2}, {0.2f, 1.5f})), ValidationError);
  CHECK_THROWS_AS(threshold_mask(Tensor::f32({1, 2}, {-0.1f, 0.5f})), ValidationError);
  CHECK_THROWS_AS(threshold_mask(Tensor::f32({4}, {0, 0, 0, 0})), ValidationError);
}

TEST_CASE("u8 masks are taken as labels") {
  const auto m = mask_from_tensor(Tensor::u8({1, 3}, {0, 2, 1}));
  CHECK(m.labels == std::vector<std::uint8_t>{0, 2, 1});
  CHECK(mask_from_tensor(Tensor::f32({1, 2}, {0.2f, 0.7f})).labels == std::vector<std::uint8_t>{0, 1});
}

namespace {

LabelMask filled_mask(int w, int h, std::uint8_t v) {
  return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, v)};
}

LabelMask left_half_mask(int w, int h) {
  LabelMask m = filled_mask(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w / 2; ++x) m.labels[static_cast<std::size_t>(y) * w + x] = 1;
  return m;
}

Tensor ramp_fmap(std::size_t c, std::size_t h, std::size_t w) {
  std::vector<float> data(c * h * w);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(i);
  return Tensor::f32({c, h, w}, data);
}

}  // namespace

TEST_CASE("single cell feature") {
  const auto set = assemble_features(Tensor::f32({2, 1, 1}, {3.0f, 4.0f}), filled_mask(8, 8, 0), {8, 8, 0.5},
                                     KeypointMode::JumpCenter);
  REQUIRE(set.size() == 1);
  CHECK(set.keypoints[0] == Point2{0.5, 0.5});
  CHECK(set.descriptor(0)[0] == 3.0f);
  CHECK(set.descriptor(0)[1] == 4.0f);
  CHECK(set.labels[0] == 0);
}

TEST_CASE("half mask labels follow keypoint columns") {
  // keypoints at (8c + 0.5, 8r + 0.5); the mask is 1 for x < 16
  const auto set = assemble_features(ramp_fmap(3, 4, 4), left_half_mask(32, 32), {8, 8, 0.5},
                                     KeypointMode::JumpCenter);
  REQUIRE(set.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t col = i % 4, row = i / 4;
    CHECK(set.keypoints[i] == Point2{8.0 * col + 0.5, 8.0 * row + 0.5});
    CHECK(set.labels[i] == (col < 2 ? 1 : 0));
    // channel-major input, cell-major descriptor
    for (std::size_t c = 0; c < 3; ++c) CHECK(set.descriptor(i)[c] == static_cast<float>(c * 16 + i));
  }

  const int road[] = {1};
  const auto roads = select_classes(set, road);
  CHECK(roads.size() == 8);
  for (std::size_t i = 0; i < roads.size(); ++i) CHECK(roads.labels[i] == 1);
  CHECK(roads.keypoints[0] == set.keypoints[0]);
  CHECK(roads.keypoints[2] == set.keypoints[4]);

  const int both[] = {0, 1};
  const auto all = select_classes(set, both);
  CHECK(all.keypoints == set.keypoints);
  CHECK(all.descriptors == set.descriptors);
  CHECK(select_classes(set, std::span<const int>{}).size() == 0);
}

TEST_CASE("all-road mask labels every cell") {
  const auto set = assemble_features(ramp_fmap(2, 3, 5), filled_mask(40, 24, 1), {8, 8, 0.5},
                                     KeypointMode::JumpCenter);
  CHECK(set.size() == 15);
  for (int l : set.labels) CHECK(l == 1);
}

TEST_CASE("keypoints past the border sample the clamped mask pixel") {
  // 3x3 grid of jump 8 over a 20x20 image: the last column sits at x = 16.5,
  // and the rf-scaled mode puts keypoints far outside
  LabelMask m = filled_mask(20, 20, 0);
  m.labels[19 * 20 + 19] = 1;
  const auto set = assemble_features(ramp_fmap(1, 3, 3), m, {8, 40, 0.5}, KeypointMode::RfScaled);
  CHECK(set.keypoints[8] == Point2{80.5, 80.5});  // stored unclamped
  CHECK(set.labels[8] == 1);
  CHECK(set.labels[0] == 0);
}

TEST_CASE("assemble_features requires a rank-3 map") {
  CHECK_THROWS_AS(assemble_features(Tensor::f32({4, 4}, std::vector<float>(16)), filled_mask(32, 32, 0), {8, 8, 0.5},
                                    KeypointMode::JumpCenter),
                  ValidationError);
}

TEST_CASE("random masks: counts, grid pitch, and label histogram") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int j = 1 << (rng() % 4);
    const std::size_t h = 1 + rng() % 6, w = 1 + rng() % 6;
    const int width = static_cast<int>(w) * j, height = static_cast<int>(h) * j;
    LabelMask m = filled_mask(width, height, 0);
    for (auto& v : m.labels) v = static_cast<std::uint8_t>(rng() % 3);
    const RFState s{j, j, 0.5 * j};
    const auto set = assemble_features(ramp_fmap(2, h, w), m, s, KeypointMode::JumpCenter);
    REQUIRE(set.size() == h * w);

    std::map<int, std::size_t> from_set, from_mask;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const std::size_t col = i % w, row = i / w;
      CHECK(set.keypoints[i].x == s.start + static_cast<double>(col * j));
      CHECK(set.keypoints[i].y == s.start + static_cast<double>(row * j));
      ++from_set[set.labels[i]];
      ++from_mask[m.at(static_cast<int>(col) * j + j / 2, static_cast<int>(row) * j + j / 2)];
    }
    CHECK(from_set == from_mask);

    const int one[] = {static_cast<int>(rng() % 3)};
    CHECK(select_classes(set, one).size() <= set.size());
  }
}
