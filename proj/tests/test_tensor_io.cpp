#include <doctest.h>

#include <bit>
#include <cstring>
#include <random>

#include "segreg/error.hpp"
#include "segreg/tensor_io.hpp"
#include "test_util.hpp"

using namespace segreg;

TEST_CASE("smallest tensor is 18 bytes") {
  testutil::TempDir dir;
  write_tensor(Tensor::f32({1}, {0.0f}), dir / "t.stf");
  CHECK(std::filesystem::file_size(dir / "t.stf") == 18);
}

TEST_CASE("2x3 f32 tensor matches hand-written byte dump") {
  testutil::TempDir dir;
  write_tensor(Tensor::f32({2, 3}, {1.0f, 2.0f, -1.0f, 0.5f, 0.0f, 3.0f}), dir / "t.stf");
  const unsigned char expected[] = {
      'S', 'T', 'F', '1', 0x00, 0x02,                  // magic, dtype f32, ndim 2
      0x02, 0, 0, 0, 0, 0, 0, 0,                       // extent 2
      0x03, 0, 0, 0, 0, 0, 0, 0,                       // extent 3
      0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0x40,  // 1.0 2.0
      0x00, 0x00, 0x80, 0xbf, 0x00, 0x00, 0x00, 0x3f,  // -1.0 0.5
      0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x40, 0x40,  // 0.0 3.0
  };
  const std::string bytes = testutil::read_bytes(dir / "t.stf");
  REQUIRE(bytes.size() == sizeof expected);
  CHECK(std::memcmp(bytes.data(), expected, sizeof expected) == 0);
}

TEST_CASE("u8 tensor header") {
  testutil::TempDir dir;
  write_tensor(Tensor::u8({2, 2}, {0, 1, 2, 255}), dir / "m.stf");
  const std::string bytes = testutil::read_bytes(dir / "m.stf");
  REQUIRE(bytes.size() == 6 + 16 + 4);
  CHECK(bytes[4] == 1);
  CHECK(static_cast<unsigned char>(bytes.back()) == 255);
}

TEST_CASE("random tensors roundtrip bitwise") {
  testutil::TempDir dir;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::size_t> dims;
    const int rank = 1 + static_cast<int>(rng() % 4);
    std::size_t n = 1;
    for (int i = 0; i < rank; ++i) {
      dims.push_back(1 + rng() % 5);
      n *= dims.back();
    }
    Tensor t;
    if (trial % 2 == 0) {
      std::vector<float> data(n);
      // arbitrary bit patterns, NaNs and denormals included
      for (auto& v : data) v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
      t = Tensor::f32(dims, data);
    } else {
      std::vector<std::uint8_t> data(n);
      for (auto& v : data) v = static_cast<std::uint8_t>(rng());
      t = Tensor::u8(dims, data);
    }
    const auto path = dir / ("r" + std::to_string(trial) + ".stf");
    write_tensor(t, path);
    CHECK(read_tensor(path).bitwise_equal(t));
  }
}

TEST_CASE("tensor validation") {
  CHECK_THROWS_AS(Tensor::f32({2, 2}, {1.0f}), ValidationError);
  CHECK_THROWS_AS(Tensor::f32({}, {}), ValidationError);
  CHECK_THROWS_AS(Tensor::u8({0}, {}), ValidationError);
  CHECK_THROWS_AS(Tensor::u8({1}, {1}).f32_data(), ValidationError);
}

TEST_CASE("read_tensor errors name the file") {
  testutil::TempDir dir;
  SUBCASE("bad magic") {
    testutil::write_bytes(dir / "bad.stf", std::string("XXXX\x00\x01", 6) + std::string(8, '\0'));
    try {
      read_tensor(dir / "bad.stf");
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("not an STF file") != std::string::npos);
      CHECK(std::string(e.what()).find("bad.stf") != std::string::npos);
    }
  }
  SUBCASE("truncated payload") {
    write_tensor(Tensor::f32({2, 3}, std::vector<float>(6, 1.0f)), dir / "t.stf");
    std::string bytes = testutil::read_bytes(dir / "t.stf");
    bytes.resize(bytes.size() - 4);  // 20 of 24 payload bytes
    testutil::write_bytes(dir / "t.stf", bytes);
    CHECK_THROWS_WITH_AS(read_tensor(dir / "t.stf"), doctest::Contains("size mismatch"), IoError);
  }
  SUBCASE("unknown dtype") {
    write_tensor(Tensor::u8({1}, {9}), dir / "t.stf");
    std::string bytes = testutil::read_bytes(dir / "t.stf");
    bytes[4] = 7;
    testutil::write_bytes(dir / "t.stf", bytes);
    CHECK_THROWS_WITH_AS(read_tensor(dir / "t.stf"), doctest::Contains("unsupported dtype"), IoError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(read_tensor(dir / "nope.stf"), doctest::Contains("nope.stf"), IoError);
  }
}

TEST_CASE("PGM and PPM roundtrip") {
  testutil::TempDir dir;
  RasterImage gray(2, 2, 1);
  gray.pixels = {0, 255, 128, 64};
  write_image(gray, dir / "g.pgm");
  CHECK(read_image(dir / "g.pgm") == gray);
  CHECK(testutil::read_bytes(dir / "g.pgm") == std::string("P5\n2 2\n255\n\x00\xff\x80\x40", 15));

  RasterImage rgb(3, 2, 3);
  for (std::size_t i = 0; i < rgb.pixels.size(); ++i) rgb.pixels[i] = static_cast<std::uint8_t>(i * 13);
  write_image(rgb, dir / "c.ppm");
  CHECK(read_image(dir / "c.ppm") == rgb);
}

TEST_CASE("Netpbm header handling") {
  testutil::TempDir dir;
  testutil::write_bytes(dir / "comment.pgm", std::string("P5\n# made by hand\n2 1\n255\n\x01\x02", 28));
  const auto img = read_image(dir / "comment.pgm");
  CHECK(img.width == 2);
  CHECK(img.pixels == std::vector<std::uint8_t>{1, 2});

  testutil::write_bytes(dir / "p4.pbm", "P4\n2 2\n\x00\x00");
  CHECK_THROWS_WITH_AS(read_image(dir / "p4.pbm"), doctest::Contains("unsupported image format"), IoError);
  testutil::write_bytes(dir / "deep.pgm", "P5\n1 1\n65535\n\x00\x00");
  CHECK_THROWS_WITH_AS(read_image(dir / "deep.pgm"), doctest::Contains("maxval"), IoError);
  testutil::write_bytes(dir / "short.pgm", "P5\n2 2\n255\n\x00");
  CHECK_THROWS_AS(read_image(dir / "short.pgm"), IoError);
}
