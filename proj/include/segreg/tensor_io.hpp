#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace segreg {

enum class DType : std::uint8_t { F32 = 0, U8 = 1 };

/// Dense row-major tensor, outermost extent first.
class Tensor {
 public:
  Tensor() = default;

  static Tensor f32(std::vector<std::size_t> dims, std::vector<float> data);
  static Tensor u8(std::vector<std::size_t> dims, std::vector<std::uint8_t> data);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const;
  DType dtype() const;

  std::span<const float> f32_data() const;
  std::span<float> f32_data();
  std::span<const std::uint8_t> u8_data() const;
  std::span<std::uint8_t> u8_data();

  /// Same dims, dtype, and payload bytes (NaN payloads compare by bits).
  bool bitwise_equal(const Tensor& other) const;

 private:
  Tensor(std::vector<std::size_t> dims, std::variant<std::vector<float>, std::vector<std::uint8_t>> data);

  std::vector<std::size_t> dims_;
  std::variant<std::vector<float>, std::vector<std::uint8_t>> data_;
};

/// STF layout: "STF1", dtype code (u8), ndim (u8), ndim x u64 LE extents,
/// little-endian row-major payload.
void write_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (PGM) or 3 (PPM)
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int w, int h, int c);

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Binary Netpbm only: P5 (gray) and P6 (RGB), maxval 255.
RasterImage read_image(const std::filesystem::path& path);
void write_image(const RasterImage& img, const std::filesystem::path& path);

}  // namespace segreg
