#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "segreg/geo_fit.hpp"

namespace segreg {

/// Registration result as written to disk.
struct TransformDocument {
  TransformModel model;
  std::size_t inlier_count = 0;
  std::size_t match_count = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
};

/// JSON text with fields kind, matrix (9 numbers, row-major, round-trip
/// precision), inlier_count, match_count, seed, iterations.
std::string to_json_text(const TransformDocument& doc);
TransformDocument transform_from_json_text(const std::string& text);

void write_transform(const TransformDocument& doc, const std::filesystem::path& path);
TransformDocument read_transform(const std::filesystem::path& path);

}  // namespace segreg
