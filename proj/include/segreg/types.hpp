#pragma once

namespace segreg {

/// Selects between the serial reference kernels and their OpenMP versions.
/// Both produce bitwise-identical results; Serial exists for testing and
/// benchmarking.
enum class Exec { Serial, Parallel };

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

}  // namespace segreg
