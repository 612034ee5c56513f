#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segreg/eval_bench.hpp"
#include "segreg/pipeline.hpp"
#include "segreg/synth.hpp"

namespace segreg {

/// Rotation angles used by the standard sweep, in degrees.
inline constexpr double kDefaultAngles[] = {1, 2, 3, 4, 5, 10, 15, 20, 30, 40};

struct AngleRow {
  double angle = 0.0;
  std::vector<double> rmse;           // one per pair
  std::vector<std::uint8_t> failed;   // registration raised; rmse is the identity fallback
  std::vector<std::size_t> matches;
  std::vector<std::size_t> inliers;
  double mean = 0.0;
  std::optional<WelchResult> comparison;

  std::size_t failures() const;
};

struct EvalReport {
  std::string method;
  std::vector<std::uint64_t> seeds;
  std::vector<AngleRow> rows;
};

/// Runs every (pair, angle) cell: ground truth is a rotation about the image
/// center, the prediction comes from the full pipeline. Cells are independent
/// and are evaluated in parallel under Exec::Parallel; the report does not
/// depend on execution order.
EvalReport run_sweep(std::span<const SynthSpec> pairs, std::span<const double> angles, const PipelineConfig& config,
                     std::string method = "segsf", Exec exec = Exec::Parallel);

/// Fills each row's Welch comparison of `report` against `baseline`. Angles
/// must match.
void compare_reports(EvalReport& report, const EvalReport& baseline);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
EvalReport read_report(const std::filesystem::path& path);
void write_report(const EvalReport& report, const std::filesystem::path& path);

/// Fixed-width table: angle, mean RMSE, failures, and t/dof/p when compared.
std::string report_table(const EvalReport& report);

}  // namespace segreg
