#include "segreg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "segreg/error.hpp"

namespace segreg {

std::size_t AngleRow::failures() const {
  return static_cast<std::size_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}));
}

namespace {

struct CellResult {
  double rmse = 0.0;
  bool failed = false;
  std::size_t matches = 0;
  std::size_t inliers = 0;
};

CellResult run_cell(const SynthSpec& spec, double angle, const PipelineConfig& config) {
  const TransformModel truth = rotate_about_center(angle, spec.width, spec.height);
  const SynthPair pair = synth_pair(spec, truth, config.exec);
  CellResult cell;
  try {
    const auto result =
        register_tensors(pair.query.features, pair.query.mask, pair.ref.features, pair.ref.mask, config);
    cell.matches = result.matches.pairs.size();
    cell.inliers = result.ransac.inlier_count;
    cell.rmse = rmse(result.ransac.model, truth, spec.width, spec.height, config.grid_stride, config.exec);
  } catch (const NoConsensus&) {
    cell.failed = true;
  } catch (const NotEnoughMatches&) {
    cell.failed = true;
  } catch (const DegenerateConfiguration&) {
    cell.failed = true;
  } catch (const PointAtInfinity&) {
    cell.failed = true;
  }
  if (cell.failed) cell.rmse = rmse(TransformModel{}, truth, spec.width, spec.height, config.grid_stride, config.exec);
  return cell;
}

}  // namespace

EvalReport run_sweep(std::span<const SynthSpec> pairs, std::span<const double> angles, const PipelineConfig& config,
                     std::string method, Exec exec) {
  if (angles.empty()) throw ValidationError("sweep needs at least one angle");
  if (pairs.empty()) throw ValidationError("sweep needs at least one pair");
  config.validate();

  const std::size_t n_pairs = pairs.size();
  const auto n_cells = static_cast<std::int64_t>(n_pairs * angles.size());
  std::vector<CellResult> cells(static_cast<std::size_t>(n_cells));
  std::vector<std::string> errors(static_cast<std::size_t>(n_cells));

  PipelineConfig inner = config;
  if (exec == Exec::Parallel) inner.exec = Exec::Serial;  // parallelism lives at the cell level

  auto work = [&](std::int64_t k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      cells[idx] = run_cell(pairs[idx % n_pairs], angles[idx / n_pairs], inner);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  };
  if (exec == Exec::Serial) {
    for (std::int64_t k = 0; k < n_cells; ++k) work(k);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n_cells; ++k) work(k);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("sweep cell failed: " + e);

  EvalReport report;
  report.method = std::move(method);
  for (const auto& spec : pairs) report.seeds.push_back(spec.seed);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    AngleRow row;
    row.angle = angles[a];
    for (std::size_t p = 0; p < n_pairs; ++p) {
      const auto& cell = cells[a * n_pairs + p];
      row.rmse.push_back(cell.rmse);
      row.failed.push_back(cell.failed ? 1 : 0);
      row.matches.push_back(cell.matches);
      row.inliers.push_back(cell.inliers);
    }
    row.mean = std::accumulate(row.rmse.begin(), row.rmse.end(), 0.0) / static_cast<double>(row.rmse.size());
    report.rows.push_back(std::move(row));
  }
  return report;
}

void compare_reports(EvalReport& report, const EvalReport& baseline) {
  if (report.rows.size() != baseline.rows.size()) throw ValidationError("reports cover different angle lists");
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].angle != baseline.rows[i].angle) throw ValidationError("reports cover different angle lists");
    report.rows[i].comparison = welch_t(report.rows[i].rmse, baseline.rows[i].rmse);
  }
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["seeds"] = report.seeds;
  std::vector<double> angles;
  std::vector<double> means;
  for (const auto& row : report.rows) {
    angles.push_back(row.angle);
    means.push_back(row.mean);
  }
  j["angles"] = angles;
  j["means"] = means;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["angle"] = row.angle;
    r["mean"] = row.mean;
    r["failures"] = row.failures();
    r["rmse"] = row.rmse;
    r["failed"] = row.failed;
    r["matches"] = row.matches;
    r["inliers"] = row.inliers;
    if (row.comparison) {
      r["welch"] = {{"t", row.comparison->t},
                    {"dof", row.comparison->dof},
                    {"p", row.comparison->p},
                    {"degenerate", row.comparison->degenerate}};
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EvalReport report;
    report.method = j.value("method", std::string("baseline"));
    report.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    for (const auto& r : j.at("rows")) {
      AngleRow row;
      row.angle = r.at("angle").get<double>();
      row.rmse = r.at("rmse").get<std::vector<double>>();
      row.failed = r.value("failed", std::vector<std::uint8_t>(row.rmse.size(), 0));
      row.matches = r.value("matches", std::vector<std::size_t>(row.rmse.size(), 0));
      row.inliers = r.value("inliers", std::vector<std::size_t>(row.rmse.size(), 0));
      if (row.rmse.empty()) throw ValidationError("report row without RMSE values");
      row.mean = std::accumulate(row.rmse.begin(), row.rmse.end(), 0.0) / static_cast<double>(row.rmse.size());
      if (r.contains("welch")) {
        const auto& w = r.at("welch");
        row.comparison = WelchResult{w.at("t").get<double>(), w.at("dof").get<double>(), w.at("p").get<double>(),
                                     w.value("degenerate", false)};
      }
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return report_from_json(text);
  } catch (const ValidationError& e) {
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << report_to_json(report);
  if (!out) throw IoError("write failure on " + path.string());
}

std::string report_table(const EvalReport& report) {
  const bool compared = !report.rows.empty() && report.rows.front().comparison.has_value();
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %12s %9s", "angle", "mean_rmse", "failures");
  out << line;
  if (compared) {
    std::snprintf(line, sizeof line, " %10s %8s %11s", "t", "dof", "p");
    out << line;
  }
  out << '\n';
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%-8g %12.4f %5zu/%-3zu", row.angle, row.mean, row.failures(), row.rmse.size());
    out << line;
    if (row.comparison) {
      std::snprintf(line, sizeof line, " %10.4f %8.2f %11.3e", row.comparison->t, row.comparison->dof,
                    row.comparison->p);
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace segreg
