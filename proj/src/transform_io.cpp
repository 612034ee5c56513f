#include "segreg/transform_io.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>

#include "segreg/error.hpp"

namespace segreg {

std::string to_json_text(const TransformDocument& doc) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(doc.model.kind()));
  j["matrix"] = doc.model.row_major();
  j["inlier_count"] = doc.inlier_count;
  j["match_count"] = doc.match_count;
  j["seed"] = doc.seed;
  j["iterations"] = doc.iterations;
  return j.dump(2) + "\n";
}

TransformDocument transform_from_json_text(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TransformDocument doc;
    const auto values = j.at("matrix").get<std::vector<double>>();
    if (values.size() != 9) throw ValidationError("transform matrix must have 9 entries");
    doc.model = TransformModel::from_row_major(parse_model_kind(j.at("kind").get<std::string>()),
                                               std::span<const double, 9>(values.data(), 9));
    doc.inlier_count = j.value("inlier_count", std::size_t{0});
    doc.match_count = j.value("match_count", std::size_t{0});
    doc.seed = j.value("seed", std::uint64_t{0});
    doc.iterations = j.value("iterations", std::size_t{0});
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed transform document: ") + e.what());
  }
}

void write_transform(const TransformDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json_text(doc);
  if (!out) throw IoError("write failure on " + path.string());
}

TransformDocument read_transform(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return transform_from_json_text(text);
  } catch (const ValidationError& e) {
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

}  // namespace segreg
