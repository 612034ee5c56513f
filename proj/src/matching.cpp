#include "segreg/matching.hpp"

#include <algorithm>
#include <iomanip>
#include <set>

#include "segreg/error.hpp"
#include "segreg/kernels.hpp"

namespace segreg {

namespace {

std::vector<kernels::Neighbors> nearest(const Matrix& a, const Matrix& b, Exec exec) {
  return exec == Exec::Serial ? kernels::nearest_two_serial(a, b) : kernels::nearest_two_omp(a, b);
}

struct ClassSubset {
  Matrix desc;
  std::vector<Point2> keypoints;
};

ClassSubset gather(const SegSFSet& set, int label) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set.labels[i] == label) rows.push_back(i);
  ClassSubset out;
  out.desc.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(set.channels));
  out.keypoints.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto d = set.descriptor(rows[r]);
    for (std::size_t c = 0; c < set.channels; ++c)
      out.desc(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d[c];
    out.keypoints.push_back(set.keypoints[rows[r]]);
  }
  return out;
}

}  // namespace

std::vector<Match> match_class(const Matrix& query_desc, std::span<const Point2> query_kp, const Matrix& ref_desc,
                               std::span<const Point2> ref_kp, int label, double ratio, bool cross_check,
                               Exec exec) {
  if (query_desc.cols() != ref_desc.cols()) throw ValidationError("descriptor widths differ");
  if (static_cast<std::size_t>(query_desc.rows()) != query_kp.size() ||
      static_cast<std::size_t>(ref_desc.rows()) != ref_kp.size())
    throw ValidationError("descriptor and keypoint counts differ");
  std::vector<Match> out;
  if (ref_desc.rows() < 2) return out;

  const auto forward = nearest(query_desc, ref_desc, exec);
  std::vector<kernels::Neighbors> backward;
  if (cross_check) backward = nearest(ref_desc, query_desc, exec);

  for (std::size_t i = 0; i < forward.size(); ++i) {
    const auto& n = forward[i];
    if (!(n.d2 > 0.0) || !(n.d1 / n.d2 < ratio)) continue;
    const auto j = static_cast<std::size_t>(n.first);
    if (cross_check && backward[j].first != static_cast<std::int64_t>(i)) continue;
    out.push_back({query_kp[i], ref_kp[j], label, n.d1, i, j});
  }
  return out;
}

MatchSet match_all(const SegSFSet& query, const SegSFSet& ref, std::span<const int> classes,
                   const MatchOptions& options) {
  if (query.channels != ref.channels) throw ValidationError("query and reference descriptor widths differ");
  std::set<int> labels;
  if (classes.empty()) {
    labels.insert(query.labels.begin(), query.labels.end());
    labels.insert(ref.labels.begin(), ref.labels.end());
  } else {
    labels.insert(classes.begin(), classes.end());
  }

  MatchSet result;
  for (const int label : labels) {
    const ClassSubset q = gather(query, label);
    const ClassSubset r = gather(ref, label);
    if (q.desc.rows() < 1 || r.desc.rows() < 2) {
      result.skipped_classes.push_back(label);
      result.per_class[label] = 0;
      continue;
    }
    const ConditionedClass cond = condition_class(q.desc, r.desc, options.pca_dim);
    auto pairs = match_class(cond.query, q.keypoints, cond.ref, r.keypoints, label, options.ratio,
                             options.cross_check, options.exec);
    result.per_class[label] = pairs.size();
    result.pairs.insert(result.pairs.end(), pairs.begin(), pairs.end());
  }
  return result;
}

void write_match_dump(const MatchSet& matches, std::ostream& out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& m : matches.pairs)
    out << m.label << ' ' << m.query.x << ' ' << m.query.y << ' ' << m.ref.x << ' ' << m.ref.y << ' ' << m.distance
        << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace segreg
