#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "segreg/descproc.hpp"
#include "segreg/segsf.hpp"
#include "segreg/types.hpp"

namespace segreg {

struct Match {
  Point2 query;
  Point2 ref;
  int label = 0;
  double distance = 0.0;
  std::size_t query_index = 0;  // index within the class subset
  std::size_t ref_index = 0;
};

/// Ratio-test survivors pooled across classes, ordered by (class, query index).
struct MatchSet {
  std::vector<Match> pairs;
  std::map<int, std::size_t> per_class;
  std::vector<int> skipped_classes;
};

struct MatchOptions {
  double ratio = 0.7;
  Eigen::Index pca_dim = 100;
  bool cross_check = false;
  Exec exec = Exec::Parallel;
};

/// Nearest-neighbour matching of conditioned descriptors with a strict ratio
/// test d1/d2 < ratio; d2 == 0 rejects. With cross_check, the query must also
/// be the reference's nearest query.
std::vector<Match> match_class(const Matrix& query_desc, std::span<const Point2> query_kp, const Matrix& ref_desc,
                               std::span<const Point2> ref_kp, int label, double ratio, bool cross_check = false,
                               Exec exec = Exec::Parallel);

/// Per-class conditioning and matching. `classes` empty means every class
/// present in either set. Classes with no query feature or fewer than two
/// reference features are skipped.
MatchSet match_all(const SegSFSet& query, const SegSFSet& ref, std::span<const int> classes,
                   const MatchOptions& options = {});

/// One line per pair: "class qx qy rx ry dist".
void write_match_dump(const MatchSet& matches, std::ostream& out);

}  // namespace segreg
