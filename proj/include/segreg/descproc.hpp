#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace segreg {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Tally of vectors left untouched by normalization because their norm was
/// at or below kZeroNorm.
struct NormalizeStats {
  std::size_t zero_vectors = 0;
};

inline constexpr double kZeroNorm = 1e-12;

Vector l2_normalize(const Vector& v, NormalizeStats* stats = nullptr);
void l2_normalize_rows(Matrix& rows, NormalizeStats* stats = nullptr);

/// Projection onto the top principal directions. `components` is m x C with
/// orthonormal rows ordered by decreasing explained variance.
struct PCAModel {
  Vector mean;
  Matrix components;

  Eigen::Index input_dim() const { return mean.size(); }
  Eigen::Index output_dim() const { return components.rows(); }
};

/// Fits on the rows of `samples` (n x C, n >= 2). Retains
/// m = min(target, C, numerical rank) directions; no whitening. Each
/// direction's sign is fixed so its largest-magnitude entry is positive.
PCAModel fit_pca(const Matrix& samples, Eigen::Index target = 100);

/// components * (v - mean)
Vector project(const PCAModel& model, const Vector& v);
Matrix project_rows(const PCAModel& model, const Matrix& rows);

struct ConditionedClass {
  Matrix query;
  Matrix ref;
  PCAModel model;
  NormalizeStats stats;
};

/// Normalise, fit one PCA on the union of both normalised sets, project both,
/// normalise again.
ConditionedClass condition_class(const Matrix& query, const Matrix& ref, Eigen::Index target = 100);

}  // namespace segreg
