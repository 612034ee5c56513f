#include "segreg/descproc.hpp"

#include <algorithm>
#include <limits>

#include "segreg/error.hpp"

namespace segreg {

Vector l2_normalize(const Vector& v, NormalizeStats* stats) {
  const double norm = v.norm();
  if (norm <= kZeroNorm) {
    if (stats) ++stats->zero_vectors;
    return v;
  }
  return v / norm;
}

void l2_normalize_rows(Matrix& rows, NormalizeStats* stats) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm <= kZeroNorm) {
      if (stats) ++stats->zero_vectors;
      continue;
    }
    rows.row(i) /= norm;
  }
}

PCAModel fit_pca(const Matrix& samples, Eigen::Index target) {
  if (samples.rows() < 2) throw InsufficientSamples();
  if (target < 1) throw ValidationError("PCA target dimension must be >= 1");

  PCAModel model;
  model.mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double tol = sigma.size() ? sigma(0) * static_cast<double>(std::max(samples.rows(), samples.cols())) *
                                        std::numeric_limits<double>::epsilon()
                                  : 0.0;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol) ++rank;
  const Eigen::Index m = std::min<Eigen::Index>({target, samples.cols(), rank});

  model.components = svd.matrixV().leftCols(m).transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index arg = 0;
    model.components.row(i).cwiseAbs().maxCoeff(&arg);
    if (model.components(i, arg) < 0) model.components.row(i) *= -1.0;
  }
  return model;
}

Vector project(const PCAModel& model, const Vector& v) {
  if (v.size() != model.input_dim())
    throw ValidationError("projection input has length " + std::to_string(v.size()) + ", model expects " +
                          std::to_string(model.input_dim()));
  return model.components * (v - model.mean);
}

Matrix project_rows(const PCAModel& model, const Matrix& rows) {
  if (rows.cols() != model.input_dim()) throw ValidationError("projection input width mismatch");
  return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

ConditionedClass condition_class(const Matrix& query, const Matrix& ref, Eigen::Index target) {
  if (query.cols() != ref.cols()) throw ValidationError("descriptor widths differ between query and reference");
  if (query.rows() < 1) throw InsufficientSamples();

  ConditionedClass out;
  Matrix q = query;
  Matrix r = ref;
  l2_normalize_rows(q, &out.stats);
  l2_normalize_rows(r, &out.stats);

  Matrix pooled(q.rows() + r.rows(), q.cols());
  pooled << q, r;
  out.model = fit_pca(pooled, target);

  out.query = project_rows(out.model, q);
  out.ref = project_rows(out.model, r);
  l2_normalize_rows(out.query, &out.stats);
  l2_normalize_rows(out.ref, &out.stats);
  return out;
}

}  // namespace segreg
