#include "iscrc/model.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace iscrc {

void validate_features(const FeatureMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw DataError(std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) {
    throw DataError(std::string(what) + ": non-finite entry");
  }
}

FeatureMatrix normalized_columns(const FeatureMatrix& m,
                                 std::string_view what) {
  validate_features(m, what);
  FeatureMatrix out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm <= std::numeric_limits<double>::min()) {
      throw DataError(std::string(what) + ": zero column " +
                      std::to_string(j) + " cannot be normalized");
    }
    out.col(j) /= norm;
  }
  return out;
}

CompressedGalleryCollection CompressedGalleryCollection::from_classes(
    std::vector<std::pair<std::string, FeatureMatrix>> parts) {
  if (parts.empty()) {
    throw DataError("gallery: no classes");
  }
  CompressedGalleryCollection g;
  std::unordered_set<std::string> seen;
  const Eigen::Index dim = parts.front().second.rows();
  Eigen::Index total = 0;
  g.offsets_.reserve(parts.size() + 1);
  g.offsets_.push_back(0);
  for (const auto& [label, atoms] : parts) {
    if (label.empty()) {
      throw DataError("gallery: empty class label");
    }
    if (!seen.insert(label).second) {
      throw DataError("gallery: duplicate class label '" + label + "'");
    }
    validate_features(atoms, "gallery class '" + label + "'");
    if (atoms.rows() != dim) {
      throw DimensionError("gallery class '" + label + "': dimension " +
                           std::to_string(atoms.rows()) + " != " +
                           std::to_string(dim));
    }
    total += atoms.cols();
    g.offsets_.push_back(total);
    g.labels_.push_back(label);
  }
  g.atoms_.resize(dim, total);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    g.atoms_.middleCols(g.offsets_[k], g.offsets_[k + 1] - g.offsets_[k]) =
        parts[k].second;
  }
  return g;
}

bool CompressedGalleryCollection::has_unit_atoms(double tol) const {
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    if (std::abs(atoms_.col(j).norm() - 1.0) > tol) {
      return false;
    }
  }
  return true;
}

void KernelSpec::validate() const {
  if (kind == KernelKind::gaussian && !(delta > 0.0)) {
    throw DataError("kernel: delta must be positive");
  }
}

double SolverConfig::multiplier_init_for(Eigen::Index n_a) const {
  if (multiplier_init) {
    return *multiplier_init;
  }
  return 2.5 / static_cast<double>(n_a);
}

double SolverConfig::gamma_for(Eigen::Index n_a) const {
  if (gamma) {
    return *gamma;
  }
  return multiplier_init_for(n_a) / 2.0;
}

void SolverConfig::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    throw DataError("config: lambda1 and lambda2 must be nonnegative");
  }
  if (multiplier_init && !(*multiplier_init > 0.0)) {
    throw DataError("config: multiplier_init must be positive");
  }
  if (gamma && !(*gamma > 0.0)) {
    throw DataError("config: gamma must be positive");
  }
  if (!(tau > 0.0)) {
    throw DataError("config: tau must be positive");
  }
  kernel.validate();
  if (max_outer_iters < 1) {
    throw DataError("config: max_outer_iters must be at least 1");
  }
  if (!(lasso_tol > 0.0) || !(qp_tol > 0.0)) {
    throw DataError("config: tolerances must be positive");
  }
  if (lasso_max_iters < 1 || qp_max_iters < 1) {
    throw DataError("config: iteration caps must be at least 1");
  }
  if (atoms_per_class < 1) {
    throw DataError("config: atoms_per_class must be at least 1");
  }
}

ResidualMap residual_per_class(const FeatureMatrix& Y, const Vector& a,
                               const CompressedGalleryCollection& D,
                               const Vector& beta) {
  if (Y.rows() != D.dimension()) {
    throw DimensionError("residuals: query dimension " +
                         std::to_string(Y.rows()) + " != gallery dimension " +
                         std::to_string(D.dimension()));
  }
  if (a.size() != Y.cols() || beta.size() != D.total_atoms()) {
    throw DimensionError("residuals: coefficient sizes do not match data");
  }
  const Vector hull = Y * a;
  ResidualMap out;
  out.reserve(D.class_count());
  for (std::size_t k = 0; k < D.class_count(); ++k) {
    const Vector approx =
        D.class_block(k) * beta.segment(D.class_begin(k), D.class_size(k));
    out.emplace_back(D.labels()[k], (hull - approx).squaredNorm());
  }
  return out;
}

const std::string& classify(const ResidualMap& residuals) {
  if (residuals.empty()) {
    throw DataError("classify: no residuals");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < residuals.size(); ++k) {
    if (residuals[k].second < residuals[best].second) {
      best = k;
    }
  }
  return residuals[best].first;
}

}  // namespace iscrc
