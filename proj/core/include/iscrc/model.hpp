#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iscrc/errors.hpp"

namespace iscrc {

/// Column-oriented feature storage: column j is sample j, rows are feature
/// dimensions. Eigen's default column-major layout matches this convention.
using FeatureMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Residuals keyed by class label, kept in gallery declaration order so that
/// argmin tie-breaking is deterministic.
using ResidualMap = std::vector<std::pair<std::string, double>>;

/// One labeled image set. Gallery sets must carry a nonempty label; query
/// sets may carry their ground-truth label for evaluation.
struct ImageSet {
  std::string label;
  std::string id;
  FeatureMatrix features;
};

/// Concatenation D = [D_1, ..., D_K] of per-class dictionaries with the
/// class partition needed to slice coefficient vectors.
class CompressedGalleryCollection {
public:
  CompressedGalleryCollection() = default;

  /// Builds from (label, atoms) pairs in declaration order. Validates that
  /// dimensions agree, labels are unique and nonempty, and entries are finite.
  static CompressedGalleryCollection from_classes(
      std::vector<std::pair<std::string, FeatureMatrix>> parts);

  std::size_t class_count() const { return labels_.size(); }
  Eigen::Index dimension() const { return atoms_.rows(); }
  Eigen::Index total_atoms() const { return atoms_.cols(); }

  /// The concatenated dictionary, d x total_atoms.
  const FeatureMatrix& atoms() const { return atoms_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Eigen::Index class_begin(std::size_t k) const { return offsets_[k]; }
  Eigen::Index class_size(std::size_t k) const {
    return offsets_[k + 1] - offsets_[k];
  }
  /// View of class k's atoms inside the concatenation.
  auto class_block(std::size_t k) const {
    return atoms_.middleCols(class_begin(k), class_size(k));
  }

  /// True when every atom column has unit Euclidean norm within tol. Holds
  /// for dictionaries produced by compression and for normalized ingestion;
  /// verbatim galleries built from raw features may fail it.
  bool has_unit_atoms(double tol = 1e-10) const;

private:
  FeatureMatrix atoms_;
  std::vector<std::string> labels_;
  std::vector<Eigen::Index> offsets_;  // size K+1, offsets_[K] == total_atoms
};

/// Joint hull representation: query coefficients a, gallery coefficients
/// beta, per-class residuals, and the objective value per outer iteration.
struct HullSolution {
  Vector a;
  Vector beta;
  ResidualMap residuals;
  std::vector<double> objective_trace;
  /// |sum(a) - 1| observed before any final renormalization.
  double constraint_gap = 0.0;
  bool converged = true;
};

struct ClassificationResult {
  std::string predicted;
  ResidualMap residuals;
  HullSolution solution;
  double elapsed_seconds = 0.0;
};

enum class KernelKind { linear, gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  /// Gaussian width delta in k(x,y) = exp(-||x-y||^2 / (2 delta^2)).
  double delta = 5.0;

  void validate() const;
};

/// Every scalar the solvers consume. Unset multiplier_init defaults to
/// 2.5/n_a and unset gamma to multiplier_init/2, both depending on the
/// query set size n_a.
struct SolverConfig {
  double lambda1 = 1e-3;
  double lambda2 = 1e-3;
  std::optional<double> multiplier_init;
  std::optional<double> gamma;
  double tau = 1.0;
  KernelSpec kernel{};
  int max_outer_iters = 10;
  double lasso_tol = 1e-8;
  int lasso_max_iters = 10000;
  double qp_tol = 1e-8;
  int qp_max_iters = 5000;
  int atoms_per_class = 10;

  double multiplier_init_for(Eigen::Index n_a) const;
  double gamma_for(Eigen::Index n_a) const;
  void validate() const;
};

/// Throws DataError unless m is nonempty with all entries finite.
void validate_features(const FeatureMatrix& m, std::string_view what);

/// Returns m with every column scaled to unit Euclidean norm.
/// A zero column cannot be normalized and raises DataError.
FeatureMatrix normalized_columns(const FeatureMatrix& m, std::string_view what);

/// Per-class residuals r_k = ||Y a - D_k beta_k||^2, in gallery order.
ResidualMap residual_per_class(const FeatureMatrix& Y, const Vector& a,
                               const CompressedGalleryCollection& D,
                               const Vector& beta);

/// Label with the minimal residual; ties go to the earliest entry.
const std::string& classify(const ResidualMap& residuals);

}  // namespace iscrc
