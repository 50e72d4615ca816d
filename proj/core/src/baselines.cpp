#include "iscrc/baselines.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <string>

#include "iscrc/errors.hpp"
#include "iscrc/solvers.hpp"

namespace iscrc {

namespace {

void check_query(const FeatureMatrix& Y,
                 const CompressedGalleryCollection& gallery) {
  validate_features(Y, "query set");
  if (Y.rows() != gallery.dimension()) {
    throw DimensionError("query dimension " + std::to_string(Y.rows()) +
                         " != gallery dimension " +
                         std::to_string(gallery.dimension()));
  }
}

/// Average per-class residuals of per-frame codings. code(y, beta_out)
/// fills the coefficient vector for one frame and reports convergence.
template <typename Code>
ClassificationResult average_residual_classify(
    const FeatureMatrix& Y, const CompressedGalleryCollection& gallery,
    Code&& code) {
  const auto start = std::chrono::steady_clock::now();
  const FeatureMatrix& D = gallery.atoms();
  const Eigen::Index frames = Y.cols();

  Vector totals = Vector::Zero(static_cast<Eigen::Index>(gallery.class_count()));
  Vector beta(D.cols());
  bool converged = true;
  for (Eigen::Index f = 0; f < frames; ++f) {
    converged = code(Y.col(f), beta) && converged;
    for (std::size_t k = 0; k < gallery.class_count(); ++k) {
      const Vector approx =
          gallery.class_block(k) *
          beta.segment(gallery.class_begin(k), gallery.class_size(k));
      totals[static_cast<Eigen::Index>(k)] +=
          (Y.col(f) - approx).squaredNorm();
    }
  }

  ClassificationResult result;
  result.solution.converged = converged;
  result.residuals.reserve(gallery.class_count());
  for (std::size_t k = 0; k < gallery.class_count(); ++k) {
    result.residuals.emplace_back(
        gallery.labels()[k],
        totals[static_cast<Eigen::Index>(k)] / static_cast<double>(frames));
  }
  result.solution.residuals = result.residuals;
  result.predicted = classify(result.residuals);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

ClassificationResult classify_src(const FeatureMatrix& Y,
                                  const CompressedGalleryCollection& gallery,
                                  const SolverConfig& config) {
  config.validate();
  check_query(Y, gallery);
  const FeatureMatrix& D = gallery.atoms();
  FeatureMatrix gram(D.cols(), D.cols());
  gram.noalias() = D.transpose() * D;
  detail::CoordinateDescentScratch scratch;

  return average_residual_classify(
      Y, gallery, [&](const Vector& y, Vector& beta) {
        beta.setZero();
        const auto outcome = detail::coordinate_descent(
            gram, D.transpose() * y, y.squaredNorm(), config.lambda2,
            config.lasso_tol, config.lasso_max_iters, beta, scratch);
        return outcome.converged;
      });
}

ClassificationResult classify_crc(const FeatureMatrix& Y,
                                  const CompressedGalleryCollection& gallery,
                                  const SolverConfig& config) {
  config.validate();
  check_query(Y, gallery);
  if (!(config.lambda2 > 0.0)) {
    throw DataError("crc: lambda2 must be strictly positive");
  }
  const FeatureMatrix& D = gallery.atoms();
  FeatureMatrix system(D.cols(), D.cols());
  system.noalias() = D.transpose() * D;
  system.diagonal().array() += config.lambda2;
  Eigen::LLT<FeatureMatrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw SolverError("crc: ridge system factorization failed");
  }

  return average_residual_classify(Y, gallery,
                                   [&](const Vector& y, Vector& beta) {
                                     beta = llt.solve(D.transpose() * y);
                                     return true;
                                   });
}

}  // namespace iscrc
