#pragma once

#include <cstdint>
#include <vector>

#include "iscrc/model.hpp"

namespace iscrc {

struct CompressionConfig {
  int atoms = 10;
  double code_lambda = 1e-3;
  int max_iters = 30;
  double tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CompressionResult {
  FeatureMatrix dictionary;  // d x atoms, unit columns
  FeatureMatrix codes;       // atoms x n
  std::vector<double> objective_trace;
  /// Iterations at which an unused atom was reseeded from the worst
  /// reconstructed sample.
  std::vector<int> reinitialized_atoms;
  int iterations = 0;
};

/// Learns a small unit-norm dictionary for one class by alternating
/// l1-penalized coding with exact single-atom updates, the sparse analogue
/// of alternating least squares. The requested atom count is clamped to the
/// number of samples. The objective ||X - D C||_F^2 + lambda sum_i ||c_i||_1
/// is recorded per iteration and never increases beyond round-off.
CompressionResult compress_class(const FeatureMatrix& samples,
                                 const CompressionConfig& config);

/// Compresses every set in the gallery with a shared configuration, seeding
/// each class deterministically from config.seed and the class index.
CompressedGalleryCollection compress_gallery(
    const std::vector<ImageSet>& gallery, const CompressionConfig& config);

/// Builds a gallery collection from raw sets without learning, keeping the
/// feature columns as atoms. When normalize is true columns are rescaled to
/// unit norm, otherwise they are taken verbatim.
CompressedGalleryCollection verbatim_gallery(const std::vector<ImageSet>& sets,
                                             bool normalize = true);

}  // namespace iscrc
