#pragma once

#include "iscrc/model.hpp"

namespace iscrc {

/// Per-image sparse coding baseline: each query frame is lasso-coded over
/// the full dictionary with penalty lambda2, per-class squared residuals are
/// averaged across frames, and the smallest average wins.
ClassificationResult classify_src(const FeatureMatrix& Y,
                                  const CompressedGalleryCollection& gallery,
                                  const SolverConfig& config);

/// Per-image ridge coding baseline with the same average-residual rule.
ClassificationResult classify_crc(const FeatureMatrix& Y,
                                  const CompressedGalleryCollection& gallery,
                                  const SolverConfig& config);

}  // namespace iscrc
