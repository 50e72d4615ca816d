#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "iscrc/model.hpp"

namespace iscrc {

double kernel_value(const KernelSpec& spec, const Vector& x, const Vector& y);

/// Pairwise kernel matrix K_ij = k(A.col(i), B.col(j)).
FeatureMatrix kernel_matrix(const KernelSpec& spec, const FeatureMatrix& A,
                            const FeatureMatrix& B);

/// Caches the gallery self-kernel K_DD across queries. Keyed by a content
/// fingerprint of the atom matrix plus the kernel parameters, so a mutated
/// gallery never serves a stale matrix. Thread safe.
class GramCache {
public:
  std::shared_ptr<const FeatureMatrix> gallery_gram(
      const KernelSpec& spec, const CompressedGalleryCollection& gallery);

  void clear();
  std::size_t size() const;

private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const FeatureMatrix>> map_;
};

/// Kernelized convex-hull classifier. Minimizes
///   [a; beta]' [[K_YY, -K_YD], [-K_DY, K_DD]] [a; beta]
/// with a and beta each on the capped simplex {sum = 1, 0 <= . <= tau},
/// then scores class k by the kernel-space residual
///   r_k = a'K_YY a - 2 a'K_YD_k beta_k + beta_k'K_DkDk beta_k.
/// Tiny negative residuals from floating-point cancellation (>= -1e-8) are
/// clamped to zero; anything more negative reports SolverError.
HullSolution solve_kernel_hull(const FeatureMatrix& Y,
                               const CompressedGalleryCollection& gallery,
                               const SolverConfig& config,
                               GramCache* cache = nullptr);

ClassificationResult classify_kernel_hull(
    const FeatureMatrix& Y, const CompressedGalleryCollection& gallery,
    const SolverConfig& config, GramCache* cache = nullptr);

}  // namespace iscrc
