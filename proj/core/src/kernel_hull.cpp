#include "iscrc/kernel_hull.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include "iscrc/errors.hpp"
#include "iscrc/solvers.hpp"

namespace iscrc {

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t fingerprint(const KernelSpec& spec,
                          const FeatureMatrix& atoms) {
  std::uint64_t hash = 14695981039346656037ull;
  const auto kind = static_cast<std::int32_t>(spec.kind);
  hash = fnv1a(hash, &kind, sizeof(kind));
  hash = fnv1a(hash, &spec.delta, sizeof(spec.delta));
  const Eigen::Index rows = atoms.rows();
  const Eigen::Index cols = atoms.cols();
  hash = fnv1a(hash, &rows, sizeof(rows));
  hash = fnv1a(hash, &cols, sizeof(cols));
  hash = fnv1a(hash, atoms.data(),
               sizeof(double) * static_cast<std::size_t>(atoms.size()));
  return hash;
}

void check_kernel_inputs(const FeatureMatrix& A, const FeatureMatrix& B) {
  validate_features(A, "kernel input");
  validate_features(B, "kernel input");
  if (A.rows() != B.rows()) {
    throw DimensionError("kernel: dimension mismatch " +
                         std::to_string(A.rows()) + " vs " +
                         std::to_string(B.rows()));
  }
}

}  // namespace

double kernel_value(const KernelSpec& spec, const Vector& x, const Vector& y) {
  spec.validate();
  if (x.size() != y.size()) {
    throw DimensionError("kernel: vector length mismatch");
  }
  if (spec.kind == KernelKind::linear) {
    return x.dot(y);
  }
  return std::exp(-(x - y).squaredNorm() / (2.0 * spec.delta * spec.delta));
}

FeatureMatrix kernel_matrix(const KernelSpec& spec, const FeatureMatrix& A,
                            const FeatureMatrix& B) {
  spec.validate();
  check_kernel_inputs(A, B);
  FeatureMatrix cross(A.cols(), B.cols());
  cross.noalias() = A.transpose() * B;
  if (spec.kind == KernelKind::linear) {
    return cross;
  }
  const Vector a2 = A.colwise().squaredNorm();
  const Vector b2 = B.colwise().squaredNorm();
  FeatureMatrix out =
      ((-2.0 * cross).colwise() + a2).rowwise() + b2.transpose();
  out = (-out / (2.0 * spec.delta * spec.delta)).array().exp();
  return out;
}

std::shared_ptr<const FeatureMatrix> GramCache::gallery_gram(
    const KernelSpec& spec, const CompressedGalleryCollection& gallery) {
  const std::uint64_t key = fingerprint(spec, gallery.atoms());
  {
    std::shared_lock lock(mutex_);
    const auto it = map_.find(key);
    if (it != map_.end()) {
      return it->second;
    }
  }
  auto gram = std::make_shared<const FeatureMatrix>(
      kernel_matrix(spec, gallery.atoms(), gallery.atoms()));
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = map_.emplace(key, std::move(gram));
  (void)inserted;  // a concurrent writer may have won; reuse its matrix
  return it->second;
}

void GramCache::clear() {
  std::unique_lock lock(mutex_);
  map_.clear();
}

std::size_t GramCache::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

HullSolution solve_kernel_hull(const FeatureMatrix& Y,
                               const CompressedGalleryCollection& gallery,
                               const SolverConfig& config, GramCache* cache) {
  config.validate();
  validate_features(Y, "query set");
  if (Y.rows() != gallery.dimension()) {
    throw DimensionError("query dimension " + std::to_string(Y.rows()) +
                         " != gallery dimension " +
                         std::to_string(gallery.dimension()));
  }

  const Eigen::Index n_a = Y.cols();
  const Eigen::Index n_b = gallery.total_atoms();
  const FeatureMatrix kyy = kernel_matrix(config.kernel, Y, Y);
  const FeatureMatrix kyd = kernel_matrix(config.kernel, Y, gallery.atoms());
  std::shared_ptr<const FeatureMatrix> cached;
  FeatureMatrix local;
  if (cache != nullptr) {
    cached = cache->gallery_gram(config.kernel, gallery);
  } else {
    local = kernel_matrix(config.kernel, gallery.atoms(), gallery.atoms());
  }
  const FeatureMatrix& kdd = cache != nullptr ? *cached : local;

  FeatureMatrix H(n_a + n_b, n_a + n_b);
  H.topLeftCorner(n_a, n_a) = kyy;
  H.topRightCorner(n_a, n_b) = -kyd;
  H.bottomLeftCorner(n_b, n_a) = -kyd.transpose();
  H.bottomRightCorner(n_b, n_b) = kdd;

  const auto qp =
      solve_two_block_qp(H, n_a, config.tau, config.qp_tol, config.qp_max_iters);

  HullSolution solution;
  solution.a = qp.a;
  solution.beta = qp.beta;
  solution.objective_trace = qp.objective_trace;
  solution.converged = qp.converged;
  solution.constraint_gap = std::abs(qp.a.sum() - 1.0);

  const double self = qp.a.dot(kyy * qp.a);
  const Vector cross = kyd.transpose() * qp.a;
  solution.residuals.reserve(gallery.class_count());
  for (std::size_t k = 0; k < gallery.class_count(); ++k) {
    const Eigen::Index begin = gallery.class_begin(k);
    const Eigen::Index size = gallery.class_size(k);
    const auto beta_k = qp.beta.segment(begin, size);
    double r = self - 2.0 * cross.segment(begin, size).dot(beta_k) +
               beta_k.dot(kdd.block(begin, begin, size, size) * beta_k);
    if (r < 0.0) {
      if (r < -1e-8) {
        throw SolverError("kernel hull: residual " + std::to_string(r) +
                          " for class '" + gallery.labels()[k] +
                          "' is negative beyond round-off");
      }
      r = 0.0;
    }
    solution.residuals.emplace_back(gallery.labels()[k], r);
  }
  return solution;
}

ClassificationResult classify_kernel_hull(
    const FeatureMatrix& Y, const CompressedGalleryCollection& gallery,
    const SolverConfig& config, GramCache* cache) {
  const auto start = std::chrono::steady_clock::now();
  ClassificationResult result;
  result.solution = solve_kernel_hull(Y, gallery, config, cache);
  result.residuals = result.solution.residuals;
  result.predicted = classify(result.residuals);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace iscrc
