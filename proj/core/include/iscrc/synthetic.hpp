#pragma once

#include <cstdint>
#include <vector>

#include "iscrc/model.hpp"

namespace iscrc {

enum class SyntheticGeometry { subspace, shells };

/// Generator spec for desk-scale datasets. subspace draws each class from a
/// seeded random r-dimensional linear subspace with additive Gaussian noise
/// and unit-normalizes samples; shells places each class on a sphere of
/// class-specific radius plus noise and keeps the raw scale so that radii
/// stay informative.
struct SyntheticSpec {
  int classes = 10;
  int dim = 100;
  int subspace_dim = 5;
  double noise_sigma = 0.05;
  int frames_per_set = 50;
  int sets_per_class = 4;
  std::uint64_t seed = 42;
  SyntheticGeometry geometry = SyntheticGeometry::subspace;

  void validate() const;
};

struct SyntheticDataset {
  std::vector<ImageSet> galleries;  // one per class
  std::vector<ImageSet> queries;    // (sets_per_class - 1) per class
};

/// Deterministic under spec.seed: the same spec yields bitwise-identical
/// matrices on any platform (the generator uses its own uniform and normal
/// samplers rather than the implementation-defined std distributions).
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace iscrc
