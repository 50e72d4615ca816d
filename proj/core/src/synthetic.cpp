#include "iscrc/synthetic.hpp"

#include <cmath>
#include <string>

#include "iscrc/errors.hpp"
#include "rng_internal.hpp"

namespace iscrc {

void SyntheticSpec::validate() const {
  if (classes < 1) {
    throw DataError("synthetic: classes must be at least 1");
  }
  if (dim < 1) {
    throw DataError("synthetic: dim must be at least 1");
  }
  if (subspace_dim < 1 || subspace_dim >= dim) {
    throw DataError("synthetic: need 1 <= subspace_dim < dim");
  }
  if (noise_sigma < 0.0) {
    throw DataError("synthetic: noise_sigma must be nonnegative");
  }
  if (frames_per_set < 1) {
    throw DataError("synthetic: frames_per_set must be at least 1");
  }
  if (sets_per_class < 1) {
    throw DataError("synthetic: sets_per_class must be at least 1");
  }
}

namespace {

std::string class_label(int index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 2) {
    digits.insert(digits.begin(), '0');
  }
  return "class_" + digits;
}

FeatureMatrix subspace_set(detail::Rng& rng, const FeatureMatrix& basis,
                           const SyntheticSpec& spec) {
  // Frames of one class lie on a fixed-width cone around the first basis
  // direction: every frame carries the same mean component and the same
  // scatter norm, so unit scaling keeps frame weights uniform across the set.
  constexpr double kConeOffset = 2.0;
  FeatureMatrix coeffs =
      rng.gaussian_matrix(spec.subspace_dim, spec.frames_per_set);
  const int scatter = spec.subspace_dim - 1;
  for (int f = 0; f < spec.frames_per_set; ++f) {
    if (scatter > 0) {
      coeffs.col(f).tail(scatter) *=
          std::sqrt(static_cast<double>(scatter)) /
          coeffs.col(f).tail(scatter).norm();
    }
  }
  coeffs.row(0).setConstant(kConeOffset);
  FeatureMatrix samples = basis * coeffs;
  if (spec.noise_sigma > 0.0) {
    samples +=
        spec.noise_sigma * rng.gaussian_matrix(spec.dim, spec.frames_per_set);
  }
  return normalized_columns(samples, "synthetic set");
}

FeatureMatrix shell_set(detail::Rng& rng, double radius,
                        const SyntheticSpec& spec) {
  FeatureMatrix samples(spec.dim, spec.frames_per_set);
  for (int f = 0; f < spec.frames_per_set; ++f) {
    Vector direction = rng.gaussian_matrix(spec.dim, 1);
    direction.normalize();
    Vector noise = Vector::Zero(spec.dim);
    if (spec.noise_sigma > 0.0) {
      noise = spec.noise_sigma * rng.gaussian_matrix(spec.dim, 1);
    }
    samples.col(f) = radius * direction + noise;
  }
  return samples;  // radii carry the class information, keep the scale
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  detail::Rng rng(spec.seed);
  SyntheticDataset data;
  data.galleries.reserve(static_cast<std::size_t>(spec.classes));
  data.queries.reserve(
      static_cast<std::size_t>(spec.classes * (spec.sets_per_class - 1)));

  for (int c = 0; c < spec.classes; ++c) {
    const std::string label = class_label(c);
    FeatureMatrix basis;
    double radius = 0.0;
    if (spec.geometry == SyntheticGeometry::subspace) {
      basis = rng.orthonormal_basis(spec.dim, spec.subspace_dim);
    } else {
      radius = 1.0 + 2.0 * c;
    }
    for (int s = 0; s < spec.sets_per_class; ++s) {
      ImageSet set;
      set.label = label;
      set.id = label + "_set" + std::to_string(s);
      set.features = spec.geometry == SyntheticGeometry::subspace
                         ? subspace_set(rng, basis, spec)
                         : shell_set(rng, radius, spec);
      if (s == 0) {
        data.galleries.push_back(std::move(set));
      } else {
        data.queries.push_back(std::move(set));
      }
    }
  }
  return data;
}

}  // namespace iscrc
