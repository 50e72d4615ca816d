#include "iscrc/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "iscrc/errors.hpp"
#include "iscrc/solvers.hpp"
#include "rng_internal.hpp"

namespace iscrc {

void CompressionConfig::validate() const {
  if (atoms < 1) {
    throw DataError("compression: atoms must be at least 1");
  }
  if (code_lambda < 0.0) {
    throw DataError("compression: code_lambda must be nonnegative");
  }
  if (max_iters < 1) {
    throw DataError("compression: max_iters must be at least 1");
  }
  if (!(tol > 0.0)) {
    throw DataError("compression: tol must be positive");
  }
}

namespace {

FeatureMatrix initial_atoms(const FeatureMatrix& samples, int atom_count,
                            std::uint64_t seed) {
  const Eigen::Index n = samples.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (n > atom_count) {
    detail::Rng rng(seed);
    rng.shuffle(order);
  }

  const FeatureMatrix unit = normalized_columns(samples, "compression input");
  FeatureMatrix atoms(samples.rows(), atom_count);
  std::vector<Eigen::Index> chosen;
  chosen.reserve(static_cast<std::size_t>(atom_count));
  auto duplicate = [&](Eigen::Index candidate) {
    return std::any_of(chosen.begin(), chosen.end(), [&](Eigen::Index c) {
      return unit.col(c) == unit.col(candidate);
    });
  };
  for (Eigen::Index idx : order) {
    if (static_cast<int>(chosen.size()) == atom_count) {
      break;
    }
    if (!duplicate(idx)) {
      chosen.push_back(idx);
    }
  }
  // Fewer distinct columns than atoms: fill out with repeats.
  for (std::size_t i = 0; static_cast<int>(chosen.size()) < atom_count; ++i) {
    chosen.push_back(order[i % order.size()]);
  }
  for (int j = 0; j < atom_count; ++j) {
    atoms.col(j) = unit.col(chosen[static_cast<std::size_t>(j)]);
  }
  return atoms;
}

}  // namespace

CompressionResult compress_class(const FeatureMatrix& samples,
                                 const CompressionConfig& config) {
  config.validate();
  validate_features(samples, "compression input");

  const Eigen::Index n = samples.cols();
  const int atom_count =
      std::min<int>(config.atoms, static_cast<int>(n));

  CompressionResult result;
  result.dictionary = initial_atoms(samples, atom_count, config.seed);
  result.codes = FeatureMatrix::Zero(atom_count, n);

  FeatureMatrix gram(atom_count, atom_count);
  Vector xt(atom_count);
  detail::CoordinateDescentScratch scratch;
  Vector code(atom_count);

  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < config.max_iters; ++iter) {
    gram.noalias() = result.dictionary.transpose() * result.dictionary;
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      xt.noalias() = result.dictionary.transpose() * samples.col(i);
      code = result.codes.col(i);  // warm start keeps the pass monotone
      detail::coordinate_descent(gram, xt, samples.col(i).squaredNorm(),
                                 config.code_lambda, 1e-10, 10000, code,
                                 scratch);
      result.codes.col(i) = code;
      penalty += code.lpNorm<1>();
    }

    FeatureMatrix residual = samples - result.dictionary * result.codes;
    for (int j = 0; j < atom_count; ++j) {
      const auto usage = result.codes.row(j);
      if (usage.isZero(0.0)) {
        Eigen::Index worst = 0;
        residual.colwise().squaredNorm().maxCoeff(&worst);
        result.dictionary.col(j) =
            normalized_columns(samples.col(worst), "compression input").col(0);
        result.reinitialized_atoms.push_back(iter);
        continue;
      }
      const Vector with_atom_removed =
          residual * usage.transpose() +
          result.dictionary.col(j) * usage.squaredNorm();
      const double norm = with_atom_removed.norm();
      if (norm <= std::numeric_limits<double>::min()) {
        Eigen::Index worst = 0;
        residual.colwise().squaredNorm().maxCoeff(&worst);
        result.dictionary.col(j) =
            normalized_columns(samples.col(worst), "compression input").col(0);
        result.reinitialized_atoms.push_back(iter);
        continue;
      }
      const Vector updated = with_atom_removed / norm;
      residual.noalias() += (result.dictionary.col(j) - updated) * usage;
      result.dictionary.col(j) = updated;
    }

    const double objective = residual.squaredNorm() +
                             config.code_lambda * penalty;
    result.objective_trace.push_back(objective);
    result.iterations = iter + 1;
    if (std::abs(previous - objective) <=
        config.tol * std::max(1.0, std::abs(previous))) {
      break;
    }
    previous = objective;
  }
  return result;
}

CompressedGalleryCollection compress_gallery(
    const std::vector<ImageSet>& gallery, const CompressionConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, FeatureMatrix>> parts;
  parts.reserve(gallery.size());
  std::uint64_t index = 0;
  for (const auto& set : gallery) {
    CompressionConfig per_class = config;
    per_class.seed = config.seed + index;
    parts.emplace_back(set.label,
                       compress_class(set.features, per_class).dictionary);
    ++index;
  }
  return CompressedGalleryCollection::from_classes(std::move(parts));
}

CompressedGalleryCollection verbatim_gallery(const std::vector<ImageSet>& sets,
                                             bool normalize) {
  std::vector<std::pair<std::string, FeatureMatrix>> parts;
  parts.reserve(sets.size());
  for (const auto& set : sets) {
    parts.emplace_back(set.label,
                       normalize
                           ? normalized_columns(set.features, "gallery set")
                           : set.features);
  }
  return CompressedGalleryCollection::from_classes(std::move(parts));
}

}  // namespace iscrc
