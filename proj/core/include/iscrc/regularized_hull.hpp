#pragma once

#include "iscrc/model.hpp"

namespace iscrc {

/// Joint l2-regularized hull representation. Solves
///   min ||Y a - D beta||^2 + lambda1 ||a||^2 + lambda2 ||beta||^2
///   s.t. sum(a) = 1
/// in closed form via the KKT system of the bordered quadratic.
HullSolution solve_l2(const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config);

/// Iterate of the augmented-Lagrangian l1 loop.
struct L1State {
  Vector a;
  Vector beta;
  double multiplier = 0.0;
  int iteration = 0;
  double augmented_objective = 0.0;
};

/// One a-step: lasso over the stacked design [Y; sqrt(gamma/2) 1'] against
/// the stacked target [D beta; sqrt(gamma/2)(1 - multiplier/gamma)], which
/// folds the sum constraint's augmented terms into the least squares.
Vector l1_update_a(const L1State& state, const FeatureMatrix& Y,
                   const CompressedGalleryCollection& gallery,
                   const SolverConfig& config);

/// One beta-step: lasso of Y a_next over the gallery atoms with lambda2.
Vector l1_update_beta(const Vector& a_next, const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config);

/// Multiplier ascent: multiplier + gamma * (sum(a_next) - 1).
double l1_update_multiplier(const L1State& state, const Vector& a_next,
                            const SolverConfig& config);

/// Joint l1-regularized hull representation. Solves
///   min ||Y a - D beta||^2 + lambda1 ||a||_1 + lambda2 ||beta||_1
///   s.t. sum(a) = 1
/// by augmented-Lagrangian alternation: an a-lasso with the constraint
/// folded into an extra quadratic row, a beta-lasso, then a multiplier
/// ascent step. objective_trace records the true penalized objective per
/// outer iteration. When the final |sum(a) - 1| exceeds 1e-6 the returned
/// a is rescaled to satisfy the constraint exactly.
HullSolution solve_l1(const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config);

/// Classifies Y against the gallery using solve_l1 or solve_l2 and the
/// shared per-class residual rule.
ClassificationResult classify_l1(const FeatureMatrix& Y,
                                 const CompressedGalleryCollection& gallery,
                                 const SolverConfig& config);
ClassificationResult classify_l2(const FeatureMatrix& Y,
                                 const CompressedGalleryCollection& gallery,
                                 const SolverConfig& config);

}  // namespace iscrc
