#include "iscrc/regularized_hull.hpp"

#include <chrono>
#include <cmath>
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

double hull_objective_l1(const FeatureMatrix& Y, const Vector& a,
                         const FeatureMatrix& D, const Vector& beta,
                         double lambda1, double lambda2) {
  return (Y * a - D * beta).squaredNorm() + lambda1 * a.lpNorm<1>() +
         lambda2 * beta.lpNorm<1>();
}

template <typename Solve>
ClassificationResult timed_classification(Solve&& solve) {
  const auto start = std::chrono::steady_clock::now();
  ClassificationResult result;
  result.solution = solve();
  result.residuals = result.solution.residuals;
  result.predicted = classify(result.residuals);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

HullSolution solve_l2(const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config) {
  config.validate();
  check_query(Y, gallery);

  const auto ridge = constrained_ridge_solve(Y, gallery.atoms(),
                                             config.lambda1, config.lambda2);
  HullSolution solution;
  solution.a = ridge.a;
  solution.beta = ridge.beta;
  solution.constraint_gap = std::abs(solution.a.sum() - 1.0);
  solution.objective_trace = {
      (Y * solution.a - gallery.atoms() * solution.beta).squaredNorm() +
      config.lambda1 * solution.a.squaredNorm() +
      config.lambda2 * solution.beta.squaredNorm()};
  solution.residuals = residual_per_class(Y, solution.a, gallery,
                                          solution.beta);
  solution.converged = true;
  return solution;
}

Vector l1_update_a(const L1State& state, const FeatureMatrix& Y,
                   const CompressedGalleryCollection& gallery,
                   const SolverConfig& config) {
  check_query(Y, gallery);
  const Eigen::Index n_a = Y.cols();
  const double gamma = config.gamma_for(n_a);
  const double root = std::sqrt(gamma / 2.0);

  FeatureMatrix stacked(Y.rows() + 1, n_a);
  stacked.topRows(Y.rows()) = Y;
  stacked.row(Y.rows()).setConstant(root);

  Vector target(Y.rows() + 1);
  target.head(Y.rows()).noalias() = gallery.atoms() * state.beta;
  target[Y.rows()] = root * (1.0 - state.multiplier / gamma);

  return lasso_solve(stacked, target, config.lambda1, config.lasso_tol,
                     config.lasso_max_iters)
      .coefficients;
}

Vector l1_update_beta(const Vector& a_next, const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config) {
  check_query(Y, gallery);
  return lasso_solve(gallery.atoms(), Y * a_next, config.lambda2,
                     config.lasso_tol, config.lasso_max_iters)
      .coefficients;
}

double l1_update_multiplier(const L1State& state, const Vector& a_next,
                            const SolverConfig& config) {
  const double gamma = config.gamma_for(a_next.size());
  return state.multiplier + gamma * (a_next.sum() - 1.0);
}

HullSolution solve_l1(const FeatureMatrix& Y,
                      const CompressedGalleryCollection& gallery,
                      const SolverConfig& config) {
  config.validate();
  check_query(Y, gallery);

  const Eigen::Index n_a = Y.cols();
  const FeatureMatrix& D = gallery.atoms();
  HullSolution solution;

  if (n_a == 1) {
    // The constraint pins the single coefficient at 1; only beta is solved.
    solution.a = Vector::Ones(1);
    const auto lasso = lasso_solve(D, Y.col(0), config.lambda2,
                                   config.lasso_tol, config.lasso_max_iters);
    solution.beta = lasso.coefficients;
    solution.objective_trace = {hull_objective_l1(
        Y, solution.a, D, solution.beta, config.lambda1, config.lambda2)};
    solution.constraint_gap = 0.0;
    solution.converged = lasso.converged;
    solution.residuals =
        residual_per_class(Y, solution.a, gallery, solution.beta);
    return solution;
  }

  const double gamma = config.gamma_for(n_a);
  const double root = std::sqrt(gamma / 2.0);

  // Gram matrices of both lasso subproblems are iteration-invariant:
  // the a-design is [Y; root 1'] and the beta-design is D throughout.
  FeatureMatrix gram_a(n_a, n_a);
  gram_a.noalias() = Y.transpose() * Y;
  gram_a.array() += gamma / 2.0;
  FeatureMatrix gram_b(D.cols(), D.cols());
  gram_b.noalias() = D.transpose() * D;

  L1State state;
  state.a = Vector::Zero(n_a);
  state.beta = Vector::Zero(D.cols());
  state.multiplier = config.multiplier_init_for(n_a);

  detail::CoordinateDescentScratch scratch_a;
  detail::CoordinateDescentScratch scratch_b;
  solution.converged = false;
  double previous_objective = 0.0;

  for (int iter = 0; iter < config.max_outer_iters; ++iter) {
    const Vector hull_target = D * state.beta;
    const double offset = root * (1.0 - state.multiplier / gamma);
    const Vector xt_a = (Y.transpose() * hull_target).array() + root * offset;
    const double tt_a = hull_target.squaredNorm() + offset * offset;
    state.a.setZero();
    detail::coordinate_descent(gram_a, xt_a, tt_a, config.lambda1,
                               config.lasso_tol, config.lasso_max_iters,
                               state.a, scratch_a);

    const Vector coded = Y * state.a;
    const Vector xt_b = D.transpose() * coded;
    state.beta.setZero();
    detail::coordinate_descent(gram_b, xt_b, coded.squaredNorm(),
                               config.lambda2, config.lasso_tol,
                               config.lasso_max_iters, state.beta, scratch_b);

    const double gap = state.a.sum() - 1.0;
    state.multiplier += gamma * gap;
    state.iteration = iter + 1;

    const double objective = hull_objective_l1(Y, state.a, D, state.beta,
                                               config.lambda1, config.lambda2);
    state.augmented_objective =
        objective + state.multiplier * gap + 0.5 * gamma * gap * gap;
    solution.objective_trace.push_back(objective);

    if (iter > 0 && std::abs(objective - previous_objective) < config.lasso_tol &&
        std::abs(gap) < 1e-3) {
      solution.converged = true;
      previous_objective = objective;
      break;
    }
    previous_objective = objective;
  }

  solution.constraint_gap = std::abs(state.a.sum() - 1.0);
  if (solution.constraint_gap > 1e-6) {
    const double total = state.a.sum();
    if (std::abs(total) < 1e-6) {
      throw SolverError("l1 hull: coefficients sum to nearly zero");
    }
    state.a /= total;
  }
  solution.a = state.a;
  solution.beta = state.beta;
  solution.residuals = residual_per_class(Y, solution.a, gallery,
                                          solution.beta);
  return solution;
}

ClassificationResult classify_l1(const FeatureMatrix& Y,
                                 const CompressedGalleryCollection& gallery,
                                 const SolverConfig& config) {
  return timed_classification([&] { return solve_l1(Y, gallery, config); });
}

ClassificationResult classify_l2(const FeatureMatrix& Y,
                                 const CompressedGalleryCollection& gallery,
                                 const SolverConfig& config) {
  return timed_classification([&] { return solve_l2(Y, gallery, config); });
}

}  // namespace iscrc
