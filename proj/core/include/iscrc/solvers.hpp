#pragma once

#include <Eigen/Core>

#include <vector>

#include "iscrc/model.hpp"

namespace iscrc {

struct LassoResult {
  Vector coefficients;
  /// 0.5-free convention: ||X b - t||^2 + lambda ||b||_1.
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Minimizes ||X b - t||^2 + lambda ||b||_1 by cyclic coordinate descent
/// from a zero start. Convergence is declared when every coordinate
/// satisfies the subgradient optimality condition within tol. Hitting
/// max_iters returns the best iterate seen with converged = false.
LassoResult lasso_solve(const FeatureMatrix& X, const Vector& t, double lambda,
                        double tol = 1e-8, int max_iters = 10000);

struct RidgeHullResult {
  Vector a;
  Vector beta;
  /// Multiplier of the sum constraint recovered from the normalization,
  /// lambda3 = -1 / (d' z0); with z = [a; beta] and the system matrix M the
  /// solution satisfies M z + lambda3 d = 0 and d' z = 1.
  double lambda3 = 0.0;
};

/// Closed-form minimizer of ||Y a - D beta||^2 + lambda1 ||a||^2 +
/// lambda2 ||beta||^2 subject to sum(a) = 1. Requires both penalties
/// strictly positive so the system matrix is positive definite.
RidgeHullResult constrained_ridge_solve(const FeatureMatrix& Y,
                                        const FeatureMatrix& D, double lambda1,
                                        double lambda2);

struct ProjectionResult {
  Vector x;
  /// Lagrange multiplier mu at the solution of sum(clamp(v - mu, 0, tau)) = 1.
  double mu = 0.0;
  int iterations = 0;
};

/// Euclidean projection onto {x : sum(x) = 1, 0 <= x_i <= tau}.
/// Requires n * tau >= 1 so the set is nonempty, and tau > 0.
ProjectionResult project_capped_simplex(const Vector& v, double tau);

struct QpResult {
  Vector a;
  Vector beta;
  double objective = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = true;
};

/// Minimizes z' H z over z = [a; beta] with a and beta each constrained to
/// the capped simplex {sum = 1, 0 <= . <= tau}. H must be symmetric PSD;
/// block coordinate projected gradient with a 1/L step per block, L from a
/// Gershgorin bound. A strict objective increase reports SolverError.
QpResult solve_two_block_qp(const FeatureMatrix& H, Eigen::Index n_a,
                            double tau, double tol = 1e-8,
                            int max_iters = 5000);

namespace detail {

/// Warm-startable core of lasso_solve for callers that factor the Gram
/// matrix once across many targets. gram = X'X, xt = X' t, tt = t' t;
/// b holds the start and receives the solution.
struct CoordinateDescentScratch {
  Vector gradient_cache;  // gram * b, maintained incrementally
};

struct CoordinateDescentOutcome {
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
};

CoordinateDescentOutcome coordinate_descent(const FeatureMatrix& gram,
                                            const Vector& xt, double tt,
                                            double lambda, double tol,
                                            int max_iters, Vector& b,
                                            CoordinateDescentScratch& scratch);

}  // namespace detail

}  // namespace iscrc
