#include "iscrc/solvers.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "iscrc/errors.hpp"

namespace iscrc {

namespace {

double soft_threshold(double x, double threshold) {
  if (x > threshold) {
    return x - threshold;
  }
  if (x < -threshold) {
    return x + threshold;
  }
  return 0.0;
}

}  // namespace

namespace detail {

CoordinateDescentOutcome coordinate_descent(const FeatureMatrix& gram,
                                            const Vector& xt, double tt,
                                            double lambda, double tol,
                                            int max_iters, Vector& b,
                                            CoordinateDescentScratch& scratch) {
  const Eigen::Index n = gram.rows();
  Vector& g = scratch.gradient_cache;
  g.noalias() = gram * b;

  auto objective = [&]() {
    return b.dot(g) - 2.0 * b.dot(xt) + tt + lambda * b.lpNorm<1>();
  };

  CoordinateDescentOutcome out;
  out.converged = false;
  double best_objective = objective();
  Vector best_b = b;

  for (int sweep = 0; sweep < max_iters; ++sweep) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double diag = gram(j, j);
      if (diag <= 0.0) {
        continue;  // zero design column, coordinate stays at its start
      }
      const double old = b[j];
      const double rho = xt[j] - g[j] + diag * old;
      const double next = soft_threshold(rho, lambda / 2.0) / diag;
      if (next != old) {
        g.noalias() += gram.col(j) * (next - old);
        b[j] = next;
      }
    }
    // Incremental gradient updates drift over long runs.
    if ((sweep + 1) % 64 == 0) {
      g.noalias() = gram * b;
    }
    out.iterations = sweep + 1;

    const double obj = objective();
    if (obj < best_objective) {
      best_objective = obj;
      best_b = b;
    }

    bool stationary = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double grad = 2.0 * (g[j] - xt[j]);
      if (b[j] == 0.0) {
        if (std::abs(grad) > lambda + tol) {
          stationary = false;
          break;
        }
      } else if (std::abs(grad + lambda * (b[j] > 0.0 ? 1.0 : -1.0)) > tol) {
        stationary = false;
        break;
      }
    }
    if (stationary) {
      out.converged = true;
      break;
    }
  }

  if (!out.converged) {
    b = best_b;
    g.noalias() = gram * b;
  }
  out.objective = objective();
  return out;
}

}  // namespace detail

LassoResult lasso_solve(const FeatureMatrix& X, const Vector& t, double lambda,
                        double tol, int max_iters) {
  if (X.rows() == 0 || X.cols() == 0) {
    throw DataError("lasso: empty design");
  }
  if (t.size() != X.rows()) {
    throw DimensionError("lasso: target length " + std::to_string(t.size()) +
                         " != design rows " + std::to_string(X.rows()));
  }
  if (!X.allFinite() || !t.allFinite()) {
    throw DataError("lasso: non-finite input");
  }
  if (lambda < 0.0) {
    throw DataError("lasso: negative penalty");
  }
  if (!(tol > 0.0) || max_iters < 1) {
    throw DataError("lasso: invalid tolerance or iteration cap");
  }

  FeatureMatrix gram(X.cols(), X.cols());
  gram.noalias() = X.transpose() * X;
  const Vector xt = X.transpose() * t;

  LassoResult result;
  result.coefficients = Vector::Zero(X.cols());
  detail::CoordinateDescentScratch scratch;
  const auto outcome =
      detail::coordinate_descent(gram, xt, t.squaredNorm(), lambda, tol,
                                 max_iters, result.coefficients, scratch);
  result.objective = outcome.objective;
  result.iterations = outcome.iterations;
  result.converged = outcome.converged;
  return result;
}

RidgeHullResult constrained_ridge_solve(const FeatureMatrix& Y,
                                        const FeatureMatrix& D, double lambda1,
                                        double lambda2) {
  if (Y.rows() == 0 || Y.cols() == 0 || D.rows() == 0 || D.cols() == 0) {
    throw DataError("ridge hull: empty input");
  }
  if (Y.rows() != D.rows()) {
    throw DimensionError("ridge hull: query dimension " +
                         std::to_string(Y.rows()) + " != gallery dimension " +
                         std::to_string(D.rows()));
  }
  if (!Y.allFinite() || !D.allFinite()) {
    throw DataError("ridge hull: non-finite input");
  }
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw DataError("ridge hull: penalties must be strictly positive");
  }

  const Eigen::Index n_a = Y.cols();
  const Eigen::Index n_b = D.cols();
  const Eigen::Index n = n_a + n_b;

  FeatureMatrix M(n, n);
  M.topLeftCorner(n_a, n_a).noalias() = Y.transpose() * Y;
  M.topLeftCorner(n_a, n_a).diagonal().array() += lambda1;
  M.topRightCorner(n_a, n_b).noalias() = -(Y.transpose() * D);
  M.bottomLeftCorner(n_b, n_a) = M.topRightCorner(n_a, n_b).transpose();
  M.bottomRightCorner(n_b, n_b).noalias() = D.transpose() * D;
  M.bottomRightCorner(n_b, n_b).diagonal().array() += lambda2;

  Vector d = Vector::Zero(n);
  d.head(n_a).setOnes();

  Eigen::LLT<FeatureMatrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw SolverError("ridge hull: positive-definite factorization failed");
  }
  const Vector z0 = llt.solve(d);
  const double scale = d.dot(z0);
  if (std::abs(scale) < 1e-12) {
    throw SolverError("ridge hull: degenerate geometry, sum(a) cannot be 1");
  }

  RidgeHullResult result;
  const Vector z = z0 / scale;
  result.a = z.head(n_a);
  result.beta = z.tail(n_b);
  result.lambda3 = -1.0 / scale;
  return result;
}

ProjectionResult project_capped_simplex(const Vector& v, double tau) {
  const Eigen::Index n = v.size();
  if (n == 0) {
    throw DataError("projection: empty vector");
  }
  if (!v.allFinite()) {
    throw DataError("projection: non-finite input");
  }
  if (!(tau > 0.0)) {
    throw DataError("projection: tau must be positive");
  }
  if (static_cast<double>(n) * tau < 1.0) {
    throw DataError("projection: infeasible, n*tau < 1");
  }

  const auto mass = [&](double mu) {
    return (v.array() - mu).cwiseMin(tau).cwiseMax(0.0).sum();
  };

  double lo = v.minCoeff() - tau;  // mass(lo) = n*tau >= 1
  double hi = v.maxCoeff();        // mass(hi) = 0 <= 1
  double mu = lo;
  int iterations = 0;
  for (; iterations < 200; ++iterations) {
    mu = 0.5 * (lo + hi);
    const double s = mass(mu);
    if (std::abs(s - 1.0) <= 1e-12) {
      break;
    }
    if (s > 1.0) {
      lo = mu;
    } else {
      hi = mu;
    }
  }

  ProjectionResult result;
  result.x = (v.array() - mu).cwiseMin(tau).cwiseMax(0.0);
  result.mu = mu;
  result.iterations = iterations;
  return result;
}

QpResult solve_two_block_qp(const FeatureMatrix& H, Eigen::Index n_a,
                            double tau, double tol, int max_iters) {
  const Eigen::Index n = H.rows();
  if (H.cols() != n || n == 0) {
    throw DataError("qp: H must be square and nonempty");
  }
  if (!H.allFinite()) {
    throw DataError("qp: non-finite H");
  }
  if (n_a < 1 || n_a >= n) {
    throw DataError("qp: block split must leave both blocks nonempty");
  }
  const Eigen::Index n_b = n - n_a;
  if (!(tau > 0.0) || static_cast<double>(n_a) * tau < 1.0 ||
      static_cast<double>(n_b) * tau < 1.0) {
    throw DataError("qp: infeasible capped simplex");
  }
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
    throw SolverError("qp: H asymmetric beyond tolerance");
  }
  if (!(tol > 0.0) || max_iters < 1) {
    throw DataError("qp: invalid tolerance or iteration cap");
  }

  const FeatureMatrix S = 0.5 * (H + H.transpose());

  // Gershgorin bound on the largest eigenvalue of a principal block; the
  // gradient of z'Sz restricted to the block is 2 S_block-Lipschitz.
  const auto block_step = [&](Eigen::Index begin, Eigen::Index size) {
    double max_row = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) {
      max_row = std::max(
          max_row, S.row(begin + i).segment(begin, size).cwiseAbs().sum());
    }
    return max_row > 0.0 ? 1.0 / (2.0 * max_row) : 0.0;
  };
  const double step_a = block_step(0, n_a);
  const double step_b = block_step(n_a, n_b);

  Vector z(n);
  z.head(n_a).setConstant(1.0 / static_cast<double>(n_a));
  z.tail(n_b).setConstant(1.0 / static_cast<double>(n_b));

  QpResult result;
  const auto objective = [&]() { return z.dot(S * z); };
  double obj = objective();
  result.objective_trace.push_back(obj);
  const double slack = 1e-12 * std::max(1.0, std::abs(obj));
  result.converged = false;

  for (int iter = 0; iter < max_iters; ++iter) {
    if (step_a > 0.0) {
      const Vector grad_a = 2.0 * (S.topRows(n_a) * z);
      z.head(n_a) =
          project_capped_simplex(z.head(n_a) - step_a * grad_a, tau).x;
    }
    if (step_b > 0.0) {
      const Vector grad_b = 2.0 * (S.bottomRows(n_b) * z);
      z.tail(n_b) =
          project_capped_simplex(z.tail(n_b) - step_b * grad_b, tau).x;
    }
    const double next = objective();
    result.objective_trace.push_back(next);
    result.iterations = iter + 1;
    if (next > obj + slack) {
      throw SolverError("qp: objective increased, matrix is not PSD");
    }
    if (obj - next < tol) {
      result.converged = true;
      obj = next;
      break;
    }
    obj = next;
  }

  result.a = z.head(n_a);
  result.beta = z.tail(n_b);
  result.objective = obj;
  return result;
}

}  // namespace iscrc
