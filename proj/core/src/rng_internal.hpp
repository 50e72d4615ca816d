#pragma once

#include <Eigen/Core>
#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace iscrc::detail {

/// Deterministic sampler built on mt19937_64. The standard distribution
/// adaptors are implementation-defined, so uniform, normal, and shuffle are
/// spelled out here to keep generated datasets identical across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased integer in [0, bound).
  std::uint64_t integer(std::uint64_t bound) {
    const std::uint64_t min = (-bound) % bound;
    std::uint64_t x = engine_();
    while (x < min) {
      x = engine_();
    }
    return x % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[integer(i)]);
    }
  }

  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        m(i, j) = normal();
      }
    }
    return m;
  }

  /// Orthonormal columns spanning a random rank-dimensional subspace.
  Eigen::MatrixXd orthonormal_basis(Eigen::Index dim, Eigen::Index rank) {
    const Eigen::MatrixXd g = gaussian_matrix(dim, rank);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    return q.leftCols(rank);
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace iscrc::detail
