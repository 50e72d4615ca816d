#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iscrc/compression.hpp"
#include "iscrc/errors.hpp"
#include "iscrc/kernel_hull.hpp"
#include "iscrc/solvers.hpp"
#include "iscrc/synthetic.hpp"
#include "oracles.hpp"

using iscrc::CompressedGalleryCollection;
using iscrc::FeatureMatrix;
using iscrc::KernelKind;
using iscrc::KernelSpec;
using iscrc::Vector;

namespace {

KernelSpec linear_kernel() {
  KernelSpec spec;
  spec.kind = KernelKind::linear;
  return spec;
}

}  // namespace

TEST_CASE("kernel values match hand-computed points") {
  Vector x(2), y(2);
  x << 1.0, 2.0;
  y << 3.0, 4.0;
  CHECK(iscrc::kernel_value(linear_kernel(), x, y) == doctest::Approx(11.0));

  KernelSpec gaussian;
  gaussian.kind = KernelKind::gaussian;
  gaussian.delta = 5.0;
  Vector u(1), v(1);
  u << 0.0;
  v << std::sqrt(50.0);  // squared distance 50 and 2 delta^2 = 50
  CHECK(iscrc::kernel_value(gaussian, u, v) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(iscrc::kernel_value(gaussian, u, u) == doctest::Approx(1.0));
}

TEST_CASE("kernel matrices are symmetric with unit gaussian diagonal") {
  oracle::Rng rng(67);
  const FeatureMatrix A = rng.gaussian(6, 5);
  KernelSpec gaussian;
  gaussian.kind = KernelKind::gaussian;
  gaussian.delta = 2.0;
  const FeatureMatrix K = iscrc::kernel_matrix(gaussian, A, A);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    CHECK(K(i, i) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const FeatureMatrix L = iscrc::kernel_matrix(linear_kernel(), A, A);
  CHECK(L.isApprox(A.transpose() * A, 1e-12));
}

TEST_CASE("gram cache returns one matrix per gallery and kernel") {
  oracle::Rng rng(71);
  const FeatureMatrix d0 = rng.gaussian(4, 3);
  const FeatureMatrix d1 = rng.gaussian(4, 2);
  const auto gallery =
      CompressedGalleryCollection::from_classes({{"a", d0}, {"b", d1}});
  iscrc::GramCache cache;
  KernelSpec gaussian;
  const auto first = cache.gallery_gram(gaussian, gallery);
  const auto again = cache.gallery_gram(gaussian, gallery);
  CHECK(first.get() == again.get());
  CHECK(cache.size() == 1);

  KernelSpec wider = gaussian;
  wider.delta = 9.0;
  const auto other = cache.gallery_gram(wider, gallery);
  CHECK(other.get() != first.get());
  CHECK(cache.size() == 2);
  CHECK_FALSE(other->isApprox(*first));

  cache.clear();
  CHECK(cache.size() == 0);
}

TEST_CASE("kernel hull with one atom per side scores the kernel distance") {
  FeatureMatrix y(3, 1);
  y << 1.0, 0.0, 0.0;
  FeatureMatrix d(3, 1);
  d << 0.0, 1.0, 0.0;
  const auto gallery =
      CompressedGalleryCollection::from_classes({{"only", d}});
  iscrc::SolverConfig config;
  config.kernel = linear_kernel();
  const auto solution = iscrc::solve_kernel_hull(y, gallery, config);
  CHECK(solution.a(0) == doctest::Approx(1.0));
  CHECK(solution.beta(0) == doctest::Approx(1.0));
  // r = k(y,y) - 2 k(y,d) + k(d,d) = 2 (1 - y'd) for unit vectors.
  CHECK(solution.residuals[0].second == doctest::Approx(2.0));
}

TEST_CASE("linear-kernel hull equals the explicit input-space program") {
  oracle::Rng rng(73);
  iscrc::SolverConfig config;
  config.kernel = linear_kernel();
  for (int trial = 0; trial < 20; ++trial) {
    const int d = rng.integer(3, 10);
    const FeatureMatrix d0 = rng.gaussian(d, 3);
    const FeatureMatrix d1 = rng.gaussian(d, 4);
    const auto gallery =
        CompressedGalleryCollection::from_classes({{"a", d0}, {"b", d1}});
    const FeatureMatrix Y = rng.gaussian(d, rng.integer(2, 5));
    const auto kernel = iscrc::solve_kernel_hull(Y, gallery, config);

    const Eigen::Index na = Y.cols();
    const Eigen::Index nb = gallery.total_atoms();
    FeatureMatrix H(na + nb, na + nb);
    H.topLeftCorner(na, na) = Y.transpose() * Y;
    H.topRightCorner(na, nb) = -Y.transpose() * gallery.atoms();
    H.bottomLeftCorner(nb, na) = H.topRightCorner(na, nb).transpose();
    H.bottomRightCorner(nb, nb) =
        gallery.atoms().transpose() * gallery.atoms();
    const auto direct = iscrc::solve_two_block_qp(H, na, config.tau,
                                                  config.qp_tol,
                                                  config.qp_max_iters);
    CHECK((kernel.a - direct.a).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK((kernel.beta - direct.beta).lpNorm<Eigen::Infinity>() < 1e-6);

    const Vector hull = Y * kernel.a;
    for (std::size_t k = 0; k < gallery.class_count(); ++k) {
      const Vector part =
          gallery.class_block(k) *
          kernel.beta.segment(gallery.class_begin(k), gallery.class_size(k));
      CHECK(kernel.residuals[k].second ==
            doctest::Approx((hull - part).squaredNorm()).epsilon(1e-6));
    }
  }
}

TEST_CASE("kernel hull residuals are never negative") {
  oracle::Rng rng(79);
  iscrc::SolverConfig config;
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMatrix d0 = rng.gaussian(5, 4);
    const FeatureMatrix d1 = rng.gaussian(5, 4);
    const auto gallery =
        CompressedGalleryCollection::from_classes({{"a", d0}, {"b", d1}});
    const FeatureMatrix Y = rng.gaussian(5, 3);
    const auto solution = iscrc::solve_kernel_hull(Y, gallery, config);
    for (const auto& [label, value] : solution.residuals) {
      CHECK(value >= 0.0);
    }
  }
}

TEST_CASE("gaussian kernel separates concentric shells where linear fails") {
  iscrc::SyntheticSpec spec;
  spec.classes = 2;
  spec.dim = 10;
  spec.noise_sigma = 0.1;
  spec.frames_per_set = 20;
  spec.sets_per_class = 4;
  spec.seed = 7;
  spec.geometry = iscrc::SyntheticGeometry::shells;
  const auto data = iscrc::generate_synthetic(spec);
  const auto gallery = iscrc::verbatim_gallery(data.galleries, false);

  iscrc::SolverConfig gaussian_config;
  iscrc::SolverConfig linear_config;
  linear_config.kernel = linear_kernel();

  int gaussian_correct = 0;
  int linear_correct = 0;
  iscrc::GramCache gaussian_cache;
  iscrc::GramCache linear_cache;
  for (const auto& query : data.queries) {
    if (iscrc::classify_kernel_hull(query.features, gallery, gaussian_config,
                                    &gaussian_cache)
            .predicted == query.label) {
      ++gaussian_correct;
    }
    if (iscrc::classify_kernel_hull(query.features, gallery, linear_config,
                                    &linear_cache)
            .predicted == query.label) {
      ++linear_correct;
    }
  }
  CHECK(gaussian_correct >= linear_correct);
  CHECK(gaussian_correct == static_cast<int>(data.queries.size()));
}

TEST_CASE("kernel spec validation rejects nonpositive widths") {
  KernelSpec spec;
  spec.delta = 0.0;
  CHECK_THROWS_AS(spec.validate(), iscrc::DataError);
}
