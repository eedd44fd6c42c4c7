// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "friedrichs/resonances.hpp"
#include "friedrichs/stieltjes.hpp"
#include "test_models.hpp"

using namespace friedrichs;

TEST_CASE("synthetic winding numbers") {
  Complex zeta{0.3, -0.4};
  auto dbl = [zeta](Complex z) { return (z - zeta) * (z - zeta); };
  detail::Rect box{-0.5, 1.0, -1.0, -0.1};
  CHECK(detail::windingNumberOf(dbl, box, 16) == 2);

  auto pair = [zeta](Complex z) { return (z - zeta) * (z - zeta - Complex{0.2, 0.1}); };
  CHECK(detail::windingNumberOf(pair, box, 16) == 2);

  detail::Rect empty{1.5, 2.0, -1.0, -0.5};
  CHECK(detail::windingNumberOf(dbl, empty, 16) == 0);

  // a pole flyby outside the box must not disturb the count
  auto with_pole = [zeta](Complex z) {
    return (z - zeta) / ((z - Complex{-0.5001, -0.5}) * (z - Complex{-0.5001, -0.5}));
  };
  CHECK(detail::windingNumberOf(with_pole, box, 16) == 1);
}

TEST_CASE("trivial coupling has no zeros in the lower half plane") {
  ModelSpec m = scalarModel(0.0);
  SearchRegion reg;
  reg.re_min = -2.0; reg.re_max = 4.0; reg.im_min = -3.0; reg.im_max = -1e-8;
  CHECK(windingNumber(m, reg) == 0);
  CHECK(findResonances(m, reg).empty());
}

TEST_CASE("scalar example at eps = 0.5 has one resonance in the standard window") {
  ModelSpec m = scalarModel(0.5);
  SearchRegion reg;
  reg.re_min = 0.2; reg.re_max = 2.0; reg.im_min = -1.0; reg.im_max = -1e-6;
  auto rs = findResonances(m, reg);
  REQUIRE(rs.size() == 1);
  const Resonance& r = rs[0];
  CHECK(r.zeta.imag() < 0.0);
  CHECK(r.geometric_multiplicity == 1);
  CHECK(r.winding_multiplicity == 1);
  CHECK(windingNumber(m, reg) == 1);

  // the root solves z - 1 - eps^2 PhiHat_+(z) = 0 on the continued sheet
  ModelSpec base = scalarModel(1.0);
  Complex resid = r.zeta - 1.0 - 0.25 * phi(base, r.zeta, SheetTag::PlusContinued)(0, 0);
  CHECK(std::abs(resid) <= 1e-12);

  // kernel really is a kernel
  Matrix L = livsicMatrix(m, r.zeta, SheetTag::PlusContinued);
  CHECK((L * r.kernel_basis).norm() <= 1e-8);
  Eigen::JacobiSVD<Matrix> svd(L);
  CHECK(svd.singularValues().minCoeff() <= 1e-8);
}

TEST_CASE("full-region search and winding additivity") {
  ModelSpec m = scalarModel(0.5);
  SearchRegion full = fullSearchRegion(m);
  auto rs = findResonances(m, full);
  CHECK(rs.size() == 3);  // the eigenvalue resonance plus two near the -i pole
  for (const auto& r : rs) CHECK(r.zeta.imag() < 0.0);

  // partition invariance of the carved zero count
  int whole = windingNumberCarved(m, full);
  double rmid = 0.5 * (full.re_min + full.re_max);
  double imid = 0.5 * (full.im_min + full.im_max);
  SearchRegion q = full;
  int sum = 0;
  q.re_max = rmid; q.im_max = imid; sum += windingNumberCarved(m, q);
  q = full; q.re_min = rmid; q.im_max = imid; sum += windingNumberCarved(m, q);
  q = full; q.re_max = rmid; q.im_min = imid; sum += windingNumberCarved(m, q);
  q = full; q.re_min = rmid; q.im_min = imid; sum += windingNumberCarved(m, q);
  CHECK(whole == sum);
  CHECK(whole == 3);
}

TEST_CASE("residue of the partial resolvent has kernel rank and image") {
  ModelSpec m = twoChannelModel(0.5);
  auto rs = findResonances(m, fullSearchRegion(m));
  REQUIRE(rs.size() == 6);
  for (const auto& r : rs) {
    Eigen::JacobiSVD<Matrix> svd(r.residue_Linv, Eigen::ComputeThinU);
    double smax = svd.singularValues().maxCoeff();
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-8 * smax) ++rank;
    CHECK(rank == r.geometric_multiplicity);

    // ima(residue L_-(zeta)) = ker L_+(zeta) up to angle 1e-8
    Matrix image = r.residue_Linv * livsicMatrix(m, r.zeta, SheetTag::FirstSheet);
    Eigen::JacobiSVD<Matrix> isvd(image, Eigen::ComputeThinU);
    Matrix U = isvd.matrixU().leftCols(rank);
    Matrix defect = r.kernel_basis - U * (U.adjoint() * r.kernel_basis);
    Eigen::JacobiSVD<Matrix> dsvd(defect);
    CHECK(std::asin(std::min(1.0, dsvd.singularValues().maxCoeff())) <= 1e-8);
  }
}

TEST_CASE("perturbation law of the shallow resonance") {
  ModelSpec base = scalarModel(1.0);
  Complex phat = phi(base, Complex{1.0, 0.0}, SheetTag::PlusContinued)(0, 0);
  SearchRegion reg;
  reg.re_min = 0.5; reg.re_max = 1.5; reg.im_min = -0.2; reg.im_max = -1e-8;

  double r2 = 0.0, r3 = 0.0;
  for (double eps : {1e-2, 1e-3}) {
    auto rs = findResonances(base.withEpsilon(eps), reg);
    REQUIRE(rs.size() == 1);
    double r = std::abs(rs[0].zeta - 1.0 - eps * eps * phat);
    (eps == 1e-2 ? r2 : r3) = r;
  }
  // remainder scales like eps^4: the ratio sits within a factor 2 of 1e4
  double ratio = r2 / r3;
  CHECK(ratio > 0.5e4);
  CHECK(ratio < 2.0e4);
}

TEST_CASE("trajectory runs into the embedded eigenvalue") {
  ModelSpec base = scalarModel(1.0);
  SearchRegion seed;
  seed.re_min = 0.2; seed.re_max = 2.0; seed.im_min = -1.0; seed.im_max = -1e-6;
  auto result = traceTrajectory(base, {0.5, 0.2, 0.1, 0.05, 0.01}, seed);
  REQUIRE(result.points.size() == 5);
  CHECK(result.events.empty());

  double prev = 1e300;
  for (const auto& pt : result.points) {
    REQUIRE(pt.resonances.size() == 1);
    double dist = std::abs(pt.resonances[0].zeta - 1.0);
    CHECK(dist < prev);
    prev = dist;
  }
  // Fermi golden rule: |Im zeta| / eps^2 -> pi G(1) = pi/4 within 5% at 0.05
  const auto& p05 = result.points[3];
  CHECK(std::abs(p05.resonances[0].zeta.imag()) / (0.05 * 0.05) ==
        doctest::Approx(kPi / 4).epsilon(0.05));
  // terminal point lies within 1e-3 of a = 1
  CHECK(std::abs(result.points.back().resonances[0].zeta - 1.0) <= 1e-3);
  CHECK(result.terminal_near_eigenvalues);
}

TEST_CASE("trajectory input validation") {
  ModelSpec m = scalarModel(1.0);
  SearchRegion seed;
  seed.re_min = 0.2; seed.re_max = 2.0; seed.im_min = -1.0; seed.im_max = -1e-6;
  CHECK_THROWS_AS(traceTrajectory(m, {0.1, 0.5}, seed), NumericalError);
  CHECK_THROWS_AS(traceTrajectory(m, {0.5, 0.0}, seed), NumericalError);
  CHECK_THROWS_AS(traceTrajectory(m, {}, seed), NumericalError);
}

TEST_CASE("max depth reports unresolved rectangles") {
  ModelSpec m = scalarModel(0.5);
  SearchRegion full = fullSearchRegion(m);
  full.max_depth = 1;  // cannot separate three distinct zeros
  CHECK_THROWS_AS(findResonances(m, full), MaxDepthExceeded);
}

TEST_CASE("region guards") {
  ModelSpec m = scalarModel(0.5);
  SearchRegion bad;
  bad.re_min = 1.0; bad.re_max = 0.0;
  CHECK_THROWS_AS(findResonances(m, bad), NumericalError);

  // a region with im_max above the -1e-8 ceiling is clamped, not rejected
  SearchRegion high;
  high.re_min = 0.2; high.re_max = 2.0; high.im_min = -1.0; high.im_max = -1e-12;
  std::vector<std::string> warnings;
  auto rs = findResonances(m, high, &warnings);
  CHECK(rs.size() == 1);
  CHECK(!warnings.empty());
}
