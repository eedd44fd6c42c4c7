// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "friedrichs/model.hpp"
#include "test_models.hpp"

using namespace friedrichs;

TEST_CASE("eval_M on the scalar example") {
  ModelSpec m = scalarModel(1.0);
  CHECK(std::abs(m.M.eval(0.0)(0, 0) - Complex{-1.0, 0.0}) < 1e-15);
  CHECK(std::abs(m.M.eval(Complex{0, 1})(0, 0) - Complex{-0.25, 0.0}) < 1e-15);
}

TEST_CASE("eval_M matches a direct term-by-term sum") {
  // two terms at the same pole, orders 2 and 3
  Matrix c1(2, 2), c2(2, 2);
  c1 << 1.0, Complex{0, 2}, -0.5, 1.5;
  c2 << 0.3, 0.0, Complex{1, -1}, 2.0;
  Complex p{0.4, -1.3};
  RationalMatrixFunction M(2, 2, {{p, 2, c1}, {p, 3, c2}});
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    Complex z{u(gen), u(gen)};
    if (std::abs(z - p) < 0.1) continue;
    Matrix expect = c1 / ((z - p) * (z - p)) + c2 / ((z - p) * (z - p) * (z - p));
    CHECK((M.eval(z) - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("eval_M throws PoleHit within 1e-13 of a pole") {
  ModelSpec m = scalarModel(1.0);
  CHECK_THROWS_AS(m.M.eval(Complex{0.0, -1.0} + Complex{1e-14, 0.0}), PoleHit);
  CHECK_NOTHROW(m.M.eval(Complex{0.0, -1.0} + Complex{1e-9, 0.0}));
}

TEST_CASE("conj_adjoint of the scalar example") {
  ModelSpec m = scalarModel(1.0);
  // M*(z) = (z - i)^-2, so M*(0) = (-i)^-2 = -1
  CHECK(std::abs(m.Mstar.eval(0.0)(0, 0) - Complex{-1.0, 0.0}) < 1e-15);
  // poles of the result are the conjugates of the poles of M
  auto ps = m.Mstar.poles();
  REQUIRE(ps.size() == 1);
  CHECK(std::abs(ps[0] - Complex{0.0, 1.0}) < 1e-15);
}

TEST_CASE("conj_adjoint equals the adjoint of M at conj z") {
  ModelSpec m = twoChannelModel(0.7);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double worst = 0.0;
  int tested = 0;
  while (tested < 100) {
    Complex z{u(gen), u(gen)};
    if (m.poleDistance(z) < 0.2) continue;
    ++tested;
    worst = std::max(worst, (m.Mstar.eval(z) - m.M.eval(std::conj(z)).adjoint())
                                .cwiseAbs()
                                .maxCoeff());
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("eval_G on the scalar example") {
  ModelSpec m = scalarModel(1.0);
  // G(z) = (z^2 + 1)^-2, G(1) = 1/4
  CHECK(std::abs(m.G(1.0)(0, 0) - Complex{0.25, 0.0}) < 1e-14);

  for (double lam : {0.5, 1.0, 10.0}) {
    Matrix G2 = twoChannelModel(0.5).G(lam);
    CHECK((G2 - G2.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-13);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G2 + G2.adjoint().eval()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("G decays like |z|^-4 for the scalar example") {
  ModelSpec m = scalarModel(1.0);
  // log-log slope along the negative imaginary axis
  double r1 = 1e2, r2 = 1e4;
  double n1 = m.G(Complex{0, -r1}).norm();
  double n2 = m.G(Complex{0, -r2}).norm();
  double slope = std::log(n2 / n1) / std::log(r2 / r1);
  CHECK(slope == doctest::Approx(-4.0).epsilon(1e-3));
}

TEST_CASE("coefficient homogeneity in epsilon") {
  ModelSpec m1 = scalarModel(1.0);
  ModelSpec m2 = scalarModel(0.3);
  Complex z{1.7, 2.2};
  CHECK(std::abs(m2.M.eval(z)(0, 0) - 0.3 * m1.M.eval(z)(0, 0)) < 1e-15);
  CHECK(std::abs(m2.G(z)(0, 0) - 0.09 * m1.G(z)(0, 0)) < 1e-15);
}

TEST_CASE("validate_model accepts the shipped examples") {
  CHECK(validateModel(scalarModel(1.0)).allHardPassed());
  CHECK(validateModel(scalarModel(0.5)).allHardPassed());
  CHECK(validateModel(twoChannelModel(0.5)).allHardPassed());
}

TEST_CASE("validate_model rejects a lone simple pole") {
  Matrix c(1, 1);
  c(0, 0) = 1.0;
  RationalMatrixFunction M(1, 1, {{Complex{0.0, -1.0}, 1, c}});
  RealVector a(1);
  a << 1.0;
  ModelSpec m = ModelSpec::make(a, M, 1.0);
  ValidationReport rep = validateModel(m);
  CHECK(!rep.allHardPassed());
  bool found = false;
  for (const auto& item : rep.items)
    if (item.name.find("simple poles") != std::string::npos) found = !item.passed;
  CHECK(found);
}

TEST_CASE("validate_model rejects nonpositive eigenvalues of A") {
  Matrix c(1, 1);
  c(0, 0) = 1.0;
  RationalMatrixFunction M(1, 1, {{Complex{0.0, -1.0}, 2, c}});
  RealVector a(1);
  a << -1.0;
  ModelSpec m = ModelSpec::make(a, M, 1.0);
  CHECK(!validateModel(m).allHardPassed());
}

TEST_CASE("validate_model rejects a pole on the real axis") {
  Matrix c(1, 1);
  c(0, 0) = 1.0;
  RationalMatrixFunction M(1, 1, {{Complex{2.0, 0.0}, 2, c}});
  RealVector a(1);
  a << 1.0;
  CHECK(!validateModel(ModelSpec::make(a, M, 1.0)).allHardPassed());
}

TEST_CASE("ModelSpec construction guards") {
  Matrix c(1, 1);
  c(0, 0) = 1.0;
  RationalMatrixFunction M(1, 1, {{Complex{0.0, -1.0}, 2, c}});
  RealVector a2(2);
  a2 << 1.0, 2.0;
  CHECK_THROWS_AS(ModelSpec::make(a2, M, 1.0), ValidationFailure);
  RealVector a(1);
  a << 1.0;
  CHECK_THROWS_AS(ModelSpec::make(a, M, 1.5), ValidationFailure);
  CHECK_NOTHROW(ModelSpec::make(a, M, 0.0));  // trivial coupling is allowed
}

TEST_CASE("pair pole set is closed under conjugation") {
  ModelSpec m = scalarModel(1.0);
  auto ps = m.poleSet();
  REQUIRE(ps.size() == 2);
  CHECK(std::abs(ps[0] - std::conj(ps[1])) < 1e-15);
}

TEST_CASE("rational derivative") {
  ModelSpec m = twoChannelModel(0.5);
  RationalMatrixFunction d = m.M.derivative();
  Complex z{0.9, 0.8};
  double h = 1e-6;
  Matrix cd = (m.M.eval(z + h) - m.M.eval(z - h)) / (2.0 * h);
  CHECK((d.eval(z) - cd).norm() / cd.norm() < 1e-9);
}
