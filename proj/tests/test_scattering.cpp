// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "friedrichs/scattering.hpp"
#include "test_models.hpp"

using namespace friedrichs;

TEST_CASE("trivial coupling scatters trivially") {
  ModelSpec m = scalarModel(0.0);
  Matrix I = Matrix::Identity(1, 1);
  CHECK((scatteringE(m, 1.3) - I).norm() <= 1e-14);
  CHECK((scatteringK(m, 2.0, AxisSide::OnAxis) - I).norm() <= 1e-14);
  CHECK((scatteringK(m, Complex{1.0, -0.5}, AxisSide::ContinuedMinus) - I).norm() <= 1e-14);
  CHECK((scatteringK(m, -1.0, AxisSide::BoundaryMinus) - I).norm() <= 1e-14);
  CHECK_THROWS_AS(residueSK(m, Complex{1.0, -0.3}, ResidueSource::Resonance), NoPole);
}

TEST_CASE("S_E is unitary-similar: |det S_E| = 1") {
  for (const ModelSpec& m : {scalarModel(0.5), twoChannelModel(0.5)}) {
    for (int i = 0; i < 20; ++i) {
      double lam = 0.2 * std::pow(100.0, i / 19.0);
      Matrix S = scatteringE(m, lam);
      CHECK(std::abs(std::abs(S.partialPivLu().determinant()) - 1.0) <= 1e-10);
      // S_E^-1 = L_-^-1 L_+ stays finite on the half line
      Matrix Sinv = livsicInverse(m, lam, SheetTag::FirstSheet) *
                    livsicMatrix(m, lam, SheetTag::PlusContinued);
      CHECK((S * Sinv - Matrix::Identity(m.n, m.n)).norm() <= 1e-9);
    }
  }
}

TEST_CASE("S_K is unitary on the half line") {
  ModelSpec m = scalarModel(0.5);
  CHECK(std::abs(std::abs(scatteringK(m, 1.0, AxisSide::OnAxis)(0, 0)) - 1.0) <= 1e-10);
  for (const ModelSpec& spec : {scalarModel(0.5), twoChannelModel(0.5)}) {
    Matrix I = Matrix::Identity(spec.n, spec.n);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double lam = 0.05 * std::pow(1000.0, i / 199.0);
      Matrix S = scatteringK(spec, lam, AxisSide::OnAxis);
      worst = std::max(worst, (S * S.adjoint() - I).norm());
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("boundary values on the negative axis") {
  ModelSpec m = scalarModel(0.5);
  Matrix Sp = scatteringK(m, -1.0, AxisSide::BoundaryPlus);
  Matrix Sm = scatteringK(m, -1.0, AxisSide::BoundaryMinus);
  CHECK(Sp.allFinite());
  CHECK(Sm.allFinite());
  // S_K(-1 + i0)^-1 = S_K(-1 - i0)^*
  Matrix I = Matrix::Identity(1, 1);
  CHECK((Sp.partialPivLu().solve(I) - Sm.adjoint()).norm() <= 1e-10);
}

TEST_CASE("Eq(32) symmetry off the axis") {
  ModelSpec m = twoChannelModel(0.5);
  Matrix I = Matrix::Identity(2, 2);
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 20) {
    Complex z{0.2 + 5.0 * u(gen), -(0.05 + u(gen))};
    if (m.poleDistance(z) < 0.3) continue;
    ++tested;
    Matrix Sm = scatteringK(m, z, AxisSide::ContinuedMinus);
    Matrix Linv = livsicInverse(m, std::conj(z), SheetTag::PlusContinued);
    Matrix Sp = I - 2.0 * kPi * kI * m.M.eval(std::conj(z)) * Linv *
                        m.Mstar.eval(std::conj(z));
    worst = std::max(worst, (Sm.partialPivLu().solve(I) - Sp.adjoint()).norm());
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("intertwining with the form factor") {
  ModelSpec m = twoChannelModel(0.5);
  std::mt19937 gen(17);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    double lam = 0.3 * std::pow(60.0, i / 19.0);
    Vector f(2);
    f << Complex{nd(gen), nd(gen)}, Complex{nd(gen), nd(gen)};
    Matrix M = m.M.eval(lam);
    Vector lhs = scatteringK(m, lam, AxisSide::OnAxis) * (M * f);
    Vector rhs = M * (scatteringE(m, lam) * f);
    worst = std::max(worst, (lhs - rhs).norm() / f.norm());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("residues: contour quadrature equals the chain rule") {
  ModelSpec m = scalarModel(0.5);
  auto rs = findResonances(m, fullSearchRegion(m));
  REQUIRE(rs.size() == 3);
  auto residues = lowerHalfResidues(m, rs);
  REQUIRE(residues.size() == 3);  // the -i form-factor pole is silent here
  for (size_t i = 0; i < rs.size(); ++i) {
    Matrix chain = -2.0 * kPi * kI * m.M.eval(rs[i].zeta) * rs[i].residue_Linv *
                   m.Mstar.eval(rs[i].zeta);
    CHECK((residues[i].S_minus1 - chain).norm() / chain.norm() <= 1e-8);
    // Remark 3: a nonzero L-residue forces a nonzero S-residue
    CHECK(rs[i].residue_Linv.norm() > 1e-10);
    CHECK(residues[i].S_minus1.norm() > 1e-10);
  }
}

TEST_CASE("all lower-half poles of S_K are simple") {
  for (const ModelSpec& m : {scalarModel(0.5), twoChannelModel(0.5)}) {
    auto rs = findResonances(m, fullSearchRegion(m));
    // HigherOrderPole must never fire on a valid model
    CHECK_NOTHROW(lowerHalfResidues(m, rs));
  }
}

TEST_CASE("Laurent split: holomorphic part has no residue, main part decays") {
  ModelSpec m = scalarModel(0.5);
  auto rs = findResonances(m, fullSearchRegion(m));
  auto residues = lowerHalfResidues(m, rs);

  for (const auto& r : rs) {
    const int nodes = 64;
    const double radius = 0.05;
    Matrix acc = Matrix::Zero(1, 1);
    for (int k = 0; k < nodes; ++k) {
      double th = 2.0 * kPi * (k + 0.5) / nodes;
      Complex e{std::cos(th), std::sin(th)};
      auto [main, holo] = laurentSplit(m, residues, r.zeta + radius * e);
      acc += holo * e;
    }
    CHECK((acc * (radius / nodes)).norm() <= 1e-8);
  }

  // main part decays like 1/|z| deep in C_-
  auto [main1, holo1] = laurentSplit(m, residues, Complex{0.0, -50.0});
  auto [main2, holo2] = laurentSplit(m, residues, Complex{0.0, -100.0});
  CHECK(main1.norm() * 50.0 == doctest::Approx(main2.norm() * 100.0).epsilon(0.05));

  // S_K blows up like |z - zeta|^-1 at a resonance: slope -1 +- 0.05
  const Resonance& r0 = rs.back();
  double d1 = 1e-3, d2 = 1e-2;
  double n1 = scatteringK(m, r0.zeta - Complex{0, d1}, AxisSide::ContinuedMinus).norm();
  double n2 = scatteringK(m, r0.zeta - Complex{0, d2}, AxisSide::ContinuedMinus).norm();
  double slope = std::log(n2 / n1) / std::log(d2 / d1);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("Proposition 1: kernel equals the image of Res S_E") {
  ModelSpec m1 = scalarModel(0.5);
  auto rs1 = findResonances(m1, fullSearchRegion(m1));
  for (const auto& r : rs1) CHECK(prop1PrincipalAngle(m1, r) <= 1e-8);

  ModelSpec m2 = twoChannelModel(0.5);
  auto rs2 = findResonances(m2, fullSearchRegion(m2));
  for (const auto& r : rs2)
    if (r.winding_multiplicity == r.geometric_multiplicity)
      CHECK(prop1PrincipalAngle(m2, r) <= 1e-8);
}

TEST_CASE("S_K bounded at infinity in the lower half plane") {
  ModelSpec m = twoChannelModel(0.5);
  Matrix I = Matrix::Identity(2, 2);
  double worst1 = 0.0, worst2 = 0.0;
  for (int k = 0; k < 16; ++k) {
    double th = -kPi * (k + 0.5) / 16;
    worst1 = std::max(worst1,
        (scatteringK(m, std::polar(1e3, th), AxisSide::ContinuedMinus) - I).norm());
    worst2 = std::max(worst2,
        (scatteringK(m, std::polar(2e3, th), AxisSide::ContinuedMinus) - I).norm());
  }
  CHECK(worst1 <= 1e-2);
  CHECK(worst2 <= worst1);
}

TEST_CASE("negative-axis exclusion scan") {
  CHECK(negativeAxisSigmaMin(scalarModel(0.5), -50.0, -0.01, 400) > 1e-6);
  CHECK(negativeAxisSigmaMin(scalarModel(0.05), -50.0, -0.01, 400) > 1e-6);
  CHECK(negativeAxisSigmaMin(twoChannelModel(0.5), -50.0, -0.01, 400) > 1e-6);
}

TEST_CASE("scatteringK validates its branch preconditions") {
  ModelSpec m = scalarModel(0.5);
  CHECK_THROWS_AS(scatteringK(m, Complex{1.0, 0.5}, AxisSide::ContinuedMinus),
                  NumericalError);
  CHECK_THROWS_AS(scatteringK(m, -1.0, AxisSide::OnAxis), NumericalError);
  CHECK_THROWS_AS(scatteringK(m, 1.0, AxisSide::BoundaryPlus), NumericalError);
}
