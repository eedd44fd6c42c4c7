// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "friedrichs/hardy.hpp"
#include "test_models.hpp"

using namespace friedrichs;

namespace {

Resonance mainResonance(const ModelSpec& m) {
  SearchRegion reg;
  reg.re_min = 0.2; reg.re_max = 2.0; reg.im_min = -1.0; reg.im_max = -1e-6;
  auto rs = findResonances(m, reg);
  REQUIRE(rs.size() == 1);
  return rs[0];
}

double positiveNormDiff(const GridFunction& a, const Matrix& bvals,
                        const GridFunction& ref) {
  double acc = 0.0;
  for (int i = 0; i < ref.size(); ++i) {
    if (ref.grid()[i] <= 0.0) continue;
    acc += ref.weights()[i] * (a.values().row(i) - bvals.row(i)).squaredNorm();
  }
  return std::sqrt(acc) / ref.norm(true);
}

}  // namespace

TEST_CASE("gamov vector of the scalar example") {
  ModelSpec m = scalarModel(0.5);
  Resonance r = mainResonance(m);
  GamovVector g = gamov(m, r, 0);
  // k0 = eps (zeta + i)^-2 e0
  Complex expect = 0.5 * std::pow(g.zeta + Complex{0, 1}, -2) * g.e0[0];
  CHECK(std::abs(g.k0[0] - expect) <= 1e-13);
  CHECK(g.k0.norm() > 0.0);
  CHECK(g.e0.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gamov(m, r, 1), NumericalError);  // only d columns exist
}

TEST_CASE("Dirac pairing against the half-line integral") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);

  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int sign = 0;
  for (int i = 0; i < 10; ++i) {
    Complex w{-3.0 + 6.0 * u(gen), -(0.5 + 2.0 * u(gen))};
    Vector k(1);
    k[0] = Complex{u(gen) - 0.5, u(gen) - 0.5};
    auto res = diracPairingCheck(m, g, w, k, 500.0);
    double err = std::min(std::abs(res.lhs - res.rhs), std::abs(res.lhs + res.rhs));
    CHECK(err / std::abs(res.lhs) <= 1e-8);
    if (sign == 0) sign = res.sign;
    CHECK(res.sign == sign);  // the global sign convention is draw-independent
  }

  // s = 0 pairs to zero on both sides
  Vector zero = Vector::Zero(1);
  auto res0 = diracPairingCheck(m, g, Complex{0, -2}, zero, 500.0);
  CHECK(std::abs(res0.lhs) == 0.0);
  CHECK(std::abs(res0.rhs) <= 1e-15);
}

TEST_CASE("Dirac pairing flags fat tails") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);
  Vector k(1);
  k[0] = 1.0;
  CHECK_THROWS_AS(diracPairingCheck(m, g, Complex{0, -2}, k, 5.0), TailTooFat);
}

TEST_CASE("project_plus reproduces H2+ and annihilates H2-") {
  GridParams gp;  // uniform, L = 500, 20000 points
  Vector k(2);
  k << Complex{1.2, 0.3}, Complex{-0.4, 0.9};

  Complex w_minus{0.7, -0.9};
  auto fp = [&](double lam) { return Vector(k / (lam - w_minus)); };
  GridFunction f = GridFunction::sample(gp, fp, 1.0);
  Complex z{1.0, 1.0};
  CHECK((projectPlus(f, z) - Vector(k / (z - w_minus))).norm() <= 1e-7);

  Complex w_plus{0.7, 0.9};
  auto fm = [&](double lam) { return Vector(k / (lam - w_plus)); };
  GridFunction f2 = GridFunction::sample(gp, fm, 1.0);
  CHECK(projectPlus(f2, z).norm() <= 1e-7);

  // linearity at fixed z
  GridFunction sum(f.gridPtr(), f.values() + f2.values(), 1.0);
  CHECK((projectPlus(sum, z) - projectPlus(f, z) - projectPlus(f2, z)).norm() <= 1e-9);
}

TEST_CASE("project_plus preconditions") {
  GridParams gp;
  gp.points = 2000;
  Vector k(1);
  k[0] = 1.0;
  auto fn = [&](double lam) { return Vector(k / (lam - Complex{0, -1})); };
  GridFunction f = GridFunction::sample(gp, fn, 1.0);
  CHECK_THROWS_AS(projectPlus(f, Complex{1.0, -0.5}), NumericalError);
  CHECK_THROWS_AS(projectPlus(f, Complex{1.0, 0.1}), NumericalError);  // 2h = 1
}

TEST_CASE("Q_+ is idempotent on the grid family") {
  GridParams gp;
  Vector k(1);
  k[0] = 1.0;
  Complex w{-0.5, -2.0};
  auto fn = [&](double lam) { return Vector(k / (lam - w)); };
  GridFunction f = GridFunction::sample(gp, fn, 1.0);
  Matrix q = projectPlusBoundary(f);
  GridFunction qf(f.gridPtr(), q, 1.0, GridFunction::makeWeights(gp));
  Complex z{0.3, 1.7};
  CHECK((projectPlus(qf, z) - projectPlus(f, z)).norm() <= 1e-7);
}

TEST_CASE("theorem 3 vanishes at trivial coupling") {
  ModelSpec m = scalarModel(0.0);
  GridParams gp;
  gp.lambda_max = 200.0;
  gp.points = 4000;
  gp.spacing = GridParams::Spacing::LogGraded;
  Vector k(1);
  k[0] = 1.0;
  auto res = theorem3Check(m, {}, Complex{0, 1}, k, Complex{1, 1}, gp);
  CHECK(res.lhs.norm() <= 1e-12);
  CHECK(res.rhs.norm() == 0.0);
}

TEST_CASE("theorem 3 on the scalar example") {
  ModelSpec m = scalarModel(0.5);
  auto rs = findResonances(m, fullSearchRegion(m));
  auto residues = lowerHalfResidues(m, rs);
  GridParams gp;
  gp.lambda_max = 200.0;
  gp.points = 4000;
  gp.spacing = GridParams::Spacing::LogGraded;
  gp.tail_exponent = 6.0;
  Vector k(1);
  k[0] = 1.0;
  // identical relative error at unrelated z: the identity holds in all of C_+
  for (Complex z : {Complex{1, 1}, Complex{-2, 0.5}, Complex{0, 3}}) {
    auto res = theorem3Check(m, residues, Complex{0, 1}, k, z, gp);
    CHECK((res.lhs - res.rhs).norm() / res.rhs.norm() <= 1e-5);
  }
}

TEST_CASE("semigroup: identity at t = 0") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);
  GridParams gp;
  GridFunction f = gamovGridFunction(g, gp);
  GridFunction Tf = semigroupApply(f, 0.0);
  CHECK(positiveNormDiff(Tf, f.values(), f) <= 1e-8);
}

TEST_CASE("semigroup: Gamov eigenrelation and decay law") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);
  GridParams gp;
  GridFunction f = gamovGridFunction(g, gp);
  for (double t : {0.5, 1.0, 2.0}) {
    GridFunction Tf = semigroupApply(f, t);
    Complex decay = std::exp(-kI * g.zeta * t);
    CHECK(positiveNormDiff(Tf, Matrix(decay * f.values()), f) <= 1e-4);
    CHECK(std::abs(decay) == doctest::Approx(std::exp(g.zeta.imag() * t)));
  }
}

TEST_CASE("semigroup law and contraction") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);
  GridParams gp;
  GridFunction f = gamovGridFunction(g, gp);

  GridFunction t2 = semigroupApply(f, 0.5);
  GridFunction lhs = semigroupApply(t2, 1.0);  // reuses the computed extension
  GridFunction rhs = semigroupApply(f, 1.5);
  CHECK(positiveNormDiff(lhs, rhs.values(), f) <= 2e-4);

  double fnorm = f.norm(true);
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    GridFunction Tf = semigroupApply(f, t);
    CHECK(Tf.norm(true) <= (1.0 + 1e-6) * fnorm);
  }
}

TEST_CASE("semigroup rejects a wrong extension") {
  ModelSpec m = scalarModel(0.5);
  GamovVector g = gamov(m, mainResonance(m), 0);
  GridParams gp;
  gp.points = 2000;
  auto grid = GridFunction::makeGrid(gp);
  Matrix vals(grid->size(), 1);
  for (size_t i = 0; i < grid->size(); ++i) {
    double lam = (*grid)[i];
    // correct data on the half line, conjugate-pole garbage below
    vals(i, 0) = (lam > 0) ? g.k0[0] / (g.zeta - lam)
                           : g.k0[0] / (std::conj(g.zeta) - lam);
  }
  GridFunction f(grid, vals, 1.0, GridFunction::makeWeights(gp));
  CHECK_THROWS_AS(semigroupApply(f, 1.0), ExtensionIllposed);
}

TEST_CASE("grid construction invariants") {
  GridParams gp;
  gp.points = 1000;
  auto grid = GridFunction::makeGrid(gp);
  CHECK(grid->size() == 1000);
  for (size_t i = 0; i < grid->size(); ++i) {
    CHECK((*grid)[i] != 0.0);
    CHECK((*grid)[i] == -(*grid)[grid->size() - 1 - i]);
  }
  GridParams lg = gp;
  lg.spacing = GridParams::Spacing::LogGraded;
  auto g2 = GridFunction::makeGrid(lg);
  auto w2 = GridFunction::makeWeights(lg);
  double covered = 0.0;
  for (double w : w2) covered += w;
  // the log grid covers [inner, L] on each side
  CHECK(covered == doctest::Approx(2.0 * (lg.lambda_max - lg.inner)).epsilon(1e-6));
}
