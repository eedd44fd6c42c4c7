// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "friedrichs/hardy.hpp"
#include "friedrichs/livsic.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/scattering.hpp"
#include "friedrichs/stieltjes.hpp"

namespace friedrichs {

namespace {

void runCheck(std::vector<CheckResult>& out, const std::string& name,
              double threshold, const std::function<double()>& metric,
              std::string detail = "") {
  CheckResult r;
  r.name = name;
  r.threshold = threshold;
  r.detail = std::move(detail);
  try {
    r.metric = metric();
    r.passed = r.metric <= threshold;
  } catch (const Error& e) {
    r.passed = false;
    r.metric = std::numeric_limits<double>::infinity();
    r.detail = e.what();
  }
  out.push_back(std::move(r));
}

Vector randomUnit(std::mt19937& gen, int n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex{nd(gen), nd(gen)};
  return v / v.norm();
}

double principalAngle(const Matrix& A, const Matrix& B) {
  // largest principal angle between the column spans (assumed same dim),
  // sine formulation for accuracy near zero
  Eigen::HouseholderQR<Matrix> qa(A), qb(B);
  Matrix Qa = qa.householderQ() * Matrix::Identity(A.rows(), A.cols());
  Matrix Qb = qb.householderQ() * Matrix::Identity(B.rows(), B.cols());
  Eigen::JacobiSVD<Matrix> svd(Qb - Qa * (Qa.adjoint() * Qb));
  double s = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
  return std::asin(s);
}

}  // namespace

SearchRegion defaultSearchRegion(const ModelSpec& spec) {
  return fullSearchRegion(spec);
}

std::vector<CheckResult> verifyModel(const ModelSpec& spec, const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  std::mt19937 gen(0xf00d);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int n = spec.n;
  const Matrix I = Matrix::Identity(n, n);
  const bool trivial = spec.M.isZero();

  auto randomOffCut = [&](double rmin, double rmax) {
    for (;;) {
      double r = rmin + (rmax - rmin) * u01(gen);
      double th = 2.0 * kPi * u01(gen);
      Complex z = std::polar(r, th);
      if (std::abs(z.imag()) < 0.1 && z.real() > -0.1) continue;
      if (spec.poleDistance(z) < 0.2) continue;
      return z;
    }
  };

  runCheck(out, "conj_adjoint matches adjoint of M at conj z", 1e-13, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Complex z = randomOffCut(0.3, 6.0);
      worst = std::max(worst, (spec.Mstar.eval(z) - spec.M.eval(std::conj(z)).adjoint())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    return worst;
  });

  runCheck(out, "G Hermitian PSD on the real line", 1e-12, [&] {
    double worst = 0.0;
    for (double lam : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      Matrix G = spec.G(lam);
      Matrix Gh = G.adjoint();
      worst = std::max(worst, (G - Gh).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + Gh));
      worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
    }
    return worst;
  });

  runCheck(out, "jump Phi_- minus Phi_+ equals 2 pi i G", 1e-11, [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      double lam = 0.1 * std::pow(500.0, i / 49.0);
      const double d = 1e-12;
      Matrix below = phi(spec, {lam, -d}, SheetTag::FirstSheet);
      Matrix above = phi(spec, {lam, d}, SheetTag::FirstSheet);
      worst = std::max(
          worst, (below - above - 2.0 * kPi * kI * spec.G(lam)).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  runCheck(out, "Schwarz reflection Phi(conj z) = Phi(z)*", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      Complex z = randomOffCut(0.3, 8.0);
      worst = std::max(worst, (phi(spec, std::conj(z), SheetTag::FirstSheet) -
                               phi(spec, z, SheetTag::FirstSheet).adjoint())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    return worst;
  });

  if (opts.include_oracle && !trivial) {
    runCheck(out, "Phi closed form vs adaptive quadrature (rel)", 1e-9, [&] {
      double worst = 0.0;
      for (int i = 0; i < 20; ++i) {
        Complex z = randomOffCut(0.5, 5.0);
        Matrix cf = phi(spec, z, SheetTag::FirstSheet);
        Matrix quad = phiQuadrature(spec, z);
        worst = std::max(worst, (cf - quad).norm() / std::max(quad.norm(), 1e-300));
      }
      return worst;
    });
  }

  if (!trivial) {
    runCheck(out, "Phi decay O(1/|z|)", 0.25, [&] {
      Complex dir = std::polar(1.0, 3.0 * kPi / 4.0);
      double m3 = phi(spec, 1e3 * dir, SheetTag::FirstSheet).norm() * 1e3;
      double m4 = phi(spec, 1e4 * dir, SheetTag::FirstSheet).norm() * 1e4;
      return std::abs(m4 / m3 - 1.0);
    });
  }

  runCheck(out, "Eq(4) three-way spectral density identity", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      double lam = 0.1 * std::pow(300.0, i / 49.0);
      Matrix Lp = livsicInverse(spec, lam, SheetTag::PlusContinued);
      Matrix Lm = livsicInverse(spec, lam, SheetTag::FirstSheet);
      Matrix G = spec.G(lam);
      Matrix D1 = Lp * G * Lm;
      Matrix D2 = (Lm - Lp) / (2.0 * kPi * kI);
      Matrix D3 = Lm * G * Lp;
      worst = std::max(worst, (D1 - D2).cwiseAbs().maxCoeff());
      worst = std::max(worst, (D1 - D3).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  runCheck(out, "Eq(3) resolvent bound on |z| = 1e4", 0.0, [&] {
    double viol = 0.0;
    for (int k = 0; k < 64; ++k) {
      double th = 2.0 * kPi * (k + 0.5) / 64;
      Complex z = std::polar(1e4, th);
      if (std::abs(z.imag()) < 1.0 && z.real() > 0.0) continue;
      double v = livsicInverse(spec, z, SheetTag::FirstSheet).norm() * 1e4;
      viol = std::max(viol, std::max(0.5 - v, v - 2.0));
    }
    return std::max(viol, 0.0);
  });

  if (!trivial) {
    runCheck(out, "spectral completeness: int dE = 1, int lambda dE = A", 1e-6, [&] {
      auto Dfn = [&](double lam) { return spectralDensity(spec, lam, false); };
      auto lamDfn = [&](double lam) { return Matrix(lam * spectralDensity(spec, lam, false)); };
      auto knots = spectralKnots(spec, 1e-9, 150.0);
      Matrix m0 = adaptiveIntegrateKnots(Dfn, knots, 1e-9);
      Matrix m1 = adaptiveIntegrateKnots(lamDfn, knots, 1e-9);
      // sub-threshold bound states carry part of the P_E mass whenever the
      // coupling is strong enough to violate assumption (ii)
      for (const BoundState& b : negativeBoundStates(spec)) {
        m0 += b.mass;
        m1 += b.lambda * b.mass;
      }
      Matrix A = spec.a.cast<Complex>().asDiagonal();
      return std::max((m0 - I).cwiseAbs().maxCoeff(), (m1 - A).cwiseAbs().maxCoeff());
    });

    runCheck(out, "wave-matrix isometry on a test representer", 1e-6, [&] {
      Vector v = randomUnit(gen, n);
      auto lhs_fn = [&](double lam) {
        Vector f = v / ((lam + 1.0) * (lam + 1.0));
        Matrix r(1, 1);
        r(0, 0) = (spec.M.eval(lam) * f).squaredNorm();
        return r;
      };
      auto rhs_fn = [&](double lam) {
        Vector f = v / ((lam + 1.0) * (lam + 1.0));
        Vector g = livsicMatrix(spec, lam, SheetTag::PlusContinued) * f;
        Matrix D = spectralDensity(spec, lam, false);
        Matrix r(1, 1);
        r(0, 0) = (g.adjoint() * D * g)(0, 0);
        return r;
      };
      auto knots = spectralKnots(spec, 1e-9, 200.0);
      Complex lhs = adaptiveIntegrateKnots(lhs_fn, knots, 1e-11)(0, 0);
      Complex rhs = adaptiveIntegrateKnots(rhs_fn, knots, 1e-11)(0, 0);
      return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
    });
  }

  if (opts.include_oracle) {
    runCheck(out, "Eq(2) partial resolvent vs discretized H (rel)", 1e-2, [&] {
      Complex z{2.0, 1.0};
      Matrix direct = livsicInverse(spec, z, SheetTag::FirstSheet);
      Matrix disc = discretizedPartialResolvent(spec, z, 2000, 100.0);
      return (direct - disc).norm() / direct.norm();
    });
  }

  runCheck(out, "S_K unitarity on the half line", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double lam = 0.05 * std::pow(1000.0, i / 199.0);
      Matrix S = scatteringK(spec, lam, AxisSide::OnAxis);
      worst = std::max(worst, (S * S.adjoint() - I).norm());
    }
    return worst;
  });

  runCheck(out, "S_E similar to unitary: |det S_E| = 1", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double lam = 0.2 * std::pow(100.0, i / 19.0);
      Matrix S = scatteringE(spec, lam);
      worst = std::max(worst, std::abs(std::abs(S.partialPivLu().determinant()) - 1.0));
    }
    return worst;
  });

  runCheck(out, "Eq(32) S_K(z)^-1 = S_K(conj z)*", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Complex z;
      do {
        z = Complex{0.2 + 5.0 * u01(gen), -(0.05 + 1.0 * u01(gen))};
      } while (spec.poleDistance(z) < 0.3);
      Matrix Sm = scatteringK(spec, z, AxisSide::ContinuedMinus);
      Matrix Linv = livsicInverse(spec, std::conj(z), SheetTag::PlusContinued);
      Matrix Sp = I - 2.0 * kPi * kI * spec.M.eval(std::conj(z)) * Linv *
                          spec.Mstar.eval(std::conj(z));
      worst = std::max(worst, (Sm.partialPivLu().solve(I) - Sp.adjoint()).norm());
    }
    return worst;
  });

  runCheck(out, "intertwining S_K M f = M S_E f", 1e-10, [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double lam = 0.3 * std::pow(60.0, i / 19.0);
      Vector f = randomUnit(gen, n);
      Matrix M = spec.M.eval(lam);
      Vector lhs = scatteringK(spec, lam, AxisSide::OnAxis) * (M * f);
      Vector rhs = M * (scatteringE(spec, lam) * f);
      worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
  });

  runCheck(out, "S_K bounded at infinity", 1e-2, [&] {
    double worst1 = 0.0, worst2 = 0.0;
    for (int k = 0; k < 16; ++k) {
      double th = -kPi * (k + 0.5) / 16;
      Matrix S1 = scatteringK(spec, std::polar(1e3, th), AxisSide::ContinuedMinus);
      Matrix S2 = scatteringK(spec, std::polar(2e3, th), AxisSide::ContinuedMinus);
      worst1 = std::max(worst1, (S1 - I).norm());
      worst2 = std::max(worst2, (S2 - I).norm());
    }
    if (worst2 > worst1) return 1.0;  // must decrease in |z|
    return worst1;
  });

  runCheck(out, "no resonance on the negative axis", 1.0, [&] {
    double smin = negativeAxisSigmaMin(spec, -50.0, -0.01, 400);
    return 1e-6 / std::max(smin, 1e-300);
  });

  // --- resonance-dependent checks -----------------------------------------
  // the identity suite always works with the complete resonance set
  SearchRegion region = fullSearchRegion(spec);
  if (opts.have_region) {
    region.max_depth = opts.region.max_depth;
    region.newton_tol = opts.region.newton_tol;
    region.boundary_samples_per_edge = opts.region.boundary_samples_per_edge;
  }
  std::vector<Resonance> resonances;
  try {
    resonances = findResonances(spec, region);
  } catch (const Error& e) {
    CheckResult r;
    r.name = "resonance search";
    r.passed = false;
    r.metric = std::numeric_limits<double>::infinity();
    r.detail = e.what();
    out.push_back(r);
    return out;
  }

  if (trivial) {
    runCheck(out, "trivial coupling: no resonances", 0.0,
             [&] { return static_cast<double>(resonances.size()); });
    return out;
  }

  runCheck(out, "resonance kernels: sigma_min(L_+) <= 1e-8 in C_-", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& r : resonances) {
      if (!(r.zeta.imag() < 0.0)) return std::numeric_limits<double>::infinity();
      Eigen::JacobiSVD<Matrix> svd(livsicMatrix(spec, r.zeta, SheetTag::PlusContinued));
      worst = std::max(worst, svd.singularValues().minCoeff());
    }
    return worst;
  });

  runCheck(out, "winding count equals located zeros", 0.0, [&] {
    int w = windingNumberCarved(spec, region);
    int total = 0;
    for (const auto& r : resonances) total += r.winding_multiplicity;
    return std::abs(static_cast<double>(w - total));
  });

  runCheck(out, "residue rank d and ima(residue L_-) = ker L_+", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& r : resonances) {
      Eigen::JacobiSVD<Matrix> svd(r.residue_Linv, Eigen::ComputeThinU);
      double smax = svd.singularValues().maxCoeff();
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-8 * smax) ++rank;
      if (rank != r.geometric_multiplicity)
        return std::numeric_limits<double>::infinity();
      Matrix image = r.residue_Linv * livsicMatrix(spec, r.zeta, SheetTag::FirstSheet);
      Eigen::JacobiSVD<Matrix> isvd(image, Eigen::ComputeThinU);
      Matrix U = isvd.matrixU().leftCols(rank);
      worst = std::max(worst, principalAngle(U, r.kernel_basis));
    }
    return worst;
  });

  std::vector<ScatteringResidue> residues;
  runCheck(out, "S_K residues: chain rule vs contour (rel)", 1e-8, [&] {
    residues = lowerHalfResidues(spec, resonances);
    double worst = 0.0;
    for (const auto& r : resonances) {
      Matrix chain = -2.0 * kPi * kI * spec.M.eval(r.zeta) * r.residue_Linv *
                     spec.Mstar.eval(r.zeta);
      for (const auto& sr : residues)
        if (std::abs(sr.zeta - r.zeta) < 1e-10)
          worst = std::max(worst, (sr.S_minus1 - chain).norm() / chain.norm());
    }
    return worst;
  });

  runCheck(out, "Laurent split: H_K holomorphic at each resonance", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& r : resonances) {
      const int nodes = 64;
      double radius = 0.05;
      Matrix acc = Matrix::Zero(n, n);
      for (int k = 0; k < nodes; ++k) {
        double th = 2.0 * kPi * (k + 0.5) / nodes;
        Complex e{std::cos(th), std::sin(th)};
        auto [main, holo] = laurentSplit(spec, residues, r.zeta + radius * e);
        acc += holo * e;
      }
      worst = std::max(worst, (acc * (radius / nodes)).norm());
    }
    return worst;
  });

  runCheck(out, "Proposition 1: ker L_+ = ima Res S_E", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& r : resonances)
      if (r.winding_multiplicity == r.geometric_multiplicity)
        worst = std::max(worst, prop1PrincipalAngle(spec, r));
    return worst;
  });

  if (opts.include_hardy && !resonances.empty()) {
    GamovVector gv = gamov(spec, resonances.front(), 0);

    runCheck(out, "Eq(30) Dirac pairing, fixed global sign", 1e-8, [&] {
      double worst = 0.0;
      int sign = 0;
      for (int i = 0; i < 10; ++i) {
        Complex w{-3.0 + 6.0 * u01(gen), -(0.5 + 2.0 * u01(gen))};
        Vector k = randomUnit(gen, n);
        auto res = diracPairingCheck(spec, gv, w, k, opts.grid.lambda_max);
        if (sign == 0) sign = res.sign;
        if (res.sign != sign) return std::numeric_limits<double>::infinity();
        double err = std::min(std::abs(res.lhs - res.rhs), std::abs(res.lhs + res.rhs));
        worst = std::max(worst, err / std::max(std::abs(res.lhs), 1e-300));
      }
      return worst;
    });

    runCheck(out, "Eq(33) pole-sum representation of Q_+ S_- g", 1e-5, [&] {
      GridParams gp;
      gp.lambda_max = 200.0;
      gp.points = 4000;
      gp.spacing = GridParams::Spacing::LogGraded;
      gp.tail_exponent = 6.0;
      double worst = 0.0;
      for (int i = 0; i < 2; ++i) {
        Complex w{-1.0 + 2.0 * u01(gen), 0.5 + 1.5 * u01(gen)};
        Vector k = randomUnit(gen, n);
        Complex z{-2.0 + 4.0 * u01(gen), 0.5 + 2.0 * u01(gen)};
        auto res = theorem3Check(spec, residues, w, k, z, gp);
        worst = std::max(worst, (res.lhs - res.rhs).norm() /
                                    std::max(res.rhs.norm(), 1e-300));
      }
      return worst;
    });

    runCheck(out, "decay semigroup: Gamov eigenrelation", 1e-3, [&] {
      GridFunction f = gamovGridFunction(gv, opts.grid);
      double fnorm = f.norm(true);
      double worst = 0.0;
      for (double t : {0.5, 1.0, 2.0}) {
        GridFunction Tf = semigroupApply(f, t);
        Complex decay = std::exp(-kI * gv.zeta * t);
        double err = 0.0;
        for (int i = 0; i < f.size(); ++i) {
          if (f.grid()[i] <= 0.0) continue;
          err += f.weights()[i] *
                 (Tf.values().row(i) - decay * f.values().row(i)).squaredNorm();
        }
        worst = std::max(worst, std::sqrt(err) / fnorm);
      }
      return worst;
    });

    runCheck(out, "decay semigroup: composition law", 2e-4, [&] {
      GridFunction f = gamovGridFunction(gv, opts.grid);
      GridFunction t2 = semigroupApply(f, 0.7);
      GridFunction lhs = semigroupApply(t2, 0.8);
      GridFunction rhs = semigroupApply(f, 1.5);
      double err = 0.0;
      for (int i = 0; i < f.size(); ++i) {
        if (f.grid()[i] <= 0.0) continue;
        err += f.weights()[i] * (lhs.values().row(i) - rhs.values().row(i)).squaredNorm();
      }
      return std::sqrt(err) / f.norm(true);
    });

    runCheck(out, "decay semigroup: contraction", 1e-6, [&] {
      GridFunction f = gamovGridFunction(gv, opts.grid);
      double fnorm = f.norm(true);
      double worst = 0.0;
      for (double t : {0.0, 0.5, 1.0, 3.0}) {
        GridFunction Tf = semigroupApply(f, t);
        worst = std::max(worst, Tf.norm(true) / fnorm - 1.0);
      }
      return std::max(worst, 0.0);
    });
  }

  return out;
}

}  // namespace friedrichs
