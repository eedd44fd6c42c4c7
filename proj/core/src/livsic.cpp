// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/livsic.hpp"

#include <cmath>
#include <sstream>

namespace friedrichs {

Matrix livsicMatrix(const ModelSpec& spec, Complex z, SheetTag sheet) {
  Matrix L = z * Matrix::Identity(spec.n, spec.n);
  L -= spec.a.cast<Complex>().asDiagonal();
  L -= phi(spec, z, sheet);
  return L;
}

LivsicValue livsic(const ModelSpec& spec, Complex z, SheetTag sheet) {
  Matrix L = livsicMatrix(spec, z, sheet);
  Complex det = L.partialPivLu().determinant();
  Eigen::JacobiSVD<Matrix> svd(L);
  return {z, sheet, std::move(L), det, svd.singularValues().minCoeff()};
}

Matrix livsicInverse(const ModelSpec& spec, Complex z, SheetTag sheet) {
  Matrix L = livsicMatrix(spec, z, sheet);
  Eigen::JacobiSVD<Matrix> svd(L);
  double smin = svd.singularValues().minCoeff();
  if (smin <= kNearSingularTol) {
    std::ostringstream os;
    os << "Livsic matrix near-singular at z = (" << z.real() << ", " << z.imag()
       << "), sigma_min = " << smin;
    throw NearSingular(os.str(), smin);
  }
  Matrix I = Matrix::Identity(spec.n, spec.n);
  Matrix inv = L.partialPivLu().solve(I);
  // floating point cannot beat eps * cond(L); the 1e-10 bound applies in the
  // well-scaled regime, near the poles of Phi the condition floor takes over
  double floor = 40.0 * spec.n * 2.2e-16 * L.norm() * inv.norm();
  double bound = std::max(1e-10, floor);
  double residual = (L * inv - I).norm();
  if (residual > bound) {
    // one step of Newton refinement X <- X (2I - L X)
    inv = inv * (2.0 * I - L * inv);
    residual = (L * inv - I).norm();
    if (residual > bound) {
      std::ostringstream os;
      os << "partial resolvent residual " << residual << " exceeds " << bound;
      throw NumericalError(os.str());
    }
  }
  return inv;
}

namespace {

double detLReal(const ModelSpec& spec, double lam) {
  Matrix L = livsicMatrix(spec, lam, SheetTag::FirstSheet);
  return L.partialPivLu().determinant().real();
}

}  // namespace

std::vector<BoundState> negativeBoundStates(const ModelSpec& spec) {
  std::vector<BoundState> out;
  if (spec.M.isZero()) return out;  // A > 0: no negative spectrum at all
  const double hi = -1e-12;
  const double lo = -(spec.a.maxCoeff() + 60.0);
  const int scan = 800;
  double prev_lam = hi;
  double prev_det = detLReal(spec, hi);
  for (int i = 1; i <= scan; ++i) {
    double lam = -std::exp(std::log(-hi) + (std::log(-lo) - std::log(-hi)) * i / scan);
    double det = detLReal(spec, lam);
    if (prev_det * det < 0.0) {
      double a = lam, b = prev_lam;  // det changes sign on [a, b]
      double fa = det;
      for (int it = 0; it < 200 && b - a > 1e-16 * std::abs(a); ++it) {
        double mid = 0.5 * (a + b);
        double fm = detLReal(spec, mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      double lb = 0.5 * (a + b);
      Matrix L = livsicMatrix(spec, lb, SheetTag::FirstSheet);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (L + L.adjoint().eval()));
      int idx = 0;
      es.eigenvalues().cwiseAbs().minCoeff(&idx);
      Vector v = es.eigenvectors().col(idx);
      // mass = v (v* L'(lb) v)^-1 v* with the closed-form derivative
      Matrix Lp = Matrix::Identity(spec.n, spec.n) -
                  phiDerivative(spec, lb, SheetTag::FirstSheet);
      double denom = ((v.adjoint() * Lp * v)(0, 0)).real();
      BoundState bs;
      bs.lambda = lb;
      bs.mass = (v * v.adjoint()) / denom;
      out.push_back(std::move(bs));
    }
    prev_lam = lam;
    prev_det = det;
  }
  return out;
}

Matrix spectralDensity(const ModelSpec& spec, double lambda, bool verify) {
  if (!(lambda > 0.0))
    throw NumericalError("spectral density is defined for lambda > 0");
  Matrix Lp_inv = livsicInverse(spec, lambda, SheetTag::PlusContinued);
  Matrix Lm_inv = livsicInverse(spec, lambda, SheetTag::FirstSheet);
  Matrix G = spec.G(lambda);
  Matrix D = Lp_inv * G * Lm_inv;
  if (verify) {
    Matrix D_jump = (Lm_inv - Lp_inv) / (2.0 * kPi * kI);
    Matrix D_swap = Lm_inv * G * Lp_inv;
    double e1 = (D - D_jump).cwiseAbs().maxCoeff();
    double e2 = (D - D_swap).cwiseAbs().maxCoeff();
    if (e1 > 1e-10 || e2 > 1e-10) {
      std::ostringstream os;
      os << "spectral density orderings disagree at lambda = " << lambda
         << " (|D - jump| = " << e1 << ", |D - swapped| = " << e2 << ")";
      throw IdentityViolation(os.str());
    }
  }
  return D;
}

}  // namespace friedrichs
