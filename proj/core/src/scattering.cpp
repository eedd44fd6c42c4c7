// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace friedrichs {

namespace {

double featureDistance(Complex z, const std::vector<Complex>& features) {
  double d = (z.real() <= 0.0) ? std::abs(z.imag()) : std::abs(z);  // cut (-inf,0]
  for (Complex p : features)
    if (std::abs(z - p) > 1e-14) d = std::min(d, std::abs(z - p));
  return d;
}

// the meromorphic continuation of S_K through R_+; valid on either side
Matrix scatteringKContinued(const ModelSpec& spec, Complex z) {
  Matrix Linv = livsicInverse(spec, z, SheetTag::PlusContinued);
  Matrix I = Matrix::Identity(spec.n, spec.n);
  return I - 2.0 * kPi * kI * spec.M.eval(z) * Linv * spec.Mstar.eval(z);
}

}  // namespace

Matrix scatteringE(const ModelSpec& spec, double lambda) {
  if (!(lambda > 0.0)) throw NumericalError("S_E is defined for lambda > 0");
  Matrix Lp = livsicMatrix(spec, lambda, SheetTag::PlusContinued);
  Matrix Lm = livsicMatrix(spec, lambda, SheetTag::FirstSheet);
  Eigen::PartialPivLU<Matrix> lu(Lp);
  Matrix S1 = lu.solve(Lm);
  Matrix S2 = lu.solve(Lp.adjoint());
  double diff = (S1 - S2).cwiseAbs().maxCoeff();
  if (diff > 1e-10) {
    std::ostringstream os;
    os << "S_E formulas disagree by " << diff << " at lambda = " << lambda;
    throw IdentityViolation(os.str());
  }
  return S1;
}

Matrix scatteringK(const ModelSpec& spec, Complex z, AxisSide side) {
  SheetTag sheet = SheetTag::PlusContinued;
  switch (side) {
    case AxisSide::OnAxis:
      if (z.imag() != 0.0 || z.real() <= 0.0)
        throw NumericalError("OnAxis needs z = lambda > 0");
      break;
    case AxisSide::ContinuedMinus:
      if (!(z.imag() < 0.0))
        throw NumericalError("ContinuedMinus needs Im z < 0");
      break;
    case AxisSide::BoundaryPlus:
      if (z.imag() != 0.0 || z.real() >= 0.0)
        throw NumericalError("BoundaryPlus needs z = lambda < 0");
      sheet = SheetTag::FirstSheet;  // Phi_+(lambda + i0) = first-sheet value
      break;
    case AxisSide::BoundaryMinus:
      if (z.imag() != 0.0 || z.real() >= 0.0)
        throw NumericalError("BoundaryMinus needs z = lambda < 0");
      break;
  }
  Matrix Linv = livsicInverse(spec, z, sheet);
  Matrix I = Matrix::Identity(spec.n, spec.n);
  return I - 2.0 * kPi * kI * spec.M.eval(z) * Linv * spec.Mstar.eval(z);
}

Matrix scatteringMinusBoundary(const ModelSpec& spec, double lambda) {
  if (lambda > 0.0) return scatteringK(spec, lambda, AxisSide::OnAxis);
  return scatteringK(spec, lambda, AxisSide::BoundaryMinus);
}

ScatteringResidue residueSK(const ModelSpec& spec, Complex zeta,
                            ResidueSource source,
                            const std::vector<Complex>& other_features) {
  std::vector<Complex> features = spec.poleSet();
  features.insert(features.end(), other_features.begin(), other_features.end());
  double dist = featureDistance(zeta, features);
  double radius = std::min(1e-2, 0.5 * dist);
  if (!(radius > 0.0)) throw NumericalError("degenerate residue contour");

  const int nodes = 64;
  Matrix res = Matrix::Zero(spec.n, spec.n);
  Matrix second = Matrix::Zero(spec.n, spec.n);
  for (int k = 0; k < nodes; ++k) {
    double theta = 2.0 * kPi * (k + 0.5) / nodes;
    Complex e{std::cos(theta), std::sin(theta)};
    Complex z = zeta + radius * e;
    Matrix S = scatteringKContinued(spec, z);
    res += S * e;
    second += S * (e * e);
  }
  res *= radius / nodes;
  second *= radius * radius / nodes;

  double rnorm = res.norm();
  if (rnorm <= 1e-10) {
    std::ostringstream os;
    os << "no pole of S_K at (" << zeta.real() << ", " << zeta.imag()
       << "): residue norm " << rnorm;
    throw NoPole(os.str());
  }
  if (second.norm() > 1e-8 * rnorm) {
    std::ostringstream os;
    os << "order-2 Laurent coefficient " << second.norm() << " vs residue "
       << rnorm << " at (" << zeta.real() << ", " << zeta.imag()
       << "): pole is not simple";
    throw HigherOrderPole(os.str());
  }
  return {zeta, res, source};
}

std::vector<ScatteringResidue> lowerHalfResidues(const ModelSpec& spec,
                                                 const std::vector<Resonance>& rs) {
  std::vector<ScatteringResidue> out;
  std::vector<Complex> features;
  for (const Resonance& r : rs) features.push_back(r.zeta);
  for (const Resonance& r : rs) {
    std::vector<Complex> others;
    for (Complex f : features)
      if (std::abs(f - r.zeta) > 1e-12) others.push_back(f);
    out.push_back(residueSK(spec, r.zeta, ResidueSource::Resonance, others));
  }
  for (Complex p : spec.poleSet()) {
    if (!(p.imag() < 0.0)) continue;
    try {
      out.push_back(residueSK(spec, p, ResidueSource::FormFactorPole, features));
    } catch (const NoPole&) {
      // containment in R u P is only an upper bound; skip silent poles
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ScatteringResidue& a, const ScatteringResidue& b) {
              return a.zeta.real() != b.zeta.real()
                         ? a.zeta.real() < b.zeta.real()
                         : a.zeta.imag() < b.zeta.imag();
            });
  return out;
}

std::pair<Matrix, Matrix> laurentSplit(const ModelSpec& spec,
                                       const std::vector<ScatteringResidue>& residues,
                                       Complex z) {
  Matrix main = Matrix::Zero(spec.n, spec.n);
  for (const auto& r : residues) main += r.S_minus1 / (z - r.zeta);
  Matrix holo = scatteringKContinued(spec, z) - main;
  return {main, holo};
}

double prop1PrincipalAngle(const ModelSpec& spec, const Resonance& res) {
  std::vector<Complex> features = spec.poleSet();
  double dist = featureDistance(res.zeta, features);
  double radius = std::min(1e-2, 0.5 * dist);
  const int nodes = 64;
  Matrix acc = Matrix::Zero(spec.n, spec.n);
  for (int k = 0; k < nodes; ++k) {
    double theta = 2.0 * kPi * (k + 0.5) / nodes;
    Complex e{std::cos(theta), std::sin(theta)};
    Complex z = res.zeta + radius * e;
    Matrix Lm = livsicMatrix(spec, z, (z.imag() < 0.0) ? SheetTag::FirstSheet
                                                       : SheetTag::MinusContinued);
    Matrix SE = livsicMatrix(spec, z, SheetTag::PlusContinued).partialPivLu().solve(Lm);
    acc += SE * e;
  }
  acc *= radius / nodes;

  Eigen::JacobiSVD<Matrix> svd(acc, Eigen::ComputeThinU);
  double smax = svd.singularValues().maxCoeff();
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > std::max(1e-8 * smax, 1e-14)) ++rank;
  if (rank == 0) return kPi / 2.0;
  Matrix U = svd.matrixU().leftCols(rank);

  // largest principal angle between ima(Res S_E) and ker L_+(zeta0) via the
  // sine formulation, which stays accurate for tiny angles
  if (rank != res.kernel_basis.cols()) return kPi / 2.0;
  Matrix defect = res.kernel_basis - U * (U.adjoint() * res.kernel_basis);
  Eigen::JacobiSVD<Matrix> svd2(defect);
  return std::asin(std::clamp(svd2.singularValues().maxCoeff(), 0.0, 1.0));
}

double negativeAxisSigmaMin(const ModelSpec& spec, double lambda_min,
                            double lambda_max, int samples) {
  if (!(lambda_min < lambda_max) || lambda_max >= 0.0)
    throw NumericalError("negative-axis scan needs lambda_min < lambda_max < 0");
  double smin = std::numeric_limits<double>::infinity();
  // half linear, half log-spaced samples
  int half = samples / 2;
  for (int i = 0; i < half; ++i) {
    double t = static_cast<double>(i) / (half - 1);
    double lam = lambda_min + t * (lambda_max - lambda_min);
    Eigen::JacobiSVD<Matrix> svd(livsicMatrix(spec, lam, SheetTag::PlusContinued));
    smin = std::min(smin, svd.singularValues().minCoeff());
  }
  for (int i = 0; i < samples - half; ++i) {
    double t = static_cast<double>(i) / (samples - half - 1);
    double lam = -std::abs(lambda_max) *
                 std::pow(std::abs(lambda_min / lambda_max), t);
    Eigen::JacobiSVD<Matrix> svd(livsicMatrix(spec, lam, SheetTag::PlusContinued));
    smin = std::min(smin, svd.singularValues().minCoeff());
  }
  return smin;
}

}  // namespace friedrichs
