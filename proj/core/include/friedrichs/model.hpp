// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "friedrichs/errors.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

// Absolute pole-proximity tolerance for rational evaluation.
inline constexpr double kPoleTol = 1e-13;

/// One partial-fraction term coeff * (z - pole)^(-order).
struct RationalTerm {
  Complex pole;
  int order = 1;
  Matrix coeff;
};

/// Rational matrix function with value 0 at infinity, stored in
/// partial-fraction form M(z) = sum_t coeff_t (z - pole_t)^(-order_t).
class RationalMatrixFunction {
 public:
  RationalMatrixFunction(int rows, int cols, std::vector<RationalTerm> terms);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<RationalTerm>& terms() const { return terms_; }

  /// Evaluate at z. Throws PoleHit within kPoleTol of a pole.
  Matrix eval(Complex z) const;

  /// The function z -> M(conj z)^*: term (p, k, C) maps to (conj p, k, C^*).
  RationalMatrixFunction conjAdjoint() const;

  RationalMatrixFunction scaled(double factor) const;

  /// Termwise derivative: (p, k, C) -> (p, k + 1, -k C).
  RationalMatrixFunction derivative() const;

  /// Distinct poles of this function.
  std::vector<Complex> poles() const;

  /// P: the poles of the pair {M(z), M(conj z)^*}; closed under conjugation.
  std::vector<Complex> pairPoleSet() const;

  double distanceToPoles(Complex z) const;

  bool isZero() const;

 private:
  int rows_, cols_;
  std::vector<RationalTerm> terms_;
};

/// Problem instance: A = diag(a) with a_j > 0, rational form factor M,
/// coupling epsilon in [0, 1]. Epsilon is folded into M once here; all
/// downstream code sees the scaled function.
struct ModelSpec {
  int n = 0;
  RealVector a;
  double epsilon = 1.0;
  RationalMatrixFunction M_base;  // unscaled (epsilon = 1) form factor
  RationalMatrixFunction M;       // epsilon * M_base
  RationalMatrixFunction Mstar;   // z -> M(conj z)^*, same scaling

  static ModelSpec make(RealVector a, RationalMatrixFunction M_base, double epsilon);

  ModelSpec withEpsilon(double eps) const;

  /// G(z) = M(conj z)^* M(z); Hermitian PSD on the real line.
  Matrix G(Complex z) const;

  std::vector<Complex> poleSet() const { return M_base.pairPoleSet(); }
  double poleDistance(Complex z) const;
};

Matrix evalG(const RationalMatrixFunction& M, Complex z);

struct ValidationItem {
  std::string name;
  bool passed = false;
  bool hard = true;  // hard failures abort a CLI run
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool allHardPassed() const;
  std::string toString() const;
};

/// Checks the standing assumptions that are checkable at finite dimension:
/// square dimensions, positivity of a, poles off the real axis, per-pole
/// max order >= 2, invertibility sampling of M(z). Never throws.
ValidationReport validateModel(const ModelSpec& spec);

}  // namespace friedrichs
