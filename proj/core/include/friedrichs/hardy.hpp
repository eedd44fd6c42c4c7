// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/resonances.hpp"
#include "friedrichs/scattering.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

/// Gamov pair: zeta0 in C_-, e0 a unit kernel direction, k0 = M(zeta0) e0.
struct GamovVector {
  Complex zeta;
  Vector e0;
  Vector k0;
};

struct GridParams {
  double lambda_max = 500.0;
  int points = 20000;
  double tail_exponent = 1.0;
  enum class Spacing { Uniform, LogGraded } spacing = Spacing::Uniform;
  double inner = 1e-7;  // innermost |lambda| for LogGraded grids
};

/// Sampled K-valued function on a symmetric grid spanning [-L, L]. Carrier
/// for the Hardy projections and the decay semigroup. The grid excludes 0 by
/// construction (midpoint layout). An optional extension callback supplies
/// exact off-grid values for analytic families (rational test functions).
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const std::vector<double>> grid, Matrix values,
               double tail_exponent, std::vector<double> weights = {});

  static std::shared_ptr<const std::vector<double>> makeGrid(const GridParams& p);

  /// exact quadrature weights for a factory grid (uniform midpoint cells /
  /// midpoint rule in log coordinates)
  static std::vector<double> makeWeights(const GridParams& p);

  static GridFunction sample(const GridParams& p,
                             const std::function<Vector(double)>& f,
                             double tail_exponent);

  const std::vector<double>& grid() const { return *grid_; }
  std::shared_ptr<const std::vector<double>> gridPtr() const { return grid_; }
  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }
  double tailDecayExponent() const { return tail_exponent_; }
  int size() const { return static_cast<int>(grid_->size()); }
  int dim() const { return static_cast<int>(values_.cols()); }

  /// quadrature weights (midpoint cells between neighbours)
  const std::vector<double>& weights() const { return weights_; }
  bool isUniform() const { return uniform_; }
  double uniformSpacing() const { return spacing_; }

  void setExtension(std::function<Vector(double)> ext) { extension_ = std::move(ext); }
  const std::function<Vector(double)>& extension() const { return extension_; }

  /// L2 grid norm, optionally restricted to lambda > 0.
  double norm(bool positive_only = false) const;

 private:
  std::shared_ptr<const std::vector<double>> grid_;
  Matrix values_;  // size x dim
  double tail_exponent_;
  std::vector<double> weights_;
  bool uniform_ = false;
  double spacing_ = 0.0;
  std::function<Vector(double)> extension_;
};

GamovVector gamov(const ModelSpec& spec, const Resonance& res, int column);

/// Grid realization lambda -> k0 / (zeta0 - lambda), extension attached.
GridFunction gamovGridFunction(const GamovVector& g, const GridParams& params);

struct DiracPairingResult {
  Complex lhs;   // 2 pi i (s(conj zeta0), k0)
  Complex rhs;   // int (s(l), k0/(zeta0 - l)) dl, quadrature + exact tails
  int sign;      // +1 if lhs ~ rhs, -1 if lhs ~ -rhs
};

/// Eq-(30)-type pairing check for the analytic family s(l) = k/(l - w),
/// w in C_-. The inner product is antilinear in the second slot. Throws
/// TailTooFat if the tail correction exceeds 1% of |rhs|.
DiracPairingResult diracPairingCheck(const ModelSpec& spec, const GamovVector& g,
                                     Complex w, const Vector& k,
                                     double lambda_cut);

/// (Q_+ f)(z) = (1/2 pi i) int f(l)/(l - z) dl for Im z > 0, trapezoidal
/// weights on the grid plus an algebraic tail model (edge pole fit) handled
/// in closed form.
Vector projectPlus(const GridFunction& f, Complex z);

/// Q_+ boundary values on the whole grid by the Plemelj jump formula with a
/// symbol-corrected discrete Hilbert transform (uniform grids only).
Matrix projectPlusBoundary(const GridFunction& f);

struct Theorem3Result {
  Vector lhs;
  Vector rhs;
};

/// Eq (33): lhs = Q_+[(S_- - 1) g](z) from grid data, rhs = pole sum over the
/// supplied residues, for g(l) = k/(l - w) with w in C_+ and z in C_+.
Theorem3Result theorem3Check(const ModelSpec& spec,
                             const std::vector<ScatteringResidue>& residues,
                             Complex w, const Vector& k, Complex z,
                             const GridParams& params);

/// Toeplitz decay semigroup T_+(t) f = P_+ Q_+ e^{-i l t} P_+^{-1} f applied
/// to grid data supported on lambda > 0. The H^2_+ extension comes from the
/// attached extension callback, from previously computed lambda < 0 values,
/// or from an alternating-projection fallback; its residual on lambda > 0 is
/// checked against 1e-6 (ExtensionIllposed). The returned GridFunction holds
/// the lambda > 0 result; its lambda < 0 rows carry the extension for
/// composing further applications.
GridFunction semigroupApply(const GridFunction& f, double t);

}  // namespace friedrichs
