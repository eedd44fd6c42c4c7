// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "friedrichs/livsic.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/resonances.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

/// Branch selector for S_K. OnAxis is the unitary branch on R_+;
/// ContinuedMinus the meromorphic continuation into C_-; BoundaryPlus /
/// BoundaryMinus the lambda +- i0 boundary values on the negative axis.
enum class AxisSide { OnAxis, ContinuedMinus, BoundaryPlus, BoundaryMinus };

enum class ResidueSource { Resonance, FormFactorPole };

struct ScatteringResidue {
  Complex zeta;
  Matrix S_minus1;
  ResidueSource source = ResidueSource::Resonance;
};

/// S_E(l) = L_+(l)^-1 L_-(l) = L_+(l)^-1 L_+(l)^*, l > 0. Both formulas are
/// evaluated and must agree within 1e-10 (IdentityViolation otherwise).
Matrix scatteringE(const ModelSpec& spec, double lambda);

/// S_K(z) = 1 - 2 pi i M(z) L_+(z)^-1 M(conj z)^* on the selected branch.
Matrix scatteringK(const ModelSpec& spec, Complex z, AxisSide side);

/// S_- boundary function on the whole real line: S_K(l) for l > 0,
/// S_K(l - i0) for l < 0.
Matrix scatteringMinusBoundary(const ModelSpec& spec, double lambda);

/// Residue of S_K at an isolated pole by a 64-node circular contour; also
/// computes the order-2 Laurent coefficient and throws HigherOrderPole if it
/// exceeds 1e-8 relative to the residue. Throws NoPole if the residue norm is
/// <= 1e-10. other_features: nearby singularities to keep outside the
/// contour (the pole set P is always included).
ScatteringResidue residueSK(const ModelSpec& spec, Complex zeta,
                            ResidueSource source,
                            const std::vector<Complex>& other_features = {});

/// All confirmed poles of S_K in C_-: the supplied resonances plus the
/// members of P in C_- whose residue is nonzero.
std::vector<ScatteringResidue> lowerHalfResidues(const ModelSpec& spec,
                                                 const std::vector<Resonance>& rs);

/// Corollary-4 split S_K(z) = main(z) + holo(z) with
/// main = sum_zeta S_{-1,zeta} / (z - zeta).
std::pair<Matrix, Matrix> laurentSplit(const ModelSpec& spec,
                                       const std::vector<ScatteringResidue>& residues,
                                       Complex z);

/// Largest principal angle between ima(Res_{z=zeta0} S_E) and
/// ker L_+(zeta0).
double prop1PrincipalAngle(const ModelSpec& spec, const Resonance& res);

/// min over sampled lambda in [lambda_min, lambda_max] (both < 0) of
/// sigma_min(L_+(lambda - i0)); the negative-axis exclusion scan.
double negativeAxisSigmaMin(const ModelSpec& spec, double lambda_min,
                            double lambda_max, int samples);

}  // namespace friedrichs
