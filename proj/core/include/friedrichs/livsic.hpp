// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "friedrichs/model.hpp"
#include "friedrichs/stieltjes.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

// sigma_min below this counts as singular (near a resonance).
inline constexpr double kNearSingularTol = 1e-12;

struct LivsicValue {
  Complex z;
  SheetTag sheet;
  Matrix L;          // z I - diag(a) - Phi_sheet(z)
  Complex det;       // by pivoted LU
  double sigma_min;  // smallest singular value
};

/// L without the determinant/SVD work, for hot paths.
Matrix livsicMatrix(const ModelSpec& spec, Complex z, SheetTag sheet);

LivsicValue livsic(const ModelSpec& spec, Complex z, SheetTag sheet);

/// Inverse of the Livsic matrix = the partial resolvent P_E R(z) P_E.
/// Throws NearSingular if sigma_min <= 1e-12; the returned inverse satisfies
/// ||L L^-1 - I|| <= 1e-10.
Matrix livsicInverse(const ModelSpec& spec, Complex z, SheetTag sheet);

/// Spectral density D(l) = L_+(l)^-1 M(l)^* M(l) L_-(l)^-1 for l > 0.
/// With verify set the two other orderings of the identity are evaluated and
/// compared at 1e-10 (throws IdentityViolation on disagreement).
Matrix spectralDensity(const ModelSpec& spec, double lambda, bool verify = true);

/// A sub-threshold eigenvalue of H (a real zero of det L on the negative
/// axis, first sheet) with the sandwiched point mass P_E E({lambda}) P_E.
/// The branch point of Phi at 0 pushes one such state below the continuum
/// for every channel once the coupling is strong enough; shallower states
/// than ~1e-12 carry negligible mass and are not resolvable in doubles.
struct BoundState {
  double lambda;
  Matrix mass;
};

std::vector<BoundState> negativeBoundStates(const ModelSpec& spec);

}  // namespace friedrichs
