// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "friedrichs/livsic.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

/// Rectangle in C_- to search for zeros of det L_+ on the continued sheet.
struct SearchRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = -1e-8;  // must stay <= -1e-8
  int max_depth = 40;
  double newton_tol = 1e-13;
  int boundary_samples_per_edge = 32;
};

struct Resonance {
  Complex zeta;
  Matrix kernel_basis;  // n x d, orthonormal columns, ||L_+(zeta) v|| <= 1e-8
  int geometric_multiplicity = 0;
  int winding_multiplicity = 0;
  Matrix residue_Linv;  // (1/2pi i) contour integral of L_+^-1 around zeta
  double newton_residual = 0.0;
};

namespace detail {
struct Rect {
  double re_min, re_max, im_min, im_max;
};
/// Argument-principle zero count of an arbitrary holomorphic function over a
/// rectangle boundary, by adaptively refined phase tracking (each accepted
/// step changes the phase by < pi/2). Exposed for the synthetic-function
/// tests; production code goes through windingNumber below.
int windingNumberOf(const std::function<Complex(Complex)>& f, const Rect& r,
                    int samples_per_edge);
}  // namespace detail

/// Boundary phase count (1/2 pi i) contour d(log det L_+) of the rectangle:
/// the zero count when the rectangle avoids the pole set P, and zeros minus
/// det-pole orders otherwise. Rectangles with a boundary too close to a zero
/// (sigma_min <= 1e-9 at a boundary sample) are dilated by 1% up to 3 times;
/// afterwards BoundaryZero is thrown.
int windingNumber(const ModelSpec& spec, const SearchRegion& region);

/// Zero count with 1e-3 margin boxes around P carved out of the rectangle
/// first (the disjointness R and P makes this lossless).
int windingNumberCarved(const ModelSpec& spec, const SearchRegion& region);

/// Locate all resonances in the region: recursive bisection on the winding
/// count, det-Newton polish (central-difference derivative), kernel bases by
/// SVD, residues of L_+^-1 by 64-node circular contours. Margin boxes around
/// the pole set P are carved out of the region first. Deterministic; sorted
/// by (Re, Im). Warnings (region carves, dropped roots) are appended to
/// *warnings when given.
std::vector<Resonance> findResonances(const ModelSpec& spec, SearchRegion region,
                                      std::vector<std::string>* warnings = nullptr);

/// A rectangle large enough to contain every resonance of the model, from
/// the large-|z| lower bound on L_+ (zeros cannot escape to infinity).
SearchRegion fullSearchRegion(const ModelSpec& spec);

struct TrajectoryPoint {
  double epsilon;
  std::vector<Resonance> resonances;
};

struct TrajectoryResult {
  std::vector<TrajectoryPoint> points;
  std::vector<std::string> events;  // losses and merges
  double fitted_C = 0.0;            // dist <= C eps^2 fit over the trajectory
  bool terminal_near_eigenvalues = false;
};

/// Continue the resonances found at the largest epsilon down the grid by
/// Newton reseeding. eps_grid must be descending, entries in (0, 1].
TrajectoryResult traceTrajectory(const ModelSpec& spec,
                                 const std::vector<double>& eps_grid,
                                 const SearchRegion& seed_region);

}  // namespace friedrichs
