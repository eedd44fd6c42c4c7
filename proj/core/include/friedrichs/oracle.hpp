// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "friedrichs/model.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

/// Brute-force Phi: panel-doubling composite Simpson of the defining integral
/// int_0^inf M(l)^* M(l) / (z - l) dl on a tan-compactified axis, doubling
/// until the relative change is <= rel_tol. Throws NoConvergence after 20
/// doublings. Independent of the closed-form path in stieltjes.
Matrix phiQuadrature(const ModelSpec& spec, Complex z, double rel_tol = 1e-11);

/// Finite-rank discretization of H: midpoint nodes l_i on [0, lambda_cut]
/// with weights w_i, each node carrying a K fiber coupled to E by
/// sqrt(w_i) M(l_i). Returns the lower-right n x n block of (z - H_N)^-1,
/// i.e. the discretized partial resolvent. The sparse arrow system is solved
/// with SparseLU.
Matrix discretizedPartialResolvent(const ModelSpec& spec, Complex z, int N,
                                   double lambda_cut);

/// Dense assembly of the discretized Hamiltonian (for small N sanity checks).
Matrix discretizedHamiltonian(const ModelSpec& spec, int N, double lambda_cut);

/// Locally adaptive Simpson quadrature for matrix-valued integrands
/// (Frobenius-norm error control); used by the moment and identity checks.
Matrix adaptiveIntegrate(const std::function<Matrix(double)>& f, double a,
                         double b, double tol, int max_depth = 48);

Complex adaptiveIntegrateScalar(const std::function<Complex(double)>& f,
                                double a, double b, double tol,
                                int max_depth = 48);

/// Piecewise variant: adaptive Simpson on each consecutive knot pair. Use
/// knots to pin features (resonance bumps, scale changes) that a coarse
/// initial Simpson stencil would miss.
Matrix adaptiveIntegrateKnots(const std::function<Matrix(double)>& f,
                              const std::vector<double>& knots, double tol,
                              int max_depth = 48);

/// Knots for spectral-density style integrands on [lo, hi]: geometric
/// coverage plus a window around each eigenvalue of A.
std::vector<double> spectralKnots(const ModelSpec& spec, double lo, double hi);

}  // namespace friedrichs
