// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/types.hpp"

namespace friedrichs {

/// Branch selector for Phi on the log Riemann surface.
///   FirstSheet     Phi holomorphic on C cut along [0, inf). Evaluated at a
///                  real lambda > 0 the closed form yields the lambda - i0
///                  boundary value (principal log convention).
///   PlusContinued  the continuation of Phi restricted to C_+ across R_+;
///                  single analytic function on C_+ united with the cut plane
///                  C \ (-inf, 0]. At real lambda it yields Phi_+(lambda - i0)
///                  boundary values (= Phi_+(lambda + i0) for lambda > 0).
///   MinusContinued mirror image for Phi restricted to C_-.
enum class SheetTag { FirstSheet, PlusContinued, MinusContinued };

/// Closed form of I = int_0^inf dl / ((z-l)(l-p)^j (l-q)^k) by partial
/// fractions in l and termwise integration; the order-1 coefficients are
/// grouped through principal logs (their sum vanishes for a convergent
/// integrand). Throws DegenerateConfluence if |z-p|, |z-q| or |p-q| < 1e-10
/// and NonConvergent if j + k < 2.
Complex cauchyKernel(Complex p, int j, Complex q, int k, Complex z);

/// Confluent variant for p == q: I = int_0^inf dl / ((z-l)(l-p)^m), m >= 2.
Complex cauchyKernelConfluent(Complex p, int m, Complex z);

/// int_0^inf prod_i (l - w_i)^(-k_i) dl for pairwise distinct w_i off
/// [0, inf) (w_i on (0, inf) is permitted and yields the l - i0 limit) with
/// sum k_i >= 2. Building block shared by the kernels and phi.
Complex productCauchyIntegral(const std::vector<std::pair<Complex, int>>& poles);

/// Phi(z) = int_0^inf M(l)^* M(l) / (z - l) dl on the selected sheet,
/// assembled from term-pair closed forms. Confluent pole pairs of
/// {M(conj z)^*, M(z)} are merged exactly.
Matrix phi(const ModelSpec& spec, Complex z, SheetTag sheet);

/// d Phi / dz in closed form (the z-pole order is raised to 2).
Matrix phiDerivative(const ModelSpec& spec, Complex z, SheetTag sheet);

}  // namespace friedrichs
