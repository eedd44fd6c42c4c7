// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <Eigen/Dense>

namespace friedrichs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace friedrichs
