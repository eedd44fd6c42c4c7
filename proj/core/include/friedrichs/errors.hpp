// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace friedrichs {

// Error categories double as CLI exit codes.
enum class ErrorCode : int {
  Parse = 2,
  Validation = 3,
  Numerical = 4,
  Identity = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorCode::Parse, m) {}
};

struct ValidationFailure : Error {
  explicit ValidationFailure(const std::string& m) : Error(ErrorCode::Validation, m) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& m) : Error(ErrorCode::Numerical, m) {}
};

// Evaluation point is within the pole-proximity tolerance of a pole of M or P.
struct PoleHit : NumericalError {
  explicit PoleHit(const std::string& m) : NumericalError(m) {}
};

// Two poles of a Cauchy kernel are too close for the three-point closed form.
struct DegenerateConfluence : NumericalError {
  explicit DegenerateConfluence(const std::string& m) : NumericalError(m) {}
};

// Kernel order sum j + k < 2: the defining integral diverges.
struct NonConvergent : NumericalError {
  explicit NonConvergent(const std::string& m) : NumericalError(m) {}
};

// Livsic matrix numerically singular (near a resonance or worse).
struct NearSingular : NumericalError {
  NearSingular(const std::string& m, double smin)
      : NumericalError(m), sigma_min(smin) {}
  double sigma_min;
};

struct BoundaryZero : NumericalError {
  explicit BoundaryZero(const std::string& m) : NumericalError(m) {}
};

struct MaxDepthExceeded : NumericalError {
  explicit MaxDepthExceeded(const std::string& m) : NumericalError(m) {}
};

struct ContinuationLost : NumericalError {
  explicit ContinuationLost(const std::string& m) : NumericalError(m) {}
};

struct NoConvergence : NumericalError {
  explicit NoConvergence(const std::string& m) : NumericalError(m) {}
};

struct TailTooFat : NumericalError {
  explicit TailTooFat(const std::string& m) : NumericalError(m) {}
};

struct ExtensionIllposed : NumericalError {
  explicit ExtensionIllposed(const std::string& m) : NumericalError(m) {}
};

// residue_SK called at a point that is not actually a pole.
struct NoPole : NumericalError {
  explicit NoPole(const std::string& m) : NumericalError(m) {}
};

// A paper identity failed beyond tolerance; signals an upstream bug.
struct IdentityViolation : Error {
  explicit IdentityViolation(const std::string& m) : Error(ErrorCode::Identity, m) {}
};

// Order-2 Laurent coefficient of S_K non-negligible; contradicts the
// simple-pole theorem.
struct HigherOrderPole : Error {
  explicit HigherOrderPole(const std::string& m) : Error(ErrorCode::Identity, m) {}
};

}  // namespace friedrichs
