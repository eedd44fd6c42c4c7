// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace friedrichs {

namespace {

constexpr double kConfluenceTol = 1e-10;

Complex ipow(Complex w, int k) {
  // integer powers by repeated multiplication; branch-free and exact enough
  // for the small orders that occur here
  if (k < 0) return 1.0 / ipow(w, -k);
  Complex r = 1.0;
  while (k-- > 0) r *= w;
  return r;
}

// Log(-w) with the principal branch and a fixed convention on the cut:
// for w on (0, inf) the value is log w + i*pi, i.e. the w approached from
// Im w < 0 side. Signed zeros in w.imag() are deliberately ignored.
Complex logMinus(Complex w) {
  if (w.imag() == 0.0) {
    if (w.real() > 0.0) return {std::log(w.real()), kPi};
    return {std::log(-w.real()), 0.0};
  }
  return std::log(-w);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

void requireOffRay(Complex w, const char* what) {
  if (w.imag() == 0.0 && w.real() >= 0.0) {
    std::ostringstream os;
    os << what << " = (" << w.real() << ", " << w.imag() << ") lies on [0, inf)";
    throw NumericalError(os.str());
  }
}

}  // namespace

Complex productCauchyIntegral(const std::vector<std::pair<Complex, int>>& poles) {
  int total_order = 0;
  for (const auto& [w, k] : poles) total_order += k;
  if (total_order < 2)
    throw NonConvergent("product Cauchy integral needs total order >= 2");

  // Partial fractions: f(l) = sum_r sum_m c_{r,m} (l - w_r)^{-m} with
  // c_{r,m} the Taylor coefficient of order k_r - m at w_r of the product of
  // the remaining factors. Taylor series of (l - w_i)^{-k} about w_r:
  //   coeff_l = (-1)^l binom(k+l-1, l) (w_r - w_i)^{-k-l}.
  Complex result = 0.0;
  std::vector<Complex> log_coeffs(poles.size());
  for (size_t r = 0; r < poles.size(); ++r) {
    const auto [wr, kr] = poles[r];
    std::vector<Complex> series(kr, Complex{0.0, 0.0});
    series[0] = 1.0;
    for (size_t i = 0; i < poles.size(); ++i) {
      if (i == r) continue;
      const auto [wi, ki] = poles[i];
      Complex d = wr - wi;
      std::vector<Complex> factor(kr);
      for (int l = 0; l < kr; ++l)
        factor[l] = ((l % 2 == 0) ? 1.0 : -1.0) * binomial(ki + l - 1, l) *
                    ipow(d, -ki - l);
      std::vector<Complex> conv(kr, Complex{0.0, 0.0});
      for (int a = 0; a < kr; ++a)
        for (int b = 0; a + b < kr; ++b) conv[a + b] += series[a] * factor[b];
      series.swap(conv);
    }
    // orders m >= 2: int_0^inf (l-w)^{-m} dl = (-w)^{1-m} / (m-1)
    for (int m = 2; m <= kr; ++m)
      result += series[kr - m] * ipow(-wr, 1 - m) / static_cast<double>(m - 1);
    log_coeffs[r] = series[kr - 1];
  }

  // Order-1 coefficients sum to zero (integrand decays like l^{-total});
  // group them against a reference log so the cancellation is explicit.
  Complex ref = logMinus(poles[0].first);
  for (size_t r = 0; r < poles.size(); ++r)
    result -= log_coeffs[r] * (logMinus(poles[r].first) - ref);
  return result;
}

Complex cauchyKernel(Complex p, int j, Complex q, int k, Complex z) {
  if (j < 1 || k < 1 || j + k < 2)
    throw NonConvergent("cauchy kernel needs j, k >= 1 and j + k >= 2");
  requireOffRay(p, "p");
  requireOffRay(q, "q");
  requireOffRay(z, "z");
  if (std::abs(z - p) < kConfluenceTol || std::abs(z - q) < kConfluenceTol ||
      std::abs(p - q) < kConfluenceTol)
    throw DegenerateConfluence("kernel points closer than 1e-10; perturb or use the confluent form");
  // 1/(z-l) = -1/(l-z)
  return -productCauchyIntegral({{z, 1}, {p, j}, {q, k}});
}

Complex cauchyKernelConfluent(Complex p, int m, Complex z) {
  if (m < 2) throw NonConvergent("confluent kernel needs m >= 2");
  requireOffRay(p, "p");
  requireOffRay(z, "z");
  if (std::abs(z - p) < kConfluenceTol)
    throw DegenerateConfluence("kernel points closer than 1e-10");
  return -productCauchyIntegral({{z, 1}, {p, m}});
}

Matrix phi(const ModelSpec& spec, Complex z, SheetTag sheet) {
  if (std::abs(z) == 0.0)
    throw NumericalError("phi has a branch point at z = 0");
  if (spec.poleDistance(z) <= kConfluenceTol) {
    std::ostringstream os;
    os << "phi evaluation within 1e-10 of the pole set at z = (" << z.real()
       << ", " << z.imag() << ")";
    throw PoleHit(os.str());
  }

  const int n = spec.n;
  Matrix raw = Matrix::Zero(n, n);
  for (const auto& s : spec.Mstar.terms()) {
    if (s.coeff.cwiseAbs().maxCoeff() == 0.0) continue;
    for (const auto& t : spec.M.terms()) {
      if (t.coeff.cwiseAbs().maxCoeff() == 0.0) continue;
      Complex kernel;
      if (std::abs(s.pole - t.pole) <= kConfluenceTol) {
        Complex merged = 0.5 * (s.pole + t.pole);
        kernel = -productCauchyIntegral({{z, 1}, {merged, s.order + t.order}});
      } else {
        kernel = -productCauchyIntegral({{z, 1}, {s.pole, s.order}, {t.pole, t.order}});
      }
      raw += kernel * (s.coeff * t.coeff);
    }
  }

  switch (sheet) {
    case SheetTag::FirstSheet:
      return raw;
    case SheetTag::PlusContinued:
      // continuation of Phi|C+ across R_+: subtract the jump below the axis
      if (z.imag() > 0.0) return raw;
      return raw - 2.0 * kPi * kI * spec.G(z);
    case SheetTag::MinusContinued:
      if (z.imag() > 0.0) return raw + 2.0 * kPi * kI * spec.G(z);
      return raw;
  }
  return raw;  // unreachable
}

Matrix phiDerivative(const ModelSpec& spec, Complex z, SheetTag sheet) {
  if (spec.poleDistance(z) <= kConfluenceTol)
    throw PoleHit("phi derivative evaluation too close to the pole set");

  const int n = spec.n;
  Matrix raw = Matrix::Zero(n, n);
  for (const auto& s : spec.Mstar.terms()) {
    if (s.coeff.cwiseAbs().maxCoeff() == 0.0) continue;
    for (const auto& t : spec.M.terms()) {
      if (t.coeff.cwiseAbs().maxCoeff() == 0.0) continue;
      Complex kernel;
      if (std::abs(s.pole - t.pole) <= kConfluenceTol) {
        Complex merged = 0.5 * (s.pole + t.pole);
        kernel = -productCauchyIntegral({{z, 2}, {merged, s.order + t.order}});
      } else {
        kernel = -productCauchyIntegral({{z, 2}, {s.pole, s.order}, {t.pole, t.order}});
      }
      raw += kernel * (s.coeff * t.coeff);
    }
  }

  auto jumpDerivative = [&] {
    // d/dz of 2 pi i M(conj z)^* M(z) by the product rule
    Matrix Ms = spec.Mstar.eval(z);
    Matrix Mv = spec.M.eval(z);
    Matrix Msd = spec.Mstar.derivative().eval(z);
    Matrix Mvd = spec.M.derivative().eval(z);
    return Matrix(2.0 * kPi * kI * (Msd * Mv + Ms * Mvd));
  };
  switch (sheet) {
    case SheetTag::FirstSheet:
      return raw;
    case SheetTag::PlusContinued:
      if (z.imag() > 0.0) return raw;
      return raw - jumpDerivative();
    case SheetTag::MinusContinued:
      if (z.imag() > 0.0) return raw + jumpDerivative();
      return raw;
  }
  return raw;  // unreachable
}

}  // namespace friedrichs
