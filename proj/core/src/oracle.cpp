// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace friedrichs {

namespace {

// integrand of Phi on the tan-compactified half line; zero limit at the end
Matrix phiIntegrandTheta(const ModelSpec& spec, Complex z, double theta) {
  if (theta >= kPi / 2.0 - 1e-12) return Matrix::Zero(spec.n, spec.n);
  double lambda = std::tan(theta);
  double jac = 1.0 + lambda * lambda;  // sec^2
  return spec.G(lambda) * (jac / (z - lambda));
}

}  // namespace

Matrix phiQuadrature(const ModelSpec& spec, Complex z, double rel_tol) {
  const double b = kPi / 2.0;
  int panels = 16;
  Matrix prev;
  // composite Simpson with 2*panels subintervals, panel count doubling
  auto composite = [&](int np) {
    int m = 2 * np;
    double h = b / m;
    Matrix sum = phiIntegrandTheta(spec, z, 0.0) + phiIntegrandTheta(spec, z, b);
    for (int i = 1; i < m; ++i)
      sum += phiIntegrandTheta(spec, z, i * h) * (i % 2 ? 4.0 : 2.0);
    return Matrix(sum * (h / 3.0));
  };
  prev = composite(panels);
  for (int doubling = 0; doubling < 20; ++doubling) {
    panels *= 2;
    Matrix cur = composite(panels);
    double change = (cur - prev).norm();
    double scale = std::max(cur.norm(), 1e-300);
    prev = std::move(cur);
    if (change <= rel_tol * scale) return prev;
  }
  std::ostringstream os;
  os << "phi quadrature did not converge after 20 doublings at z = ("
     << z.real() << ", " << z.imag() << ")";
  throw NoConvergence(os.str());
}

Matrix discretizedHamiltonian(const ModelSpec& spec, int N, double lambda_cut) {
  const int n = spec.n;
  const int dim = N * n + n;
  const double w = lambda_cut / N;
  Matrix H = Matrix::Zero(dim, dim);
  for (int i = 0; i < N; ++i) {
    double lam = (i + 0.5) * w;
    for (int c = 0; c < n; ++c) H(i * n + c, i * n + c) = lam;
    Matrix coupling = std::sqrt(w) * spec.M.eval(lam);
    H.block(i * n, N * n, n, n) = coupling;
    H.block(N * n, i * n, n, n) = coupling.adjoint();
  }
  for (int j = 0; j < n; ++j) H(N * n + j, N * n + j) = spec.a[j];
  return H;
}

Matrix discretizedPartialResolvent(const ModelSpec& spec, Complex z, int N,
                                   double lambda_cut) {
  if (N < 1) throw NumericalError("discretization needs N >= 1");
  const int n = spec.n;
  const int dim = N * n + n;
  const double w = lambda_cut / N;

  Eigen::SparseMatrix<Complex> A(dim, dim);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(dim) + 2 * static_cast<size_t>(N) * n * n + n * n);
  for (int i = 0; i < N; ++i) {
    double lam = (i + 0.5) * w;
    for (int c = 0; c < n; ++c) trip.emplace_back(i * n + c, i * n + c, z - lam);
    Matrix coupling = std::sqrt(w) * spec.M.eval(lam);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        trip.emplace_back(i * n + r, N * n + c, -coupling(r, c));
        trip.emplace_back(N * n + c, i * n + r, -std::conj(coupling(r, c)));
      }
  }
  for (int j = 0; j < n; ++j)
    trip.emplace_back(N * n + j, N * n + j, z - spec.a[j]);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("sparse factorization of z - H_N failed");

  Matrix rhs = Matrix::Zero(dim, n);
  for (int j = 0; j < n; ++j) rhs(N * n + j, j) = 1.0;
  Matrix sol = lu.solve(rhs);
  return sol.block(N * n, 0, n, n);
}

namespace {

struct SimpsonWorkspace {
  const std::function<Matrix(double)>* f;
  double tol;
  int max_depth;
};

Matrix simpsonStep(const SimpsonWorkspace& ws, double a, double b, const Matrix& fa,
                   const Matrix& fm, const Matrix& fb, const Matrix& whole,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Matrix flm = (*ws.f)(lm), frm = (*ws.f)(rm);
  Matrix left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
  Matrix right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
  Matrix sum = left + right;
  double err = (sum - whole).norm();
  if (err <= 15.0 * ws.tol || depth >= ws.max_depth)
    return sum + (sum - whole) / 15.0;
  SimpsonWorkspace half = ws;
  half.tol = 0.5 * ws.tol;
  return simpsonStep(half, a, m, fa, flm, fm, left, depth + 1) +
         simpsonStep(half, m, b, fm, frm, fb, right, depth + 1);
}

}  // namespace

Matrix adaptiveIntegrate(const std::function<Matrix(double)>& f, double a,
                         double b, double tol, int max_depth) {
  Matrix fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  Matrix whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
  SimpsonWorkspace ws{&f, tol, max_depth};
  return simpsonStep(ws, a, b, fa, fm, fb, whole, 0);
}


Matrix adaptiveIntegrateKnots(const std::function<Matrix(double)>& f,
                              const std::vector<double>& knots, double tol,
                              int max_depth) {
  if (knots.size() < 2) throw NumericalError("need at least two knots");
  Matrix acc = adaptiveIntegrate(f, knots[0], knots[1], tol, max_depth);
  for (size_t i = 1; i + 1 < knots.size(); ++i)
    acc += adaptiveIntegrate(f, knots[i], knots[i + 1], tol, max_depth);
  return acc;
}

std::vector<double> spectralKnots(const ModelSpec& spec, double lo, double hi) {
  std::vector<double> knots{lo};
  for (double x = std::max(lo * 4.0, 1e-6); x < hi; x *= 4.0) knots.push_back(x);
  for (int j = 0; j < spec.a.size(); ++j) {
    double a = spec.a[j];
    for (double d : {-0.5, -0.05, 0.05, 0.5}) {
      double x = a + d;
      if (x > lo && x < hi) knots.push_back(x);
    }
  }
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              knots.end());
  return knots;
}

Complex adaptiveIntegrateScalar(const std::function<Complex(double)>& f,
                                double a, double b, double tol, int max_depth) {
  auto wrap = [&f](double x) {
    Matrix m(1, 1);
    m(0, 0) = f(x);
    return m;
  };
  return adaptiveIntegrate(wrap, a, b, tol, max_depth)(0, 0);
}

}  // namespace friedrichs
