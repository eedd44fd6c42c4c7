// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace friedrichs {

RationalMatrixFunction::RationalMatrixFunction(int rows, int cols,
                                               std::vector<RationalTerm> terms)
    : rows_(rows), cols_(cols), terms_(std::move(terms)) {
  if (rows_ <= 0 || cols_ <= 0)
    throw ValidationFailure("rational function must have positive dimensions");
  for (const auto& t : terms_) {
    if (t.order < 1) throw ValidationFailure("term order must be >= 1");
    if (t.coeff.rows() != rows_ || t.coeff.cols() != cols_)
      throw ValidationFailure("term coefficient has wrong shape");
  }
}

Matrix RationalMatrixFunction::eval(Complex z) const {
  Matrix value = Matrix::Zero(rows_, cols_);
  for (const auto& t : terms_) {
    Complex d = z - t.pole;
    if (std::abs(d) < kPoleTol) {
      std::ostringstream os;
      os << "evaluation within " << kPoleTol << " of pole (" << t.pole.real()
         << ", " << t.pole.imag() << ")";
      throw PoleHit(os.str());
    }
    value += t.coeff * std::pow(d, -t.order);
  }
  return value;
}

RationalMatrixFunction RationalMatrixFunction::conjAdjoint() const {
  std::vector<RationalTerm> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_)
    terms.push_back({std::conj(t.pole), t.order, t.coeff.adjoint()});
  return RationalMatrixFunction(cols_, rows_, std::move(terms));
}

RationalMatrixFunction RationalMatrixFunction::scaled(double factor) const {
  std::vector<RationalTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return RationalMatrixFunction(rows_, cols_, std::move(terms));
}

RationalMatrixFunction RationalMatrixFunction::derivative() const {
  std::vector<RationalTerm> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_)
    terms.push_back({t.pole, t.order + 1, -static_cast<double>(t.order) * t.coeff});
  return RationalMatrixFunction(rows_, cols_, std::move(terms));
}

namespace {
void pushDistinct(std::vector<Complex>& ps, Complex p) {
  for (Complex q : ps)
    if (std::abs(q - p) < 1e-12) return;
  ps.push_back(p);
}
}  // namespace

std::vector<Complex> RationalMatrixFunction::poles() const {
  std::vector<Complex> ps;
  for (const auto& t : terms_) pushDistinct(ps, t.pole);
  return ps;
}

std::vector<Complex> RationalMatrixFunction::pairPoleSet() const {
  std::vector<Complex> ps;
  for (const auto& t : terms_) {
    pushDistinct(ps, t.pole);
    pushDistinct(ps, std::conj(t.pole));
  }
  std::sort(ps.begin(), ps.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ps;
}

double RationalMatrixFunction::distanceToPoles(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (Complex p : pairPoleSet()) d = std::min(d, std::abs(z - p));
  return d;
}

bool RationalMatrixFunction::isZero() const {
  for (const auto& t : terms_)
    if (t.coeff.cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

ModelSpec ModelSpec::make(RealVector a, RationalMatrixFunction M_base, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ValidationFailure("epsilon must lie in [0, 1]");
  if (M_base.rows() != M_base.cols())
    throw ValidationFailure("form factor must be square (dim E = dim K)");
  if (a.size() != M_base.rows())
    throw ValidationFailure("dim A and dim M mismatch");
  RationalMatrixFunction M = M_base.scaled(epsilon);
  RationalMatrixFunction Mstar = M.conjAdjoint();
  return ModelSpec{static_cast<int>(a.size()), std::move(a), epsilon,
                   std::move(M_base), std::move(M), std::move(Mstar)};
}

ModelSpec ModelSpec::withEpsilon(double eps) const {
  return ModelSpec::make(a, M_base, eps);
}

Matrix ModelSpec::G(Complex z) const { return Mstar.eval(z) * M.eval(z); }

double ModelSpec::poleDistance(Complex z) const {
  return M_base.distanceToPoles(z);
}

Matrix evalG(const RationalMatrixFunction& M, Complex z) {
  return M.conjAdjoint().eval(z) * M.eval(z);
}

bool ValidationReport::allHardPassed() const {
  for (const auto& it : items)
    if (it.hard && !it.passed) return false;
  return true;
}

std::string ValidationReport::toString() const {
  std::ostringstream os;
  for (const auto& it : items) {
    os << (it.passed ? "[pass] " : "[FAIL] ") << it.name;
    if (!it.detail.empty()) os << ": " << it.detail;
    os << "\n";
  }
  return os.str();
}

ValidationReport validateModel(const ModelSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string name, bool ok, bool hard, std::string detail) {
    report.items.push_back({std::move(name), ok, hard, std::move(detail)});
  };

  // (i) square dimensions, dim E = dim K
  {
    bool ok = spec.M_base.rows() == spec.M_base.cols() &&
              spec.a.size() == spec.M_base.rows();
    std::ostringstream os;
    os << "n = " << spec.n;
    add("dimensions: dim E = dim K = n", ok, true, os.str());
  }

  // A > 0
  {
    bool ok = spec.a.size() > 0 && (spec.a.array() > 0.0).all();
    std::ostringstream os;
    os << "a = [";
    for (int i = 0; i < spec.a.size(); ++i)
      os << (i ? ", " : "") << spec.a[i];
    os << "]";
    add("A has only positive eigenvalues", ok, true, os.str());
  }

  // (iv) no poles on the real line
  {
    bool ok = true;
    std::ostringstream os;
    for (const auto& t : spec.M_base.terms()) {
      if (std::abs(t.pole.imag()) <= kPoleTol) {
        ok = false;
        os << "pole at Re = " << t.pole.real() << " lies on the real axis; ";
      }
    }
    add("M holomorphic on the real line", ok, true, os.str());
  }

  // (iv) "no simple poles": per distinct pole the maximal order is >= 2.
  {
    bool ok = true;
    std::ostringstream os;
    for (Complex p : spec.M_base.poles()) {
      int max_order = 0;
      for (const auto& t : spec.M_base.terms())
        if (std::abs(t.pole - p) < 1e-12) max_order = std::max(max_order, t.order);
      if (max_order < 2) {
        ok = false;
        os << "pole (" << p.real() << ", " << p.imag() << ") has max order "
           << max_order << "; ";
      }
    }
    add("no simple poles (per-pole max order >= 2)", ok, true, os.str());
  }

  // nonzero coefficients and at least one term
  {
    bool ok = !spec.M_base.terms().empty();
    for (const auto& t : spec.M_base.terms())
      if (t.coeff.cwiseAbs().maxCoeff() == 0.0) ok = false;
    add("form factor terms nonzero", ok, true, "");
  }

  // (v)+(vi): invertibility sampling of M(z) at 50 pseudo-random z off P.
  // Epsilon-free: sampled on the unscaled form factor (scaling by a positive
  // epsilon does not change invertibility; epsilon = 0 is the trivial model).
  {
    std::mt19937 gen(0x5eed);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(-5.0, 5.0);
    double worst_sigma = std::numeric_limits<double>::infinity();
    double worst_cond = 0.0;
    int tested = 0;
    while (tested < 50) {
      Complex z(re(gen), im(gen));
      if (spec.M_base.distanceToPoles(z) < 1e-2) continue;
      ++tested;
      Eigen::JacobiSVD<Matrix> svd(spec.M_base.eval(z));
      double smin = svd.singularValues().minCoeff();
      double smax = svd.singularValues().maxCoeff();
      worst_sigma = std::min(worst_sigma, smin);
      worst_cond = std::max(worst_cond, smax / std::max(smin, 1e-300));
    }
    bool ok = worst_sigma > 1e-12;
    std::ostringstream os;
    os << "min sigma_min(M(z)) = " << worst_sigma << ", max cond = " << worst_cond
       << " over 50 samples";
    add("ker M(z) = {0} off P (sampled)", ok, true, os.str());
  }

  add("M(inf) = 0", true, false, "automatic: partial-fraction form has no polynomial part");
  add("(ii) H has no real eigenvalues", true, false,
      "not checked here; re-checked by the negative-axis scan in scattering");
  add("(vii) type-A holomorphy of M(z)^-1", true, false,
      "not checkable numerically beyond invertibility sampling");

  return report;
}

}  // namespace friedrichs
