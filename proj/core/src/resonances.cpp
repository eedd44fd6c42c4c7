// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace friedrichs {

namespace detail {

namespace {

struct Segment {
  Complex z0, z1;
  Complex f0, f1;
};

}  // namespace

int windingNumberOf(const std::function<Complex(Complex)>& f, const Rect& r,
                    int samples_per_edge) {
  // counterclockwise boundary
  const Complex corners[5] = {
      {r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
      {r.re_min, r.im_max}, {r.re_min, r.im_min}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    std::vector<Segment> stack;
    Complex za = corners[e], zb = corners[e + 1];
    Complex prev_z = za;
    Complex prev_f = f(za);
    for (int s = 1; s <= samples_per_edge; ++s) {
      double t = static_cast<double>(s) / samples_per_edge;
      Complex z = za + t * (zb - za);
      stack.push_back({prev_z, z, prev_f, f(z)});
      prev_z = z;
      prev_f = stack.back().f1;
    }
    // process in order; refine any step whose phase change is >= pi/2
    std::reverse(stack.begin(), stack.end());
    int refinements = 0;
    while (!stack.empty()) {
      Segment seg = stack.back();
      stack.pop_back();
      if (std::abs(seg.f0) == 0.0 || std::abs(seg.f1) == 0.0)
        throw BoundaryZero("det vanishes at a boundary sample");
      double dphase = std::arg(seg.f1 / seg.f0);
      double ratio = std::abs(seg.f1) / std::abs(seg.f0);
      // a large modulus jump can hide a full phase turn (pole or zero flyby),
      // so refine on either criterion
      if (std::abs(dphase) < kPi / 2.0 && ratio < 2.0 && ratio > 0.5) {
        total += dphase;
        continue;
      }
      if (++refinements > 400000 || std::abs(seg.z1 - seg.z0) < 1e-15)
        throw BoundaryZero("winding phase step not resolvable; zero on or near the boundary");
      Complex zm = 0.5 * (seg.z0 + seg.z1);
      Complex fm = f(zm);
      stack.push_back({zm, seg.z1, fm, seg.f1});
      stack.push_back({seg.z0, zm, seg.f0, fm});
    }
  }
  double count = total / (2.0 * kPi);
  long rounded = std::lround(count);
  if (std::abs(count - static_cast<double>(rounded)) > 0.25)
    throw NumericalError("winding number did not round to an integer");
  return static_cast<int>(rounded);
}

}  // namespace detail

namespace {

using detail::Rect;

Complex detLplus(const ModelSpec& spec, Complex z) {
  return livsicMatrix(spec, z, SheetTag::PlusContinued).partialPivLu().determinant();
}

double boundarySigmaMin(const ModelSpec& spec, const Rect& r, int samples) {
  const Complex corners[5] = {
      {r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
      {r.re_min, r.im_max}, {r.re_min, r.im_min}};
  double smin = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 4; ++e) {
    for (int s = 0; s <= samples; ++s) {
      double t = static_cast<double>(s) / samples;
      Complex z = corners[e] + t * (corners[e + 1] - corners[e]);
      Eigen::JacobiSVD<Matrix> svd(livsicMatrix(spec, z, SheetTag::PlusContinued));
      smin = std::min(smin, svd.singularValues().minCoeff());
    }
  }
  return smin;
}

// winding of det L_+ with up-to-3 1% dilations when a boundary sample sits on
// a zero; the dilated top edge stays strictly below the real axis for
// Re < 0 safety (the continued sheet is cut along (-inf, 0]).
int windingWithDilation(const ModelSpec& spec, Rect r, int samples) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (boundarySigmaMin(spec, r, samples) > 1e-9) {
      auto f = [&spec](Complex z) { return detLplus(spec, z); };
      return detail::windingNumberOf(f, r, samples);
    }
    double w = r.re_max - r.re_min, h = r.im_max - r.im_min;
    r.re_min -= 0.01 * w;
    r.re_max += 0.01 * w;
    r.im_min -= 0.01 * h;
    r.im_max = std::min(r.im_max + 0.01 * h, -1e-9);
  }
  throw BoundaryZero("boundary zero persists after 3 dilations");
}

struct NewtonOutcome {
  Complex root;
  double last_step;
};

std::optional<NewtonOutcome> newtonOnDet(const ModelSpec& spec, Complex z0,
                                         double tol, double escape_radius) {
  Complex z = z0;
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    double h = 1e-6 * std::max(1.0, std::abs(z));
    Complex f, fp;
    try {
      f = detLplus(spec, z);
      fp = (detLplus(spec, z + h) - detLplus(spec, z - h)) / (2.0 * h);
    } catch (const NumericalError&) {
      return std::nullopt;  // wandered into P or onto the cut
    }
    if (std::abs(fp) == 0.0) return std::nullopt;
    Complex step = f / fp;
    z -= step;
    last_step = std::abs(step);
    if (std::abs(z - z0) > escape_radius) return std::nullopt;
    if (last_step <= tol * std::max(1.0, std::abs(z)))
      return NewtonOutcome{z, last_step};
  }
  return std::nullopt;
}

double distanceToFeatures(Complex z, const std::vector<Complex>& features) {
  double d = std::numeric_limits<double>::infinity();
  for (Complex p : features) d = std::min(d, std::abs(z - p));
  // distance to the cut (-inf, 0] of the continued sheet
  double dcut = (z.real() <= 0.0) ? std::abs(z.imag()) : std::abs(z);
  return std::min(d, dcut);
}

// carve a 1e-3 margin box around every member of P out of the rectangle
// (R and P are disjoint, so no zero is lost)
std::vector<Rect> carvePoleBoxes(const ModelSpec& spec, Rect top,
                                 std::vector<std::string>* warnings) {
  const double margin = 1e-3;
  std::vector<Rect> pieces{top};
  for (Complex p : spec.poleSet()) {
    Rect box{p.real() - margin, p.real() + margin, p.imag() - margin,
             p.imag() + margin};
    std::vector<Rect> next;
    bool carved = false;
    for (const Rect& r : pieces) {
      if (box.re_max <= r.re_min || box.re_min >= r.re_max ||
          box.im_max <= r.im_min || box.im_min >= r.im_max) {
        next.push_back(r);
        continue;
      }
      carved = true;
      auto push = [&next](double a, double b, double c, double d) {
        if (b - a > 1e-12 && d - c > 1e-12) next.push_back({a, b, c, d});
      };
      push(r.re_min, std::max(r.re_min, box.re_min), r.im_min, r.im_max);
      push(std::min(r.re_max, box.re_max), r.re_max, r.im_min, r.im_max);
      double mid_lo = std::max(r.re_min, box.re_min);
      double mid_hi = std::min(r.re_max, box.re_max);
      push(mid_lo, mid_hi, r.im_min, std::max(r.im_min, box.im_min));
      push(mid_lo, mid_hi, std::min(r.im_max, box.im_max), r.im_max);
    }
    if (carved && warnings) {
      std::ostringstream os;
      os << "search region carved around pole (" << p.real() << ", " << p.imag()
         << ") with 1e-3 margin";
      warnings->push_back(os.str());
    }
    pieces = std::move(next);
  }
  return pieces;
}

Matrix contourResidueLinv(const ModelSpec& spec, Complex zeta, double radius) {
  const int nodes = 64;
  Matrix acc = Matrix::Zero(spec.n, spec.n);
  for (int k = 0; k < nodes; ++k) {
    double theta = 2.0 * kPi * (k + 0.5) / nodes;
    Complex e{std::cos(theta), std::sin(theta)};
    acc += livsicInverse(spec, zeta + radius * e, SheetTag::PlusContinued) * e;
  }
  return acc * (radius / nodes);
}

void subdivide(const ModelSpec& spec, const Rect& r, int depth,
               const SearchRegion& region, std::vector<Complex>& roots,
               std::vector<Rect>& unresolved) {
  int w = windingWithDilation(spec, r, region.boundary_samples_per_edge);
  if (w == 0) return;
  double diag = std::hypot(r.re_max - r.re_min, r.im_max - r.im_min);
  if (w == 1 || depth >= region.max_depth) {
    Complex center{0.5 * (r.re_min + r.re_max), 0.5 * (r.im_min + r.im_max)};
    auto outcome = newtonOnDet(spec, center, region.newton_tol, 10.0 * diag + 1.0);
    if (outcome) {
      double pad = 0.1 * diag + 1e-12;
      Complex z = outcome->root;
      bool inside = z.real() >= r.re_min - pad && z.real() <= r.re_max + pad &&
                    z.imag() >= r.im_min - pad && z.imag() <= r.im_max + pad;
      if (inside && w == 1) {
        roots.push_back(z);
        return;
      }
      if (inside && depth >= region.max_depth) {
        // cell still holds w > 1 zeros; accept only a genuine multiple zero
        // (small-box winding matches), otherwise report the cell unresolved
        double half = std::max(1e-7, 1e-4 * std::max(1.0, std::abs(z)));
        Rect box{z.real() - half, z.real() + half, z.imag() - half,
                 z.imag() + half};
        auto f = [&spec](Complex zz) { return detLplus(spec, zz); };
        int wb = detail::windingNumberOf(f, box, region.boundary_samples_per_edge);
        if (wb == w) {
          roots.push_back(z);
          return;
        }
      }
    }
    if (depth >= region.max_depth) {
      unresolved.push_back(r);
      return;
    }
  }
  double rm = 0.5 * (r.re_min + r.re_max);
  double im = 0.5 * (r.im_min + r.im_max);
  // fixed quadrant order keeps the output deterministic
  subdivide(spec, {r.re_min, rm, r.im_min, im}, depth + 1, region, roots, unresolved);
  subdivide(spec, {rm, r.re_max, r.im_min, im}, depth + 1, region, roots, unresolved);
  subdivide(spec, {r.re_min, rm, im, r.im_max}, depth + 1, region, roots, unresolved);
  subdivide(spec, {rm, r.re_max, im, r.im_max}, depth + 1, region, roots, unresolved);
}

}  // namespace

int windingNumber(const ModelSpec& spec, const SearchRegion& region) {
  Rect r{region.re_min, region.re_max, region.im_min, region.im_max};
  return windingWithDilation(spec, r, region.boundary_samples_per_edge);
}

int windingNumberCarved(const ModelSpec& spec, const SearchRegion& region) {
  std::vector<Rect> pieces = carvePoleBoxes(
      spec, {region.re_min, region.re_max, region.im_min, region.im_max}, nullptr);
  int total = 0;
  for (const Rect& r : pieces)
    total += windingWithDilation(spec, r, region.boundary_samples_per_edge);
  return total;
}

SearchRegion fullSearchRegion(const ModelSpec& spec) {
  double amax = spec.a.maxCoeff();
  double pre = 0.0, pim = 0.0;
  for (Complex p : spec.poleSet()) {
    pre = std::max(pre, std::abs(p.real()));
    pim = std::max(pim, std::abs(p.imag()));
  }
  SearchRegion r;
  r.re_min = -(pre + 3.0);
  r.re_max = amax + pre + 4.0;
  r.im_min = -(pim + 3.0);
  r.im_max = -1e-8;
  return r;
}

std::vector<Resonance> findResonances(const ModelSpec& spec, SearchRegion region,
                                      std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max))
    throw NumericalError("empty search region");
  if (region.im_max > -1e-8) {
    region.im_max = -1e-8;
    warn("region im_max clamped to -1e-8");
  }

  std::vector<Rect> pieces =
      carvePoleBoxes(spec, {region.re_min, region.re_max, region.im_min,
                            region.im_max}, warnings);
  if (pieces.empty())
    throw NumericalError("search region vanished after pole-margin carving");

  std::vector<Complex> roots;
  std::vector<Rect> unresolved;
  for (const Rect& piece : pieces)
    subdivide(spec, piece, 0, region, roots, unresolved);
  if (!unresolved.empty()) {
    std::ostringstream os;
    os << unresolved.size() << " sub-rectangle(s) unresolved at max depth:";
    for (const auto& r : unresolved)
      os << " [" << r.re_min << "," << r.re_max << "]x[" << r.im_min << ","
         << r.im_max << "]";
    throw MaxDepthExceeded(os.str());
  }

  // dedupe Newton results that landed on the same zero
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> unique;
  for (Complex z : roots) {
    bool dup = false;
    for (Complex u : unique)
      if (std::abs(z - u) < 1e-8 * std::max(1.0, std::abs(z))) dup = true;
    if (!dup) unique.push_back(z);
  }

  std::vector<Resonance> out;
  std::vector<Complex> features = spec.poleSet();
  for (Complex z : unique) {
    if (z.imag() >= 0.0) {
      warn("dropped a root continued out of the lower half plane");
      continue;
    }
    auto polished = newtonOnDet(spec, z, region.newton_tol, 1.0);
    Complex zeta = polished ? polished->root : z;
    double residual = polished ? polished->last_step : 0.0;

    Eigen::JacobiSVD<Matrix> svd(livsicMatrix(spec, zeta, SheetTag::PlusContinued),
                                 Eigen::ComputeFullV);
    int d = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] <= 1e-8) ++d;
    if (d == 0) {
      warn("dropped a Newton root with sigma_min > 1e-8 (not a kernel point)");
      continue;
    }
    Matrix kernel = svd.matrixV().rightCols(d);

    std::vector<Complex> others = features;
    for (Complex u : unique)
      if (std::abs(u - zeta) > 1e-8) others.push_back(u);
    double dist = distanceToFeatures(zeta, others);
    double r_res = std::min(1e-2, 0.5 * dist);

    Resonance res;
    res.zeta = zeta;
    res.kernel_basis = kernel;
    res.geometric_multiplicity = d;
    res.residue_Linv = contourResidueLinv(spec, zeta, r_res);
    res.newton_residual = residual;

    // winding count of a small box isolating this zero
    double half = std::min(1e-4 * std::max(1.0, std::abs(zeta)), 0.45 * dist);
    half = std::max(half, 1e-7);
    Rect box{zeta.real() - half, zeta.real() + half, zeta.imag() - half,
             zeta.imag() + half};
    auto f = [&](Complex w) { return detLplus(spec, w); };
    res.winding_multiplicity =
        detail::windingNumberOf(f, box, region.boundary_samples_per_edge);
    out.push_back(std::move(res));
  }
  std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) {
    return a.zeta.real() != b.zeta.real() ? a.zeta.real() < b.zeta.real()
                                          : a.zeta.imag() < b.zeta.imag();
  });
  return out;
}

TrajectoryResult traceTrajectory(const ModelSpec& spec,
                                 const std::vector<double>& eps_grid,
                                 const SearchRegion& seed_region) {
  if (eps_grid.empty()) throw NumericalError("empty epsilon grid");
  for (size_t i = 0; i < eps_grid.size(); ++i) {
    if (eps_grid[i] <= 0.0 || eps_grid[i] > 1.0)
      throw NumericalError("epsilon grid entries must lie in (0, 1]");
    if (i > 0 && eps_grid[i] >= eps_grid[i - 1])
      throw NumericalError("epsilon grid must be strictly descending");
  }

  TrajectoryResult result;
  ModelSpec current = spec.withEpsilon(eps_grid[0]);
  std::vector<Resonance> live = findResonances(current, seed_region);
  result.points.push_back({eps_grid[0], live});

  for (size_t k = 1; k < eps_grid.size(); ++k) {
    ModelSpec next = spec.withEpsilon(eps_grid[k]);
    std::vector<Resonance> continued;
    for (const Resonance& res : live) {
      auto outcome = newtonOnDet(next, res.zeta, seed_region.newton_tol, 1.0);
      if (!outcome) {
        std::ostringstream os;
        os << "continuation lost at eps = " << eps_grid[k] << " from zeta = ("
           << res.zeta.real() << ", " << res.zeta.imag() << ")";
        result.events.push_back(os.str());
        throw ContinuationLost(os.str());
      }
      if (outcome->root.imag() >= 0.0) {
        std::ostringstream os;
        os << "root left C_- at eps = " << eps_grid[k];
        result.events.push_back(os.str());
        throw ContinuationLost(os.str());
      }
      bool merged = false;
      for (const Resonance& c : continued)
        if (std::abs(c.zeta - outcome->root) < 1e-10) merged = true;
      if (merged) {
        std::ostringstream os;
        os << "two trajectories merged at eps = " << eps_grid[k];
        result.events.push_back(os.str());
        continue;
      }
      Resonance r = res;
      r.zeta = outcome->root;
      r.newton_residual = outcome->last_step;
      Eigen::JacobiSVD<Matrix> svd(
          livsicMatrix(next, r.zeta, SheetTag::PlusContinued), Eigen::ComputeFullV);
      int d = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] <= 1e-8) ++d;
      r.geometric_multiplicity = std::max(d, 1);
      r.kernel_basis = svd.matrixV().rightCols(std::max(d, 1));
      continued.push_back(std::move(r));
    }
    live = std::move(continued);
    result.points.push_back({eps_grid[k], live});
  }

  // fit dist <= C eps^2 over the earlier points, check it at the terminal one
  auto nearestEigDist = [&](Complex z) {
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.a.size(); ++j) d = std::min(d, std::abs(z - spec.a[j]));
    return d;
  };
  double C = 0.0;
  for (size_t k = 0; k + 1 < result.points.size(); ++k)
    for (const Resonance& r : result.points[k].resonances)
      C = std::max(C, nearestEigDist(r.zeta) /
                          (result.points[k].epsilon * result.points[k].epsilon));
  result.fitted_C = C;
  result.terminal_near_eigenvalues = true;
  const auto& last = result.points.back();
  for (const Resonance& r : last.resonances)
    if (nearestEigDist(r.zeta) > 2.0 * C * last.epsilon * last.epsilon + 1e-12)
      result.terminal_near_eigenvalues = false;
  return result;
}

}  // namespace friedrichs
