#include "polyplane/scmap.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "polyplane/errors.hpp"

namespace polyplane {

namespace {

using Complex = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Gauss-Jacobi panels.  Nodes and weights for the weight (1-x)^a (1+x)^b on
// [-1,1] come from the Golub-Welsch eigenvalue problem for the Jacobi
// recurrence; Eigen's symmetric solver does the work.  Rules are cached by
// exponent pair (only a handful occur: -1/2, 0, +1/2 at either end).
// ---------------------------------------------------------------------------

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule make_gauss_jacobi(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      J(k, k) = (b - a) / (a + b + 2.0);
    } else {
      double s = 2.0 * k + a + b;
      J(k, k) = (b * b - a * a) / (s * (s + 2.0));
    }
    if (k >= 1) {
      double beta;
      if (k == 1) {
        beta = 4.0 * (a + 1.0) * (b + 1.0) /
               ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
      } else {
        double s = 2.0 * k + a + b;
        beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
               (s * s * (s + 1.0) * (s - 1.0));
      }
      J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
               std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

constexpr int kPanelOrder = 24;

const QuadratureRule& rule_for(double a, double b) {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::pair<int, int> key(static_cast<int>(std::lround(2.0 * a)),
                          static_cast<int>(std::lround(2.0 * b)));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, make_gauss_jacobi(kPanelOrder, a, b)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// The Schwarz-Christoffel integrand prod (zeta - x_j)^(alpha_j - 1) over the
// finite prevertices, with principal-branch powers.  Principal powers agree
// with the boundary values from the upper half-plane, so the same expression
// serves on the real axis and along paths into the interior.
// ---------------------------------------------------------------------------

struct Integrand {
  const std::vector<double>& x;      // finite prevertices, increasing
  const std::vector<double>& alpha;  // exponents for those slots

  // Product with the factors belonging to slots skip1/skip2 removed (they are
  // absorbed into a Gauss-Jacobi weight at a panel endpoint).
  Complex regular_part(Complex zeta, int skip1, int skip2) const {
    Complex prod(1.0, 0.0);
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
      if (j == skip1 || j == skip2) continue;
      double e = alpha[j] - 1.0;
      if (e == 0.0) continue;
      Complex d = zeta - x[j];
      if (e == 0.5)
        prod *= std::sqrt(d);
      else if (e == -0.5)
        prod /= std::sqrt(d);
      else
        prod *= std::pow(d, e);
    }
    return prod;
  }

  double exponent(int slot) const { return slot >= 0 ? alpha[slot] - 1.0 : 0.0; }
};

// One Gauss-Jacobi panel over the straight segment [u, v].  If an endpoint
// is the prevertex with index su / sv, its power of the integrand moves into
// the quadrature weight; a -1 index marks a regular endpoint.
Complex panel(const Integrand& f, Complex u, Complex v, int su, int sv) {
  double eu = f.exponent(su);
  double ev = f.exponent(sv);
  const QuadratureRule& r = rule_for(ev, eu);
  Complex mid = 0.5 * (u + v);
  Complex hd = 0.5 * (v - u);
  Complex sum(0.0, 0.0);
  for (int i = 0; i < kPanelOrder; ++i)
    sum += r.weights[i] * f.regular_part(mid + hd * r.nodes[i], su, sv);
  // zeta - u = hd (1 + s) and zeta - v = -hd (1 - s), so the extracted powers
  // contribute hd^eu and (-hd)^ev beyond the hd from dzeta.  Boundary values
  // are limits from the upper half-plane, so a negative real base must keep a
  // +0 imaginary part lest pow land on the wrong side of its cut.
  Complex pre = hd;
  if (eu != 0.0) pre *= std::pow(hd, eu);
  if (ev != 0.0) {
    Complex neg = -hd;
    if (neg.imag() == 0.0) neg = Complex(neg.real(), 0.0);
    pre *= std::pow(neg, ev);
  }
  return pre * sum;
}

// Adaptive bisection: accept the two-half refinement once it agrees with the
// single panel; otherwise recurse.  Depth exhaustion means the integrand is
// effectively singular inside the segment.
Complex integrate_segment(const Integrand& f, Complex u, Complex v, int su,
                          int sv, int depth) {
  Complex whole = panel(f, u, v, su, sv);
  Complex mid = 0.5 * (u + v);
  Complex halves = panel(f, u, mid, su, -1) + panel(f, mid, v, -1, sv);
  if (std::abs(whole - halves) <= 1e-12 * std::max(1.0, std::abs(halves)))
    return halves;
  if (depth <= 0)
    fail("QuadratureFailure",
         "adaptive refinement of the boundary-map integral stalled");
  return integrate_segment(f, u, mid, su, -1, depth - 1) +
         integrate_segment(f, mid, v, -1, sv, depth - 1);
}

constexpr int kMaxDepth = 48;

// ---------------------------------------------------------------------------
// Parameter problem.  Vertices are listed with the last one carried by the
// prevertex at infinity; the first two finite prevertices sit at 0 and 1 and
// the remaining gaps are unknowns, kept positive through log coordinates.
// Matching the finite side-length ratios determines the gaps; the two sides
// adjacent to infinity then come out right by closure of the image polygon.
// ---------------------------------------------------------------------------

struct PolygonProblem {
  std::vector<Complex> verts;
  std::vector<double> alpha;
};

std::vector<double> prevertices_from_gaps(const Eigen::VectorXd& y) {
  std::vector<double> x = {0.0, 1.0};
  double acc = 1.0;
  for (int i = 0; i < y.size(); ++i) {
    acc += std::exp(y(i));
    x.push_back(acc);
  }
  return x;
}

// Finite side integrals I_0 .. I_{m-2} for finite prevertices x.
std::vector<Complex> side_integrals(const std::vector<double>& x,
                                    const std::vector<double>& alpha) {
  Integrand f{x, alpha};
  std::vector<Complex> I;
  for (int k = 0; k + 1 < static_cast<int>(x.size()); ++k)
    I.push_back(integrate_segment(f, Complex(x[k], 0.0), Complex(x[k + 1], 0.0),
                                  k, k + 1, kMaxDepth));
  return I;
}

SCHexagon assemble_solution(const PolygonProblem& P,
                            const std::vector<double>& x) {
  std::vector<double> finite_alpha(P.alpha.begin(), P.alpha.end() - 1);
  std::vector<Complex> I = side_integrals(x, finite_alpha);
  SCHexagon h;
  h.prevertices = x;
  h.prevertices.push_back(kInf);
  h.exponents = P.alpha;
  h.vertices = P.verts;
  Complex C = (P.verts[1] - P.verts[0]) / I[0];
  h.scale = std::abs(C);
  h.rotation = C / h.scale;
  return h;
}

SCHexagon solve_polygon(const PolygonProblem& P, Eigen::VectorXd y) {
  int n = static_cast<int>(P.verts.size());
  int unknowns = n - 3;
  std::vector<double> finite_alpha(P.alpha.begin(), P.alpha.end() - 1);
  std::vector<double> L(n - 1);
  for (int k = 0; k + 2 < n; ++k) L[k] = std::abs(P.verts[k + 1] - P.verts[k]);

  auto residual = [&](const Eigen::VectorXd& yy) -> Eigen::VectorXd {
    std::vector<double> x = prevertices_from_gaps(yy);
    std::vector<Complex> I = side_integrals(x, finite_alpha);
    double I0 = std::abs(I[0]);
    Eigen::VectorXd r(unknowns);
    for (int k = 1; k <= unknowns; ++k)
      r(k - 1) = std::abs(I[k]) / I0 - L[k] / L[0];
    return r;
  };

  Eigen::VectorXd r = residual(y);
  for (int iter = 0; iter < 60; ++iter) {
    if (r.lpNorm<Eigen::Infinity>() < 3e-12)
      return assemble_solution(P, prevertices_from_gaps(y));
    Eigen::MatrixXd J(unknowns, unknowns);
    for (int j = 0; j < unknowns; ++j) {
      double step = 1e-6 * (1.0 + std::abs(y(j)));
      Eigen::VectorXd yp = y, ym = y;
      yp(j) += step;
      ym(j) -= step;
      try {
        J.col(j) = (residual(yp) - residual(ym)) / (2.0 * step);
      } catch (const DomainError&) {
        // One probe direction may cross into unresolvable territory near a
        // gap collapse; fall back to a one-sided difference.
        try {
          J.col(j) = (residual(yp) - r) / step;
        } catch (const DomainError&) {
          J.col(j) = (residual(ym) - r) / (-step);
        }
      }
    }
    Eigen::VectorXd d = J.fullPivLu().solve(-r);
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 14 && !accepted; ++half, step *= 0.5) {
      Eigen::VectorXd yn = y + step * d;
      if (yn.minCoeff() < std::log(1e-13))
        continue;  // a gap this small cannot be resolved in double precision
      Eigen::VectorXd rn;
      try {
        rn = residual(yn);
      } catch (const DomainError&) {
        continue;  // quadrature broke at a wild probe; shorten the step
      }
      if (rn.norm() < (1.0 - 1e-4 * step) * r.norm()) {
        y = yn;
        r = rn;
        accepted = true;
      }
    }
    if (!accepted) {
      // Stuck at the numerical floor: accept if already well converged.
      if (r.lpNorm<Eigen::Infinity>() < 1e-9)
        return assemble_solution(P, prevertices_from_gaps(y));
      fail("NoConvergence",
           "prevertex iteration stalled with residual " +
               std::to_string(r.lpNorm<Eigen::Infinity>()));
    }
  }
  fail("NoConvergence", "prevertex iteration hit the iteration cap");
}

// Initial gaps proportional to the target side lengths track the qualitative
// prevertex spacing well enough for the damped iteration.  When a small side
// has exponent sum p = 1 + e_left + e_right bounded away from zero, the side
// integral scales like gap^p, so the gap itself scales like length^(1/p);
// seeding with that power law keeps the first iterate near the solution even
// when the gap is many orders smaller than the side length.
Eigen::VectorXd gap_guess(const PolygonProblem& P) {
  int unknowns = static_cast<int>(P.verts.size()) - 3;
  double len0 = std::abs(P.verts[1] - P.verts[0]);
  Eigen::VectorXd y(unknowns);
  for (int i = 0; i < unknowns; ++i) {
    double len = std::abs(P.verts[i + 2] - P.verts[i + 1]);
    double p = 1.0 + (P.alpha[i + 1] - 1.0) + (P.alpha[i + 2] - 1.0);
    double g = (p >= 0.4) ? std::pow(len / len0, 1.0 / p) : len;
    y(i) = std::log(std::clamp(g, 1e-12, 1e8));
  }
  return y;
}

SCHexagon solve_polygon(const PolygonProblem& P) {
  return solve_polygon(P, gap_guess(P));
}

int find_prevertex(const SCHexagon& h, Complex z) {
  for (int j = 0; j + 1 < static_cast<int>(h.prevertices.size()); ++j)
    if (z.imag() == 0.0 && z.real() == h.prevertices[j]) return j;
  return -1;
}

void check_solution(const SCHexagon& h, const char* who) {
  if (h.prevertices.size() < 4 || h.prevertices.size() != h.exponents.size() ||
      h.prevertices.size() != h.vertices.size() ||
      !std::isinf(h.prevertices.back()))
    fail("OutOfRange", std::string(who) +
                           " needs a solved boundary problem with its last "
                           "prevertex at infinity");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.
// ---------------------------------------------------------------------------

SCHexagon solve_hexagon(double h1, double h2, double q) {
  if (!std::isfinite(h1) || !std::isfinite(h2) || !std::isfinite(q) ||
      h1 < 0.0 || h2 <= 0.0 || q <= 0.0)
    fail("NonPositiveParameter",
         "solve_hexagon needs h1 >= 0 and h2, q > 0");
  PolygonProblem P;
  double H = h1 + h2;
  if (h1 > 0.0 && q != 1.0) {
    P.verts = {Complex(0, 0), Complex(1, 0), Complex(1, h2),
               Complex(q, h2), Complex(q, H), Complex(0, H)};
    P.alpha = {0.5, 0.5, q < 1.0 ? 0.5 : 1.5, q < 1.0 ? 1.5 : 0.5, 0.5, 0.5};
  } else if (h1 > 0.0) {
    // q = 1: the right-hand corner pair merges to a straight marked point at
    // height h2 on the right edge of a 1 x (h1 + h2) rectangle.
    P.verts = {Complex(0, 0), Complex(1, 0), Complex(1, h2), Complex(1, H),
               Complex(0, H)};
    P.alpha = {0.5, 0.5, 1.0, 0.5, 0.5};
  } else {
    if (q >= 1.0)
      fail("OutOfRange",
           "the h1 = 0 degeneration is a marked rectangle only for q < 1");
    P.verts = {Complex(0, 0), Complex(1, 0), Complex(1, h2), Complex(q, h2),
               Complex(0, h2)};
    P.alpha = {0.5, 0.5, 0.5, 1.0, 0.5};
  }
  return solve_polygon(P);
}

SCHexagon solve_rectangle(double aspect) {
  if (!std::isfinite(aspect) || aspect <= 0.0)
    fail("NonPositiveParameter", "solve_rectangle needs aspect > 0");
  PolygonProblem P;
  P.verts = {Complex(0, 0), Complex(1, 0), Complex(1, aspect),
             Complex(0, aspect)};
  P.alpha = {0.5, 0.5, 0.5, 0.5};
  return solve_polygon(P);
}

std::complex<double> sc_integral(const SCHexagon& h, std::complex<double> a,
                                 std::complex<double> b) {
  check_solution(h, "sc_integral");
  if (a.imag() < 0.0 || b.imag() < 0.0)
    fail("OutOfRange", "integration endpoints must lie in the closed "
                       "upper half-plane");
  a = Complex(a.real(), a.imag() + 0.0);
  b = Complex(b.real(), b.imag() + 0.0);
  std::vector<double> fx(h.prevertices.begin(), h.prevertices.end() - 1);
  std::vector<double> fa(h.exponents.begin(), h.exponents.end() - 1);
  Integrand f{fx, fa};
  if (a == b) return Complex(0.0, 0.0);
  int sa = find_prevertex(h, a);
  int sb = find_prevertex(h, b);
  return integrate_segment(f, a, b, sa, sb, kMaxDepth);
}

std::complex<double> sc_map(const SCHexagon& h, std::complex<double> z) {
  check_solution(h, "sc_map");
  if (z.imag() < 0.0)
    fail("OutOfRange", "sc_map is defined on the closed upper half-plane");
  z = Complex(z.real(), z.imag() + 0.0);
  int m = static_cast<int>(h.prevertices.size()) - 1;
  int k = 0;
  for (int j = 1; j < m; ++j)
    if (std::abs(z - h.prevertices[j]) < std::abs(z - h.prevertices[k])) k = j;
  if (z.imag() == 0.0 && z.real() == h.prevertices[k]) return h.vertices[k];
  Complex I = sc_integral(h, Complex(h.prevertices[k], 0.0), z);
  return h.vertices[k] + h.scale * h.rotation * I;
}

std::vector<double> sc_side_lengths(const SCHexagon& h) {
  check_solution(h, "sc_side_lengths");
  std::vector<double> out;
  for (size_t k = 0; k + 2 < h.prevertices.size(); ++k)
    out.push_back(h.scale *
                  std::abs(sc_integral(h, Complex(h.prevertices[k], 0.0),
                                       Complex(h.prevertices[k + 1], 0.0))));
  return out;
}

SphereFiveInvariants normalize_five_points(const std::array<double, 5>& p) {
  int infinite = 0;
  for (double v : p)
    if (!std::isfinite(v)) ++infinite;
  if (infinite > 1)
    fail("OutOfRange", "at most one of the five points may be infinite");
  double A = p[0], B = p[3], C = p[4];
  auto mob = [&](double z) -> double {
    if (!std::isfinite(A)) return (B - C) / (z - C);
    if (!std::isfinite(B)) return (z - A) / (z - C);
    if (!std::isfinite(C)) return (z - A) / (B - A);
    if (!std::isfinite(z)) return (B - C) / (B - A);
    return ((z - A) * (B - C)) / ((z - C) * (B - A));
  };
  SphereFiveInvariants inv;
  inv.x4 = mob(p[1]);
  inv.x5 = mob(p[2]);
  if (!(0.0 < inv.x4 && inv.x4 < inv.x5 && inv.x5 < 1.0))
    fail("OutOfRange", "the five points are not in cyclic position");
  return inv;
}

SphereFiveInvariants invariants_of_hexagon(const SCHexagon& h) {
  check_solution(h, "invariants_of_hexagon");
  std::array<double, 5> p{};
  int count = 0;
  for (size_t j = 0; j < h.prevertices.size(); ++j) {
    if (h.exponents[j] > 1.25) continue;  // the reentrant corner is the zero
    if (count == 5)
      fail("OutOfRange", "the boundary problem has more than five marked "
                         "boundary points");
    p[count++] = h.prevertices[j];
  }
  if (count != 5)
    fail("OutOfRange",
         "the boundary problem does not carry five marked points");
  return normalize_five_points(p);
}

SphereFiveInvariants invariants_of_slit_pillow(double h2, double slit) {
  if (!std::isfinite(h2) || h2 <= 0.0)
    fail("NonPositiveParameter", "invariants_of_slit_pillow needs h2 > 0");
  if (!std::isfinite(slit) || slit <= 0.0 || slit >= 1.0)
    fail("OutOfRange", "the marked point must lie inside the top edge: "
                       "0 < slit < 1");
  // Rectangle solve with the corner (0,0) carried by infinity, so the top
  // edge (1,h2) -> (0,h2) sits on the compact prevertex gap [1, x3].
  PolygonProblem P;
  P.verts = {Complex(1, 0), Complex(1, h2), Complex(0, h2), Complex(0, 0)};
  P.alpha = {0.5, 0.5, 0.5, 0.5};
  SCHexagon rect = solve_polygon(P);
  double x3 = rect.prevertices[2];

  std::vector<double> fx(rect.prevertices.begin(), rect.prevertices.end() - 1);
  std::vector<double> fa(rect.exponents.begin(), rect.exponents.end() - 1);
  Integrand f{fx, fa};
  double top = std::abs(
      integrate_segment(f, Complex(1, 0), Complex(x3, 0), 1, 2, kMaxDepth));
  double want = (1.0 - slit) * top;  // arclength from (1,h2) to the mark
  // The arclength from 1 to u is strictly increasing; bisect for u.
  double lo = 1.0, hi = x3;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * x3; ++it) {
    double u = 0.5 * (lo + hi);
    double len = std::abs(
        integrate_segment(f, Complex(1, 0), Complex(u, 0), 1, -1, kMaxDepth));
    (len < want ? lo : hi) = u;
  }
  double u = 0.5 * (lo + hi);
  // Five marked points in polygon order (0,0), (1,0), (1,h2), mark, (0,h2).
  return normalize_five_points({kInf, 0.0, 1.0, u, x3});
}

namespace {

std::pair<double, double> match_moduli_from(double q, double t, double h1_init,
                                            double h2_init) {
  SphereFiveInvariants target = invariants_of_slit_pillow(1.0, q - t);

  Eigen::Vector2d y(std::log(h1_init), std::log(h2_init));
  auto residual = [&](const Eigen::Vector2d& yy) -> Eigen::Vector2d {
    SCHexagon s = solve_hexagon(std::exp(yy(0)), std::exp(yy(1)), q);
    SphereFiveInvariants inv = invariants_of_hexagon(s);
    return Eigen::Vector2d(inv.x4 - target.x4, inv.x5 - target.x5);
  };

  Eigen::Vector2d r = residual(y);
  for (int iter = 0; iter < 40; ++iter) {
    if (r.lpNorm<Eigen::Infinity>() < 1e-11)
      return {std::exp(y(0)), std::exp(y(1))};
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
      double step = 1e-6 * (1.0 + std::abs(y(j)));
      Eigen::Vector2d yp = y, ym = y;
      yp(j) += step;
      ym(j) -= step;
      try {
        J.col(j) = (residual(yp) - r) / step;
      } catch (const DomainError&) {
        J.col(j) = (residual(ym) - r) / (-step);
      }
    }
    Eigen::Vector2d d = J.fullPivLu().solve(-r);
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 14 && !accepted; ++half, step *= 0.5) {
      Eigen::Vector2d yn = y + step * d;
      if (yn(0) < std::log(1e-12))
        fail("NonPositiveSolution",
             "the matched height h1 collapsed to the boundary of the chamber");
      Eigen::Vector2d rn;
      try {
        rn = residual(yn);
      } catch (const DomainError&) {
        continue;
      }
      if (rn.norm() < (1.0 - 1e-4 * step) * r.norm()) {
        y = yn;
        r = rn;
        accepted = true;
      }
    }
    if (!accepted) {
      // Invariant matching bottoms out near the precision of the inner
      // prevertex solve; accept once comfortably converged.
      if (r.lpNorm<Eigen::Infinity>() < 3e-9)
        return {std::exp(y(0)), std::exp(y(1))};
      fail("NoConvergence", "moduli matching stalled with residual " +
                                std::to_string(r.lpNorm<Eigen::Infinity>()));
    }
  }
  fail("NoConvergence", "moduli matching hit the iteration cap");
}

void check_match_args(double q, double t) {
  if (!std::isfinite(q) || q <= 0.0)
    fail("NonPositiveParameter", "match_moduli needs q > 0");
  if (!std::isfinite(t) || t <= 0.0 || t >= q || q - t >= 1.0)
    fail("OutOfRange",
         "match_moduli needs 0 < t < q with the slit position q - t in (0,1)");
}

}  // namespace

std::pair<double, double> match_moduli(double q, double t) {
  check_match_args(q, t);
  double h1 = std::clamp(t / std::max(std::log(1.0 / t), 1.5), 1e-7, 10.0);
  return match_moduli_from(q, t, h1, 1.0);
}

std::vector<ModuliPathRow> moduli_path(double q,
                                       const std::vector<double>& ts) {
  std::vector<int> order(ts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return ts[i] > ts[j]; });
  std::vector<ModuliPathRow> rows(ts.size());
  // Sweep from the largest t down, warm-starting each solve from the
  // previous one (h1 scales roughly linearly with t along the path).
  bool have_prev = false;
  double prev_t = 0.0, prev_h1 = 0.0, prev_h2 = 0.0;
  for (int idx : order) {
    double t = ts[idx];
    check_match_args(q, t);
    double h1, h2;
    if (have_prev) {
      double h1_init = std::max(prev_h1 * (t / prev_t), 1e-11);
      std::tie(h1, h2) = match_moduli_from(q, t, h1_init, prev_h2);
    } else {
      std::tie(h1, h2) = match_moduli(q, t);
    }
    have_prev = true;
    prev_t = t;
    prev_h1 = h1;
    prev_h2 = h2;
    ModuliPathRow row;
    row.t = t;
    row.h1 = h1;
    row.h2 = h2;
    row.deviation = (q * h1 + h2 - 1.0) / (1.0 + q);
    rows[idx] = row;
  }
  return rows;
}

std::vector<double> log_spaced_samples(double t_min, double t_max,
                                       int per_decade) {
  if (!(t_min > 0.0) || !(t_max > t_min) || per_decade < 1)
    fail("OutOfRange",
         "log_spaced_samples needs 0 < t_min < t_max and per_decade >= 1");
  std::vector<double> ts;
  for (int i = 0;; ++i) {
    double t = t_min * std::pow(10.0, static_cast<double>(i) / per_decade);
    if (t > t_max * (1.0 + 1e-12)) break;
    ts.push_back(std::min(t, t_max));
  }
  if (ts.back() < t_max * (1.0 - 1e-12)) ts.push_back(t_max);
  return ts;
}

AsymptoticFit asymptotic_fit(double q, const std::vector<double>& t_samples) {
  if (t_samples.size() < 6)
    fail("OutOfRange", "asymptotic_fit needs at least six samples");
  double lo = *std::min_element(t_samples.begin(), t_samples.end());
  double hi = *std::max_element(t_samples.begin(), t_samples.end());
  if (!(lo > 0.0) || hi >= q / 10.0 || hi / lo < 99.0)
    fail("OutOfRange",
         "asymptotic_fit samples must span at least two decades inside "
         "(0, q/10)");
  std::vector<ModuliPathRow> rows = moduli_path(q, t_samples);
  int n = static_cast<int>(rows.size());
  // The deviation spans many decades over the sampled range, so the least
  // squares problem is whitened per sample (constant relative error model);
  // an unweighted fit would see nothing but the largest decade.
  Eigen::VectorXd D(n), ones = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd Alog(n, 2), Acub(n, 3);
  for (int i = 0; i < n; ++i) {
    double t = rows[i].t;
    double L = std::log(1.0 / t);
    double d = rows[i].deviation;
    if (d == 0.0) fail("NoConvergence", "deviation vanished on a sample");
    D(i) = d;
    Alog(i, 0) = t / L / d;
    Alog(i, 1) = t * t / L / d;
    Acub(i, 0) = t / d;
    Acub(i, 1) = t * t / d;
    Acub(i, 2) = t * t * t / d;
  }
  double root_n = std::sqrt(static_cast<double>(n));
  Eigen::VectorXd clog = Alog.colPivHouseholderQr().solve(ones);
  Eigen::VectorXd ccub = Acub.colPivHouseholderQr().solve(ones);
  AsymptoticFit fit;
  fit.c1 = clog(0);
  fit.c2 = clog(1);
  fit.residual = (Alog * clog - ones).norm() / root_n;
  fit.cubic_residual = (Acub * ccub - ones).norm() / root_n;
  fit.t_min = lo;
  fit.t_max = hi;
  return fit;
}

namespace {

double legendre_panel(const std::function<double(double)>& f, double a, double b) {
  const QuadratureRule& r = rule_for(0.0, 0.0);
  double mid = 0.5 * (a + b), hd = 0.5 * (b - a), total = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) total += hd * r.weights[i] * f(mid + hd * r.nodes[i]);
  return total;
}

// Adaptive bisection: accept a panel once it agrees with its two halves.
double legendre_adaptive(const std::function<double(double)>& f, double a, double b, int depth) {
  double whole = legendre_panel(f, a, b);
  double mid = 0.5 * (a + b);
  double halves = legendre_panel(f, a, mid) + legendre_panel(f, mid, b);
  if (std::abs(whole - halves) <= 1e-13 * std::max(1.0, std::abs(halves))) return halves;
  if (depth >= kMaxDepth)
    fail("QuadratureFailure", "adaptive refinement of the elliptic integral stalled");
  return legendre_adaptive(f, a, mid, depth + 1) + legendre_adaptive(f, mid, b, depth + 1);
}

}  // namespace

double complete_elliptic_k(double k) {
  if (!(k >= 0.0) || k >= 1.0)
    fail("OutOfRange", "complete_elliptic_k needs 0 <= k < 1");
  // The integrand is analytic on [0, pi/2] but develops a sharp peak at the
  // right endpoint as k -> 1 (width ~ sqrt(1 - k^2)); refine until resolved.
  auto f = [k](double theta) {
    double s = k * std::sin(theta);
    return 1.0 / std::sqrt(1.0 - s * s);
  };
  return legendre_adaptive(f, 0.0, std::acos(-1.0) / 2.0, 0);
}

double rectangle_aspect_oracle(const SCHexagon& rect) {
  check_solution(rect, "rectangle_aspect_oracle");
  if (rect.prevertices.size() != 4)
    fail("OutOfRange", "rectangle_aspect_oracle needs a four-corner problem");
  for (double a : rect.exponents)
    if (a != 0.5)
      fail("OutOfRange", "rectangle_aspect_oracle needs four right angles");
  double x3 = rect.prevertices[2];
  // The cross-ratio of (0, 1, x3, inf) equals that of the symmetric
  // configuration (-1, 1, 1/k, -1/k), which pins the elliptic modulus k.
  double m = std::sqrt(x3 / (x3 - 1.0));
  double k = (m - 1.0) / (m + 1.0);
  double kp = std::sqrt((1.0 - k) * (1.0 + k));
  return complete_elliptic_k(kp) / (2.0 * complete_elliptic_k(k));
}

}  // namespace polyplane
