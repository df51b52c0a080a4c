#pragma once

// Schwarz-Christoffel boundary machinery for the L-shaped pillowcase family.
//
// The double of an axis-parallel polygon across its boundary is a sphere, and
// the conformal structure of that sphere is the double of the upper half-plane
// once the polygon is uniformized by a Schwarz-Christoffel map.  The five
// distinguished boundary points (cone points of angle pi, plus a regular
// marked point in the degenerate cases) therefore land on the real axis, and
// their Moebius-normalized positions are a complete conformal invariant of the
// five-marked sphere.  This header exposes:
//
//   * solve_hexagon / solve_rectangle - parameter problems: find the real
//     prevertices whose Schwarz-Christoffel image is the requested polygon;
//   * sc_map - evaluate the map itself anywhere in the closed half-plane;
//   * invariants_of_hexagon / invariants_of_slit_pillow - the two-number
//     conformal invariant (x4, x5) of the associated five-marked sphere,
//     computed along two independent routes;
//   * match_moduli / moduli_path - solve X(0,1,q-t) = X(h1,h2,q) for
//     (h1(t), h2(t)): which L-shaped surface is conformally the unit-height
//     pillow with a boundary marked point slid distance t off position q;
//   * asymptotic_fit - least-squares comparison of the small-t deviation
//     against a t/log(1/t) law and a plain cubic.
//
// Everything here is double precision; exactness lives in the flat-surface
// core, while this layer is deliberately numerical.

#include <array>
#include <complex>
#include <utility>
#include <vector>

namespace polyplane {

// A solved Schwarz-Christoffel parameter problem for one boundary polygon.
//
// prevertices[j] is the point of the real axis mapped to vertices[j]; the
// list is strictly increasing and the final entry is +infinity.  The first
// two finite prevertices are normalized to 0 and 1.  exponents[j] is the
// interior angle of vertices[j] divided by pi (1/2 at a right corner, 3/2 at
// the reentrant corner, exactly 1 at a straight marked point), and the
// exponents sum to n - 2.  The map itself is
//
//   f(z) = vertices[0] + scale * rotation * integral from prevertices[0] to z
//          of prod_j (zeta - prevertices[j])^(exponents[j] - 1) dzeta,
//
// the product running over finite prevertices only (the vertex carried by
// infinity contributes no factor).  scale is positive and rotation is a unit
// complex number; both are fixed by the first polygon side.
struct SCHexagon {
  std::vector<double> prevertices;
  std::vector<double> exponents;
  std::vector<std::complex<double>> vertices;
  double scale = 1.0;
  std::complex<double> rotation = {1.0, 0.0};
};

// Conformal coordinates of a sphere with five marked points on a circle.
// The five points, read in cyclic order, are Moebius-normalized so that the
// first goes to 0, the fourth to 1 and the fifth to infinity; x4 and x5 are
// the images of the second and third.  Cyclic order forces 0 < x4 < x5 < 1.
struct SphereFiveInvariants {
  double x4 = 0.0;
  double x5 = 0.0;
};

// Least-squares summary produced by asymptotic_fit.  c1 and c2 multiply
// t/log(1/t) and t^2/log(1/t); both fits are whitened per sample (the data
// spans many decades, so residuals are measured relative to each sample).
// residual is the root-mean-square relative misfit of the logarithmic model
// over [t_min, t_max]; cubic_residual is the same quantity for the best fit
// by c1*t + c2*t^2 + c3*t^3.
struct AsymptoticFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;
  double cubic_residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
};

// One sample of the matched-moduli path: at parameter t the L-shaped surface
// X(h1, h2, q) is conformally the slit pillow X(0, 1, q - t), and deviation
// is the area-weighted modulus difference a1*h1 + a2*h2 - a2 with
// (a1, a2) = (q, 1)/(1 + q).  The deviation vanishes as t -> 0.
struct ModuliPathRow {
  double t = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double deviation = 0.0;
};

// Solve the parameter problem for the L-shaped hexagon with a unit bottom
// edge, lower-right height h2, upper bar height h1 and top width q (the same
// polygon family the pillowcase builder doubles).  Requires h2 > 0, q > 0 and
// h1 >= 0; the degenerate cases are handled with a straight marked vertex:
// h1 = 0 needs q < 1 and yields the rectangle with a marked point on the top
// edge, while q = 1 yields the 1 x (h1 + h2) rectangle with a marked point on
// the right edge.  Side-length residuals of the returned solution are below
// 1e-9.  Throws DomainError("NonPositiveParameter"), "OutOfRange" for an
// inconsistent degeneration, or "NoConvergence".
SCHexagon solve_hexagon(double h1, double h2, double q);

// Solve the parameter problem for the rectangle [0,1] x [0,aspect], with the
// corner correspondence (0,0),(1,0),(1,aspect),(0,aspect) and (0,aspect)
// carried by infinity.  Requires aspect > 0.
SCHexagon solve_rectangle(double aspect);

// Evaluate the Schwarz-Christoffel map of a solved problem at a point of the
// closed upper half-plane.  At a prevertex this returns the corresponding
// vertex; elsewhere the integral is taken along a straight segment from the
// nearest finite prevertex, with Gauss-Jacobi endpoint panels and adaptive
// bisection until successive refinements agree.  Throws
// DomainError("OutOfRange") for points below the axis and
// "QuadratureFailure" if refinement stalls.
std::complex<double> sc_map(const SCHexagon& h, std::complex<double> z);

// Line integral of the Schwarz-Christoffel integrand of h along the straight
// segment from a to b (without the scale/rotation constant).  Endpoints may
// be prevertices - their singular factors are absorbed into Gauss-Jacobi
// weights - but the open segment must avoid the prevertices.  Exposed for
// path-independence checks: splitting a path at a waypoint must reproduce the
// direct integral.
std::complex<double> sc_integral(const SCHexagon& h, std::complex<double> a,
                                 std::complex<double> b);

// Lengths of the finite polygon sides recomputed by quadrature (not read off
// the stored target vertices), so they can be compared against independent
// oracles.  Entry k is the side from vertices[k] to vertices[k+1].
std::vector<double> sc_side_lengths(const SCHexagon& h);

// The five-marked-sphere invariant of a solved hexagon problem.  The five
// marked prevertices are the non-reentrant boundary vertices (exponent 1/2
// or 1), read in polygon order; the reentrant corner is the zero of the
// doubled surface, not a marked point, and is dropped.
SphereFiveInvariants invariants_of_hexagon(const SCHexagon& h);

// The same invariant for the unit-width slit pillow: the rectangle
// [0,1] x [0,h2] with a marked point at (slit, h2) on its top edge, doubled.
// Computed by an independent route - a one-parameter rectangle solve followed
// by an arclength root find for the marked prevertex - so it cross-checks
// invariants_of_hexagon through the h1 = 0 degeneration.  Requires h2 > 0 and
// 0 < slit < 1.
SphereFiveInvariants invariants_of_slit_pillow(double h2, double slit);

// Moebius-normalize five points of the extended real line listed in cyclic
// order (at most one entry may be +/-infinity).  Exposed for invariance
// tests: applying any real Moebius map to the five points first must not
// change the result.
SphereFiveInvariants normalize_five_points(const std::array<double, 5>& p);

// Solve for the L-shaped representative of the slit pillow: find h1, h2 > 0
// with X(h1, h2, q) conformally equal to X(0, 1, q - t) as five-marked
// spheres.  Requires q > 0 and q - 1 < t < q (so the slit position q - t lies
// in (0,1)).  The residual in (x4, x5) is below 1e-8.  Throws
// DomainError("NoConvergence") if the two-variable Newton iteration stalls
// and "NonPositiveSolution" if it is driven to the h1 -> 0 boundary of the
// chamber.
std::pair<double, double> match_moduli(double q, double t);

// match_moduli swept over a list of t values with continuation warm starts
// (processed largest-t first, returned in input order).  deviation is the
// weighted modulus difference described on ModuliPathRow.
std::vector<ModuliPathRow> moduli_path(double q, const std::vector<double>& ts);

// Logarithmically spaced sample grid: per_decade points per decade from
// t_min up to t_max inclusive.  Requires 0 < t_min < t_max, per_decade >= 1.
std::vector<double> log_spaced_samples(double t_min, double t_max,
                                       int per_decade);

// Fit the deviation D(t) along the matched-moduli path, comparing the
// logarithmic model c1 * t/log(1/t) + c2 * t^2/log(1/t) against a cubic in t.
// Requires the samples to span at least two decades inside (0, q/10).
AsymptoticFit asymptotic_fit(double q, const std::vector<double>& t_samples);

// Complete elliptic integral K(k) by direct numeric quadrature of
// dtheta / sqrt(1 - k^2 sin^2 theta) over [0, pi/2]; 0 <= k < 1.  Used as an
// independent oracle for rectangle aspect ratios.
double complete_elliptic_k(double k);

// Predicted aspect ratio of a solved rectangle from classical elliptic
// integrals alone: the cross-ratio of the four prevertices determines the
// modulus k, and the aspect is K(k')/(2K(k)).  Shares no quadrature machinery
// with sc_map, so agreement validates the Schwarz-Christoffel integrals.
double rectangle_aspect_oracle(const SCHexagon& rect);

}  // namespace polyplane
