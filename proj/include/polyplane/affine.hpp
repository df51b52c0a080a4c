#pragma once

#include <cmath>
#include <complex>

#include "polyplane/halfplane.hpp"
#include "polyplane/surface.hpp"

namespace polyplane {

// Orientation-preserving linear action on a surface: every vertex is mapped by
// m, the gluing combinatorics and marked points are untouched. Cone angles are
// preserved (a linear map permutes the direction sectors around a cone point),
// so the rebuilt surface has the same stratum; area scales by det m.
template <class S>
SurfaceT<S> apply_gl2(const SurfaceT<S>& s, const Mat2<S>& m) {
  if (!(m.determinant() > 0))
    fail("NonPositiveDeterminant", "linear action requires det > 0");
  std::vector<FlatPolygonT<S>> polys = s.polygons;
  for (auto& p : polys)
    for (auto& v : p.v) v = Vec2<S>(m * v);
  return build_surface<S>(std::move(polys), s.gluings, s.marked);
}

// The point lambda of the Teichmueller disk of s: the affine deformation
// x + iy -> x + lambda*y, i.e. the matrix [[1, Re lambda], [0, Im lambda]].
template <class S>
SurfaceT<S> teich_disk_point(const SurfaceT<S>& s,
                             const HalfPlanePointT<S>& lambda) {
  check_upper(lambda);
  Mat2<S> m;
  m << S(1), lambda.re, S(0), lambda.im;
  return apply_gl2(s, m);
}

// Beltrami coefficient of the affine deformation by lambda: (i - lambda) /
// (i + lambda), of modulus < 1 on the upper half-plane.
inline std::complex<double> beltrami_coefficient(const HalfPlanePoint& lambda) {
  check_upper(lambda);
  std::complex<double> i(0, 1), l = to_complex(lambda);
  return (i - l) / (i + l);
}

// diag(e^t, e^-t): expands horizontally, contracts vertically. Float mode
// only (the entries are transcendental).
inline RealSurface geodesic_flow(const RealSurface& s, double t) {
  Mat2<double> m;
  m << std::exp(t), 0, 0, std::exp(-t);
  return apply_gl2(s, m);
}

// [[1, t], [0, 1]]: shears horizontally, preserving every horizontal
// cylinder's height and circumference. Exact for rational t.
template <class S>
SurfaceT<S> horocycle_flow(const SurfaceT<S>& s, const S& t) {
  Mat2<S> m;
  m << S(1), t, S(0), S(1);
  return apply_gl2(s, m);
}

}  // namespace polyplane
