#pragma once

#include <cmath>
#include <complex>

#include "polyplane/errors.hpp"
#include "polyplane/rational.hpp"

namespace polyplane {

// A point of the upper half-plane, used both as a shear/stretch parameter for
// one cylinder and as a coordinate of the half-plane itself. S is Rational in
// exact mode, double in float mode.
template <class S>
struct HalfPlanePointT {
  S re{};
  S im{};
};

using HalfPlanePoint = HalfPlanePointT<double>;
using QHalfPlanePoint = HalfPlanePointT<Rational>;

template <class S>
void check_upper(const HalfPlanePointT<S>& p) {
  if (!(p.im > 0)) fail("NotUpperHalfPlane", "imaginary part must be positive");
}

inline HalfPlanePoint to_real(const QHalfPlanePoint& p) {
  return {to_double(p.re), to_double(p.im)};
}

inline std::complex<double> to_complex(const HalfPlanePoint& p) {
  return {p.re, p.im};
}

inline std::complex<double> to_complex(const QHalfPlanePoint& p) {
  return {to_double(p.re), to_double(p.im)};
}

// Distance in the Poincare metric of curvature -4 on the upper half-plane:
// d(z, w) = atanh |(z - w) / (z - wbar)|.
inline double poincare_distance(std::complex<double> z,
                                std::complex<double> w) {
  if (!(z.imag() > 0) || !(w.imag() > 0))
    fail("NotUpperHalfPlane", "poincare_distance needs upper half-plane points");
  double num = std::abs(z - w);
  double den = std::abs(z - std::conj(w));
  if (num == 0) return 0;
  return std::atanh(num / den);
}

template <class S, class T>
double poincare_distance(const HalfPlanePointT<S>& z,
                         const HalfPlanePointT<T>& w) {
  return poincare_distance(to_complex(z), to_complex(w));
}

}  // namespace polyplane
