#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace polyplane {

// Exact scalar for flat-surface coordinates. GMP-backed so repeated shears and
// normal-form arithmetic never overflow. All values must stay canonical
// (reduced, positive denominator): GMP comparison semantics assume it, so the
// only entry points for external data are parse_rational / make_rational below.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

template <class S> using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S> using Mat2 = Eigen::Matrix<S, 2, 2>;

using QVec2 = Vec2<Rational>;
using QMat2 = Mat2<Rational>;
using RVec2 = Vec2<double>;
using RMat2 = Mat2<double>;

template <class S>
S cross2(const Vec2<S>& a, const Vec2<S>& b) {
  return S(a.x() * b.y() - a.y() * b.x());
}

// num/den in any form -> canonical rational.
Rational make_rational(const BigInt& num, const BigInt& den);

// Accepts "p", "-p/q", "p/-q", unreduced fractions, surrounding whitespace.
Rational parse_rational(std::string_view text);

// Reduced "p" or "p/q" with positive denominator.
std::string format_rational(const Rational& r);

// Largest integer <= r.
BigInt rational_floor(const Rational& r);

// Representative of r modulo m in [0, m); m must be positive.
Rational rational_mod(const Rational& r, const Rational& m);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Vec2<double> to_double(const QVec2& v) {
  return Vec2<double>(to_double(v.x()), to_double(v.y()));
}

}  // namespace polyplane
