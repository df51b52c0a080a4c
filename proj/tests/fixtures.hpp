#pragma once

// Shared example surfaces for the test suite. All invariants quoted in the
// tests (genus, cone angles, cylinder data) were worked out by hand from these
// constructions.

#include <initializer_list>
#include <string_view>
#include <vector>

#include "polyplane/surface.hpp"

namespace polyplane::fixtures {

inline QVec2 qv(std::string_view x, std::string_view y) {
  return QVec2(parse_rational(x), parse_rational(y));
}

inline QVec2 qv(long x, long y) { return QVec2(Rational(x), Rational(y)); }

inline FlatPolygonT<Rational> poly(std::initializer_list<QVec2> vs) {
  FlatPolygonT<Rational> p;
  p.v.assign(vs.begin(), vs.end());
  return p;
}

// Unit square with opposite sides identified by translation. One regular
// vertex class, genus 1.
inline Surface square_torus() {
  auto sq = poly({qv(0, 0), qv(1, 0), qv(1, 1), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 0}, {0, 2}, GluingKind::Translation},
      {{0, 1}, {0, 3}, GluingKind::Translation},
  };
  return build_surface<Rational>({sq}, g);
}

// Unit square torus with its vertex class marked as a puncture.
inline Surface square_torus_marked() {
  auto sq = poly({qv(0, 0), qv(1, 0), qv(1, 1), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 0}, {0, 2}, GluingKind::Translation},
      {{0, 1}, {0, 3}, GluingKind::Translation},
  };
  return build_surface<Rational>({sq}, g, {{0, 0}});
}

// A 2x1 rectangle with top and bottom folded onto themselves at their
// midpoints and the vertical sides identified by translation. Sphere with
// four cone points of angle pi.
inline Surface folded_rectangle_pillowcase() {
  auto hex = poly({qv(0, 0), qv(1, 0), qv(2, 0), qv(2, 1), qv(1, 1), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 0}, {0, 1}, GluingKind::PointReflection},
      {{0, 3}, {0, 4}, GluingKind::PointReflection},
      {{0, 2}, {0, 5}, GluingKind::Translation},
  };
  return build_surface<Rational>({hex}, g);
}

// The same sphere built from two unit squares: bottoms and tops glued by
// point reflection, sides crosswise by translation.
inline Surface two_square_pillowcase() {
  auto sq = poly({qv(0, 0), qv(1, 0), qv(1, 1), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 0}, {1, 0}, GluingKind::PointReflection},
      {{0, 2}, {1, 2}, GluingKind::PointReflection},
      {{0, 3}, {1, 1}, GluingKind::Translation},
      {{0, 1}, {1, 3}, GluingKind::Translation},
  };
  return build_surface<Rational>({sq, sq}, g);
}

// Two unit squares stacked on a 2x1 base hexagon: each square's vertical
// sides are identified with each other, its bottom with the matching half of
// the hexagon's top, and the hexagon wraps horizontally and vertically onto
// the squares' tops. Genus 2 with two cone points of angle 4*pi; the
// horizontal direction has three cylinders.
inline Surface three_cylinder_genus2() {
  auto sq_left = poly({qv(0, 1), qv(1, 1), qv(1, 2), qv(0, 2)});
  auto sq_right = poly({qv(1, 1), qv(2, 1), qv(2, 2), qv(1, 2)});
  auto hex = poly({qv(0, 0), qv(1, 0), qv(2, 0), qv(2, 1), qv(1, 1), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 1}, {0, 3}, GluingKind::Translation},
      {{1, 1}, {1, 3}, GluingKind::Translation},
      {{2, 2}, {2, 5}, GluingKind::Translation},
      {{0, 0}, {2, 4}, GluingKind::Translation},
      {{1, 0}, {2, 3}, GluingKind::Translation},
      {{0, 2}, {2, 0}, GluingKind::Translation},
      {{1, 2}, {2, 1}, GluingKind::Translation},
  };
  return build_surface<Rational>({sq_left, sq_right, hex}, g);
}

// A sphere with five simple poles and one simple zero whose horizontal
// direction has a single cylinder: a rectangle of width 2*(a+b+c), its bottom
// edge folded onto itself around three pole points (at parameters a, 2a+b,
// 2a+2b+c from the left), its top edge folded around its midpoint, and the
// vertical sides identified by translation. The three horizontal rays leaving
// the zero (the class of the bottom fold endpoints) each end at a pole.
inline Surface one_cylinder_five_pole_sphere(const Rational& a,
                                             const Rational& b,
                                             const Rational& c,
                                             const Rational& h) {
  Rational half = a + b + c;
  FlatPolygonT<Rational> rect;
  rect.v = {QVec2(Rational(0), Rational(0)),
            QVec2(a, Rational(0)),
            QVec2(2 * a, Rational(0)),
            QVec2(2 * a + b, Rational(0)),
            QVec2(2 * a + 2 * b, Rational(0)),
            QVec2(2 * a + 2 * b + c, Rational(0)),
            QVec2(2 * half, Rational(0)),
            QVec2(2 * half, h),
            QVec2(half, h),
            QVec2(Rational(0), h)};
  std::vector<EdgeGluing> g = {
      {{0, 0}, {0, 1}, GluingKind::PointReflection},
      {{0, 2}, {0, 3}, GluingKind::PointReflection},
      {{0, 4}, {0, 5}, GluingKind::PointReflection},
      {{0, 7}, {0, 8}, GluingKind::PointReflection},
      {{0, 6}, {0, 9}, GluingKind::Translation},
  };
  return build_surface<Rational>({rect}, g);
}

inline Surface one_cylinder_five_pole_sphere(long a, long b, long c, long h) {
  return one_cylinder_five_pole_sphere(Rational(a), Rational(b), Rational(c),
                                       Rational(h));
}

// L-shaped polygon (two unit squares wide, two tall, one corner square
// missing) with opposite sides identified by translation. Genus 2 with a
// single cone point of angle 6*pi.
inline Surface l_shaped_genus2() {
  auto l = poly({qv(0, 0), qv(1, 0), qv(2, 0), qv(2, 1), qv(1, 1), qv(1, 2),
                 qv(0, 2), qv(0, 1)});
  std::vector<EdgeGluing> g = {
      {{0, 0}, {0, 5}, GluingKind::Translation},
      {{0, 1}, {0, 3}, GluingKind::Translation},
      {{0, 2}, {0, 7}, GluingKind::Translation},
      {{0, 4}, {0, 6}, GluingKind::Translation},
  };
  return build_surface<Rational>({l}, g);
}

}  // namespace polyplane::fixtures
