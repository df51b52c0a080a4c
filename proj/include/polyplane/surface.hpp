#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyplane/errors.hpp"
#include "polyplane/rational.hpp"

namespace polyplane {

// A half-translation surface is a finite set of simple CCW polygons with the
// edges glued in pairs by maps z -> z + c (Translation) or z -> -z + c
// (PointReflection). Cone angles are integer multiples of pi; punctures are
// marked vertex classes. Vertices may be "straight" (interior angle pi), which
// is how edge subdivision points and fold endpoints are represented.

template <class S>
struct FlatPolygonT {
  std::vector<Vec2<S>> v;  // CCW, simple, >= 3 vertices

  int size() const { return static_cast<int>(v.size()); }
  const Vec2<S>& vertex(int i) const { return v[mod(i)]; }
  Vec2<S> edge(int i) const { return Vec2<S>(vertex(i + 1) - vertex(i)); }
  int mod(int i) const {
    int n = size();
    return ((i % n) + n) % n;
  }
};

enum class GluingKind : std::uint8_t { Translation, PointReflection };

struct EdgeRef {
  int poly = -1;
  int edge = -1;
  auto operator<=>(const EdgeRef&) const = default;
};

struct CornerRef {
  int poly = -1;
  int vert = -1;
  auto operator<=>(const CornerRef&) const = default;
};

// Glues edge a of one polygon to edge b of another (or the same) polygon.
// Writing va, vb for the CCW edge vectors, a Translation gluing requires
// vb = -va and a PointReflection gluing requires vb = va; both identify the
// start of a with the end of b. An edge may not be glued to itself: fold an
// edge by subdividing it at the fold point first.
struct EdgeGluing {
  EdgeRef a, b;
  GluingKind kind = GluingKind::Translation;
};

template <class S>
struct SurfaceT {
  std::vector<FlatPolygonT<S>> polygons;
  std::vector<EdgeGluing> gluings;
  std::vector<CornerRef> marked;  // one representative corner per marked class

  // Derived data, filled by build_surface.
  std::vector<std::vector<CornerRef>> classes;  // vertex classes
  std::vector<int> class_angle_multiple;        // cone angle = multiple * pi
  std::vector<char> class_marked;               // marked <=> puncture
  std::vector<std::vector<int>> corner_class;   // [poly][vert] -> class id
  std::vector<std::vector<int>> edge_gluing;    // [poly][edge] -> gluing index

  int num_polygons() const { return static_cast<int>(polygons.size()); }
  int num_edges() const;  // glued edge pairs
  int num_classes() const { return static_cast<int>(classes.size()); }
  int genus() const;

  int class_of(CornerRef c) const { return corner_class[c.poly][c.vert]; }
  const EdgeGluing& gluing_at(EdgeRef e) const {
    return gluings[edge_gluing[e.poly][e.edge]];
  }
  // The other side of a glued edge.
  EdgeRef partner(EdgeRef e) const;
  GluingKind kind_at(EdgeRef e) const { return gluing_at(e).kind; }

  // Crossing map for edge e: a point z on edge e corresponds to s*z + c on the
  // partner edge, with s = +1 for Translation and -1 for PointReflection.
  // Returned as (s, c).
  std::pair<int, Vec2<S>> crossing_map(EdgeRef e) const;

  bool class_is_flow_stop(int cls) const {
    return class_marked[cls] || class_angle_multiple[cls] != 2;
  }
};

using Surface = SurfaceT<Rational>;
using RealSurface = SurfaceT<double>;

struct Singularity {
  int class_id = -1;
  int order = 0;           // cone angle (order + 2) * pi
  bool is_puncture = false;
  std::vector<CornerRef> corners;
};

struct StratumSignature {
  std::vector<int> orders;  // descending, poles included
  int genus = 0;
  int num_punctures = 0;
  bool operator==(const StratumSignature&) const = default;
};

// Validates polygons and gluings, computes vertex classes and cone angles.
// Errors: BadPolygon, EdgeMismatch, NonManifold, Disconnected, BadConeAngle.
// Cone-angle-pi classes are auto-marked (a simple pole forces a puncture).
template <class S>
SurfaceT<S> build_surface(std::vector<FlatPolygonT<S>> polygons,
                          std::vector<EdgeGluing> gluings,
                          std::vector<CornerRef> marked_points = {});

// Vertex classes that are singular (angle != 2*pi) or marked.
template <class S>
std::vector<Singularity> singularities(const SurfaceT<S>& s);

template <class S>
StratumSignature stratum(const SurfaceT<S>& s);

// Total flat area (shoelace).
template <class S>
S area(const SurfaceT<S>& s);

RealSurface to_real(const Surface& s);

}  // namespace polyplane
