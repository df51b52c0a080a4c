#pragma once

#include <optional>
#include <vector>

#include "polyplane/halfplane.hpp"
#include "polyplane/surface.hpp"
#include "polyplane/trace.hpp"

namespace polyplane {

// One boundary circle of a cylinder: the cyclic sequence of directed saddle
// connections traversed with the cylinder's interior on the left. Element i
// travels outward along diagram prong prongs[i]; start_pos[i] is the position
// of that cone point along the circle, measured from the start of element 0
// in direction-parameter units.
struct BoundaryCircle {
  std::vector<int> prongs;
  std::vector<Rational> start_pos;
  Rational circumference;
};

// Lengths are in parameter units along the primitive direction vector,
// heights in units of its perpendicular, so modulus = height / circumference
// is scale-free and area = height * circumference * |d|^2 is Euclidean.
//
// The twist convention: shooting perpendicularly across the cylinder from
// position s on one boundary circle lands at position (twist - s) mod c on
// the other, both measured from the start of each circle's element 0. The
// convention is symmetric in the two circles.
struct CylinderData {
  int circle_a = -1;
  int circle_b = -1;
  Rational circumference;
  Rational height;
  Rational twist;  // in [0, circumference)
  Rational area;   // Euclidean
};

struct CylinderDecomposition {
  Surface surface;  // the decomposed surface (auxiliary marking included)
  Direction direction;
  SeparatrixDiagram diagram;  // critical graph: saddle connections + ribbon
  std::vector<int> graph_component;  // flow-stop class -> component id, or -1
  int num_graph_components = 0;
  std::vector<BoundaryCircle> circles;
  std::vector<CylinderData> cylinders;  // sorted by (c, h, twist)
  // An unmarked flat torus has no separatrices; it is decomposed through a
  // copy with one auxiliary marked class, recorded here so downstream
  // operations can strip it again.
  bool torus_normalized = false;
  int aux_marked_class = -1;
};

// Decomposes the surface into maximal open cylinders in a rational direction.
// Empty result: some separatrix exceeded the crossing budget, so the
// structure is undetermined at this budget.
std::optional<CylinderDecomposition> cylinder_decomposition(
    const Surface& s, const Direction& d, long max_crossings = 100000);

// Exact fractions of the total area carried by each cylinder, in cylinder
// order; they sum to 1.
std::vector<Rational> area_weights(const CylinderDecomposition& dec);

// Canonical code of a surface that decomposes into cylinders in the given
// direction. Two surfaces in the same direction are flat-isomorphic (as
// marked flat surfaces) iff their normal forms compare equal: the code is the
// minimum, over all rootings of the critical graph's ribbon structure, of the
// flattened (combinatorics, connection lengths, cylinder c/h/twist) record.
// Flat tori carry a lattice code (c, h, twist) instead, flagged by `torus`.
struct JSNormalForm {
  bool torus = false;
  std::vector<Rational> code;
  friend bool operator==(const JSNormalForm&, const JSNormalForm&) = default;
};

JSNormalForm js_normal_form(const CylinderDecomposition& dec);
// Errors: NotJenkinsStrebel if the decomposition is undetermined at this
// budget.
JSNormalForm js_normal_form(const Surface& s,
                            const Direction& d = Direction::horizontal(),
                            long max_crossings = 100000);

// Cuts every cylinder along a vertical segment from a boundary cone point and
// reassembles the surface as one rectangle per cylinder with sub-edge
// gluings; flat-isomorphic to the input. Exposed for normal-form soundness
// checks and as the first half of shear_cylinders.
Surface rebuild_cylinder_complex(const CylinderDecomposition& dec);

// One exact upper-half-plane parameter per cylinder, in cylinder order.
using PolyplanePoint = std::vector<QHalfPlanePoint>;

// Applies x + iy -> x + lambda_j * y to the j-th cylinder of the horizontal
// decomposition and reglues. Heights scale by Im(lambda_j), circumferences
// are unchanged, twists shift by Re(lambda_j) * height.
// Errors: NotJenkinsStrebel, NotUpperHalfPlane, OutOfRange (wrong arity).
Surface shear_cylinders(const Surface& s, const PolyplanePoint& lambda,
                        long max_crossings = 100000);

// Checks that adding a full reciprocal-modulus twist 1/m_j = c_j/h_j to the
// j-th coordinate produces the same unmarked surface: the normal forms of the
// sheared surfaces must coincide (a full Dehn twist is absorbed modulo the
// circumference).
bool verify_twist_identity(const Surface& s, int j, const PolyplanePoint& lambda,
                           long max_crossings = 100000);

// Samples the non-expansion inequality between the sup of coordinatewise
// Poincare distances (right side) and a cylinder-modulus lower-bound proxy
// for the Teichmueller-side distance (left side). The proxy is
// max_j (1/2)|log(Im l1_j / Im l2_j)|, which never exceeds the right side.
struct KobayashiSample {
  double poincare_sup = 0;
  double modulus_proxy = 0;
};
KobayashiSample kobayashi_nonexpansion_sample(
    const Surface& s, const std::vector<HalfPlanePoint>& l1,
    const std::vector<HalfPlanePoint>& l2, long max_crossings = 100000);

}  // namespace polyplane
