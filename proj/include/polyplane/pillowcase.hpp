#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polyplane/cylinders.hpp"
#include "polyplane/surface.hpp"
#include "polyplane/trace.hpp"

namespace polyplane {

// The five-punctured-sphere toolkit: quadratic differentials with five simple
// poles and one simple zero, built by doubling right-angled L-shaped hexagons,
// classified by their horizontal critical graph, and normalized back to the
// L-shaped family by per-cylinder shears.

// Parameters of the L-shaped pillowcase family. The underlying hexagon is the
// union of a bottom bar of width 1 and height h2 with a top bar of width q and
// height h1, both flush left; doubling it across a horizontal mirror walks
// each side twice, so the two horizontal cylinders have (height,
// circumference) = (h1, 2q) and (h2, 2).
struct LPillowParams {
  Rational h1;  // height of the length-q cylinder
  Rational h2;  // height of the length-1 cylinder
  Rational q;   // side length of the top bar; the bottom bar is normalized to 1

  // Circumferences of the doubled cylinders (the hexagon side is walked once
  // in each mirror copy).
  Rational top_circumference() const { return Rational(2) * q; }
  Rational bottom_circumference() const { return Rational(2); }
};

// Doubles an axis-parallel simple CCW polygon across a horizontal mirror:
// two copies glued along corresponding boundary edges, horizontal edges by
// Translation and vertical edges by PointReflection, so every corner of
// interior angle theta becomes a cone point of angle 2*theta. Entries of
// marked_vertices are vertex indices of p whose classes are marked.
// Errors: BadPolygon (non-axis-parallel edge, or p fails validation).
Surface mirror_double(const FlatPolygonT<Rational>& p,
                      const std::vector<int>& marked_vertices = {});

// Builds the doubled L-shaped hexagon. For q != 1 the reflex corner doubles
// to the simple zero and the five right angles to simple poles, giving
// signature {-1, -1, -1, -1, -1, 1} in genus 0. At q = 1 the hexagon
// degenerates to a rectangle: the zero cancels against the pole it collides
// with, and the merge site is kept as a marked regular point on the right
// edge (signature {-1, -1, -1, -1, 0}); the horizontal decomposition still
// has the two advertised cylinders.
// Errors: NonPositiveParameter.
Surface make_l_pillowcase(const LPillowParams& p);

// The horizontal critical graph of a five-poles-one-zero surface admits
// exactly two shapes: either all three horizontal rays leaving the zero end
// at poles and there is one cylinder (Case1), or one ray returns to the zero
// as a loop and there are two cylinders (Case2).
enum class S05Tag { Case1, Case2 };

// One saddle connection of the critical graph, as an unordered edge between
// vertex classes (class_a <= class_b) with its length in direction-parameter
// units.
struct CriticalGraphEdge {
  int class_a = -1;
  int class_b = -1;
  Rational length;
};

struct S05Case {
  S05Tag tag = S05Tag::Case1;
  int zero_class = -1;
  std::vector<CriticalGraphEdge> witness;  // sorted by (class_a, class_b, length)
  CylinderDecomposition decomposition;     // horizontal
};

// Classifies a horizontally Jenkins-Strebel surface with five simple poles
// and one simple zero.
// Errors: WrongStratum (signature is not five -1's and one +1),
// NotJenkinsStrebel (undetermined at this crossing budget).
S05Case classify_s05(const Surface& s, long max_crossings = 100000);

// Result of normalizing a two-cylinder surface back to the L-shaped family:
// shear_cylinders(s, {mu[0] + i, mu[1] + i}) is flat-isomorphic to
// make_l_pillowcase(params). mu is indexed like the horizontal cylinder list
// (sorted order) and lies in [0, c_j / h_j), the full-twist period. Each
// cylinder of the family also absorbs a half twist (its fold circle carries
// two poles half a circumference apart, so twisting by c_j / 2 swaps them and
// reproduces the same surface); the smallest shear that verifiably restores
// the normal form is returned.
struct LNormalization {
  std::array<Rational, 2> mu;
  LPillowParams params;
};

// Finds the real shear parts returning a Case2 surface to its L-shaped
// normal form. The input must carry the family's scale: the two-cylinder
// graph forces distinct circumferences, and the one playing the length-1
// role must equal 2 exactly (the shear action cannot rescale, so other
// scales can never reach the family).
// Errors: those of classify_s05; NotCase2; OutOfRange (no circumference-2
// cylinder).
LNormalization shear_to_L(const Surface& s, long max_crossings = 100000);

// Searches rational directions for one whose cylinder decomposition has at
// least two cylinders, on a surface whose horizontal direction has only one
// (Case1). Candidates are the vertical direction followed by slopes p/q in
// breadth-first mediant order with max(p, q) <= search_bound, each taken with
// both signs. Returns the first success; an exhausted search returns nullopt
// rather than an error.
// Errors: those of classify_s05; OutOfRange (the input is Case2).
std::optional<Direction> find_two_cylinder_direction(const Surface& s,
                                                     int search_bound,
                                                     long max_crossings = 100000);

// The pillowcase left behind when the top cylinder collapses (h1 -> 0): a
// doubled rectangle of width 1 and height h2 whose top edge keeps a marked
// regular point where the zero cancelled against a pole.
struct CollapsedPillow {
  Rational h2;
  Rational slit_position;  // marked-point parameter on the top edge, in (0, 1)
};

// Collapses the top cylinder of the family member (h1, h2, q) while sliding
// the marked point: the result has slit_position = q - t.
// Errors: NonPositiveParameter (h2 or q nonpositive, or h1 negative;
// h1 = 0 is allowed since the top cylinder is discarded), OutOfRange
// (t outside [0, q), or q - t outside the open unit edge).
CollapsedPillow collapse_top(const LPillowParams& p, const Rational& t);

// Builds the doubled rectangle with the marked regular point; signature
// {-1, -1, -1, -1, 0}, one horizontal cylinder (h2, 2).
// Errors: NonPositiveParameter, OutOfRange.
Surface make_collapsed_pillow(const CollapsedPillow& c);

// The double cover of a genus-0 surface branched over the given vertex
// classes. Sheets swap exactly across the gluings selected by a mod-2
// cochain whose boundary is the branch indicator; cone angles double at the
// (single) preimage of each branch class and are copied to the two preimages
// of every other class. Simple poles therefore lift to regular points when
// branched and to pole pairs when not, a branched marked regular point lifts
// to one double zero, and an unbranched simple zero lifts to two simple
// zeros. Marked points lift to marked points at unbranched classes only; a
// branched preimage is a cone point (or regular) and carries no mark.
// Errors: WrongStratum (base not genus 0), OutOfRange (unknown, repeated, or
// even-angle unmarked branch class), InconsistentMonodromy (odd-size branch
// set, or no consistent sheet assignment), Disconnected (empty branch set:
// the trivial cover falls apart).
Surface branched_double_cover(const Surface& s,
                              const std::vector<int>& branch_classes);

}  // namespace polyplane
