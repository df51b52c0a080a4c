#pragma once

#include <utility>
#include <vector>

#include "polyplane/surface.hpp"

namespace polyplane {

// An unoriented rational direction on the surface, stored as a primitive
// integer vector with dy > 0, or (1, 0) for horizontal. Transition maps send
// {+d, -d} to itself, so a direction is globally well defined.
struct Direction {
  BigInt dx{1}, dy{0};

  static Direction horizontal() { return {}; }
  static Direction vertical() { return {BigInt(0), BigInt(1)}; }
  static Direction of_slope(const Rational& slope);
  static Direction of_vector(const QVec2& v);  // error ZeroVector

  QVec2 vec() const { return QVec2(Rational(dx), Rational(dy)); }
  QVec2 perp() const { return QVec2(Rational(-dy), Rational(dx)); }
  bool operator==(const Direction&) const = default;
};

// An outgoing ray of the foliation at a singular or marked vertex class.
// `dir` is +/- the direction vector, expressed in the chart of `corner`; the
// corner is the one whose half-open angular sector [outgoing edge, -incoming
// edge) contains the ray.
struct Prong {
  int cls = -1;
  CornerRef corner;
  QVec2 dir;
};

// A maximal straight segment of the foliation joining two prongs (possibly at
// the same class). Holonomy is measured in the chart of the start prong and
// points along it; crossings lists the glued edges traversed, in order.
struct SaddleConnection {
  int start_prong = -1, end_prong = -1;
  int start_class = -1, end_class = -1;
  QVec2 holonomy;
  Rational length;  // parameter time along the primitive direction vector
  std::vector<EdgeRef> crossings;
};

// All prongs of a surface in a fixed direction, with the separatrix traced
// from each. If any trace exceeds the crossing budget the diagram is marked
// undetermined and the affected prongs have partner -1.
struct SeparatrixDiagram {
  Direction direction;
  std::vector<Prong> prongs;
  std::vector<std::vector<int>> class_prongs;  // class -> prong ids, CCW cyclic
  std::vector<int> prong_partner;              // prong at the far end, or -1
  std::vector<int> prong_connection;           // connection id, or -1
  std::vector<SaddleConnection> connections;   // each connection listed once
  bool undetermined = false;
};

SeparatrixDiagram trace_separatrices(const Surface& s, const Direction& d,
                                     long max_crossings = 100000);

// --- low-level straight-line flow ---------------------------------------

// Walks a ray through the surface one boundary event at a time. The caller
// drives the loop: advance() moves to the next edge or vertex of the current
// polygon, cross() steps through a glued edge, pass_through() continues
// through a regular vertex. Directions always point weakly into the current
// polygon; all arithmetic is exact.
class RayWalker {
 public:
  enum class EventKind { Crossed, AtVertex };
  struct Event {
    EventKind kind;
    EdgeRef edge;      // for Crossed: the edge reached (not yet crossed)
    CornerRef corner;  // for AtVertex: corner owning the backward prong
    QVec2 back_dir;    // for AtVertex: backward prong direction, its chart
  };

  RayWalker(const Surface& s, int poly, QVec2 pos, QVec2 dir);

  Event advance();      // move to the next boundary point of this polygon
  void cross();         // after Crossed: step through the gluing
  void pass_through();  // after AtVertex at a regular unmarked class

  int polygon() const { return poly_; }
  const QVec2& position() const { return pos_; }
  const QVec2& direction() const { return dir_; }
  const Rational& time() const { return time_; }
  long events() const { return events_; }

 private:
  const Surface& s_;
  int poly_;
  QVec2 pos_, dir_;
  Rational time_{0};
  long events_ = 0;
  Event last_{};
  bool pending_ = false;  // an un-acted-on event is outstanding
};

// Traces from a point until a vertex of a stopping class is hit: a class
// stops the ray if it is singular, marked, or listed in extra_stops.
struct RayHit {
  CornerRef corner;
  QVec2 back_dir;
  Rational time;
  std::vector<EdgeRef> crossings;
};
struct RayResult {
  bool hit = false;  // false: exceeded max_crossings
  RayHit at;
};
RayResult trace_ray(const Surface& s, int poly, const QVec2& start,
                    const QVec2& dir, long max_crossings,
                    const std::vector<int>& extra_stops = {});

// Half-open counterclockwise sector test: is t in [a, b)? Sector angles may
// be anything in (0, 2*pi); all tests exact.
bool in_half_open_sector(const QVec2& a, const QVec2& b, const QVec2& t);

// The two boundary rays of a corner's angular sector: from the outgoing edge
// direction counterclockwise to the reversed incoming edge direction.
QVec2 corner_sector_start(const Surface& s, CornerRef c);
QVec2 corner_sector_end(const Surface& s, CornerRef c);

// The next corner counterclockwise around the vertex class (across the
// incoming edge's gluing) and the sign of that crossing map.
std::pair<CornerRef, int> ccw_next_corner(const Surface& s, CornerRef c);

}  // namespace polyplane
