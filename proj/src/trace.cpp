#include "polyplane/trace.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace polyplane {

namespace {

bool parallel_same(const QVec2& a, const QVec2& b) {
  return cross2<Rational>(a, b) == 0 && a.dot(b) > 0;
}

QVec2 negate(const QVec2& v) { return QVec2(-v.x(), -v.y()); }

QVec2 times_sign(const QVec2& v, int sign) { return sign > 0 ? v : negate(v); }

// Exact point-in-polygon (boundary counts as inside); used as a tripwire for
// rays that would leave the polygon through a non-convex notch.
bool inside_or_on(const FlatPolygonT<Rational>& P, const QVec2& pt) {
  int n = P.size();
  for (int i = 0; i < n; ++i) {
    QVec2 A = P.vertex(i), B = P.vertex(i + 1);
    if (cross2<Rational>(QVec2(B - A), QVec2(pt - A)) == 0 &&
        QVec2(pt - A).dot(QVec2(pt - B)) <= 0)
      return true;
  }
  bool in = false;
  for (int i = 0; i < n; ++i) {
    QVec2 A = P.vertex(i), B = P.vertex(i + 1);
    if ((A.y() > pt.y()) == (B.y() > pt.y())) continue;
    Rational x_int =
        A.x() + (pt.y() - A.y()) * (B.x() - A.x()) / (B.y() - A.y());
    if (x_int > pt.x()) in = !in;
  }
  return in;
}

}  // namespace

Direction Direction::of_vector(const QVec2& v) {
  if (v.x() == 0 && v.y() == 0)
    fail("ZeroVector", "direction needs a nonzero vector");
  BigInt ix = numerator(v.x()) * denominator(v.y());
  BigInt iy = numerator(v.y()) * denominator(v.x());
  BigInt g = gcd(ix, iy);
  ix /= g;
  iy /= g;
  if (iy < 0 || (iy == 0 && ix < 0)) {
    ix = -ix;
    iy = -iy;
  }
  return {ix, iy};
}

Direction Direction::of_slope(const Rational& slope) {
  return of_vector(QVec2(Rational(denominator(slope)), Rational(numerator(slope))));
}

bool in_half_open_sector(const QVec2& a, const QVec2& b, const QVec2& t) {
  auto at_or_ccw = [](const QVec2& x, const QVec2& y) {
    Rational c = cross2<Rational>(x, y);
    return c > 0 || (c == 0 && x.dot(y) > 0);
  };
  Rational cab = cross2<Rational>(a, b);
  if (cab == 0) {
    if (a.dot(b) > 0) fail("Internal", "degenerate sector");
    return at_or_ccw(a, t);  // half-turn sector [a, -a)
  }
  if (cab > 0) return at_or_ccw(a, t) && cross2<Rational>(t, b) > 0;
  return !(at_or_ccw(b, t) && cross2<Rational>(t, a) > 0);
}

QVec2 corner_sector_start(const Surface& s, CornerRef c) {
  return s.polygons[c.poly].edge(c.vert);
}

QVec2 corner_sector_end(const Surface& s, CornerRef c) {
  return negate(s.polygons[c.poly].edge(c.vert - 1));
}

std::pair<CornerRef, int> ccw_next_corner(const Surface& s, CornerRef c) {
  EdgeRef in_edge{c.poly, s.polygons[c.poly].mod(c.vert - 1)};
  EdgeRef partner = s.partner(in_edge);
  int sign = s.kind_at(in_edge) == GluingKind::Translation ? +1 : -1;
  return {{partner.poly, partner.edge}, sign};
}

RayWalker::RayWalker(const Surface& s, int poly, QVec2 pos, QVec2 dir)
    : s_(s), poly_(poly), pos_(std::move(pos)), dir_(std::move(dir)) {
  if (dir_.x() == 0 && dir_.y() == 0) fail("ZeroVector", "ray needs a direction");
}

RayWalker::Event RayWalker::advance() {
  if (pending_) fail("Internal", "advance() before acting on the last event");
  const auto& P = s_.polygons[poly_];
  int n = P.size();
  std::optional<Rational> best_t;
  int best_edge = -1;
  int vertex_index = -1;  // >= 0 when the boundary point is a vertex

  for (int i = 0; i < n; ++i) {
    QVec2 A = P.vertex(i);
    QVec2 e = P.edge(i);
    QVec2 AP(A - pos_);
    Rational cde = cross2<Rational>(dir_, e);
    if (cde == 0) {
      if (cross2<Rational>(AP, e) != 0) continue;  // parallel, different line
      Rational dd = dir_.dot(dir_);
      for (int k = 0; k <= 1; ++k) {
        QVec2 Q = k ? QVec2(A + e) : A;
        Rational t = QVec2(Q - pos_).dot(dir_) / dd;
        if (t > 0 && (!best_t || t < *best_t)) {
          best_t = t;
          best_edge = i;
          vertex_index = P.mod(i + k);
        }
      }
    } else {
      Rational t = cross2<Rational>(AP, e) / cde;
      if (!(t > 0)) continue;
      Rational sp = cross2<Rational>(AP, dir_) / cde;
      if (sp < 0 || sp > 1) continue;
      if (!best_t || t < *best_t) {
        best_t = t;
        best_edge = i;
        vertex_index = sp == 0 ? i : (sp == 1 ? P.mod(i + 1) : -1);
      }
    }
  }
  if (!best_t) fail("Internal", "ray found no forward exit from its polygon");

  QVec2 mid(pos_ + QVec2(dir_ * Rational(*best_t / 2)));
  if (!inside_or_on(P, mid))
    fail("Internal", "ray left its polygon outside an edge");

  pos_ = QVec2(pos_ + QVec2(dir_ * Rational(*best_t)));
  time_ += *best_t;
  ++events_;
  pending_ = true;

  if (vertex_index < 0) {
    last_ = Event{EventKind::Crossed, {poly_, best_edge}, {}, {}};
    return last_;
  }

  // Attribute the backward prong: the corner at the hit vertex whose sector
  // contains -dir, hopping once counterclockwise when -dir points exactly
  // back along the incoming edge.
  CornerRef c{poly_, vertex_index};
  QVec2 back = negate(dir_);
  if (!in_half_open_sector(corner_sector_start(s_, c), corner_sector_end(s_, c),
                           back)) {
    if (!parallel_same(back, corner_sector_end(s_, c)))
      fail("Internal", "vertex arrival outside the corner's closed sector");
    auto [next, sign] = ccw_next_corner(s_, c);
    c = next;
    back = times_sign(back, sign);
  }
  last_ = Event{EventKind::AtVertex, {}, c, back};
  return last_;
}

void RayWalker::cross() {
  if (!pending_ || last_.kind != EventKind::Crossed)
    fail("Internal", "cross() without a pending edge event");
  auto [sign, c] = s_.crossing_map(last_.edge);
  pos_ = QVec2(times_sign(pos_, sign) + c);
  dir_ = times_sign(dir_, sign);
  poly_ = s_.partner(last_.edge).poly;
  pending_ = false;
}

void RayWalker::pass_through() {
  if (!pending_ || last_.kind != EventKind::AtVertex)
    fail("Internal", "pass_through() without a pending vertex event");
  int cls = s_.class_of(last_.corner);
  if (s_.class_is_flow_stop(cls))
    fail("Internal", "pass_through() at a singular or marked vertex");

  CornerRef c = last_.corner;
  QVec2 target = negate(last_.back_dir);
  int guard = static_cast<int>(s_.classes[cls].size()) + 2;
  while (!in_half_open_sector(corner_sector_start(s_, c),
                              corner_sector_end(s_, c), target)) {
    auto [next, sign] = ccw_next_corner(s_, c);
    c = next;
    target = times_sign(target, sign);
    if (--guard < 0) fail("Internal", "pass-through walk did not close up");
  }
  poly_ = c.poly;
  pos_ = s_.polygons[c.poly].v[c.vert];
  dir_ = target;
  pending_ = false;
}

RayResult trace_ray(const Surface& s, int poly, const QVec2& start,
                    const QVec2& dir, long max_crossings,
                    const std::vector<int>& extra_stops) {
  RayWalker walker(s, poly, start, dir);
  std::vector<EdgeRef> crossings;
  while (walker.events() <= max_crossings) {
    RayWalker::Event ev = walker.advance();
    if (ev.kind == RayWalker::EventKind::Crossed) {
      crossings.push_back(ev.edge);
      walker.cross();
      continue;
    }
    int cls = s.class_of(ev.corner);
    bool stop = s.class_is_flow_stop(cls) ||
                std::find(extra_stops.begin(), extra_stops.end(), cls) !=
                    extra_stops.end();
    if (stop)
      return RayResult{true,
                       {ev.corner, ev.back_dir, walker.time(), std::move(crossings)}};
    walker.pass_through();
  }
  return RayResult{};
}

SeparatrixDiagram trace_separatrices(const Surface& s, const Direction& d,
                                     long max_crossings) {
  SeparatrixDiagram out;
  out.direction = d;
  QVec2 dv = d.vec();

  out.class_prongs.assign(s.num_classes(), {});
  std::map<std::pair<std::pair<int, int>, int>, int> keyed;
  for (int cls = 0; cls < s.num_classes(); ++cls) {
    if (!s.class_is_flow_stop(cls)) continue;
    CornerRef start =
        *std::min_element(s.classes[cls].begin(), s.classes[cls].end());
    CornerRef c = start;
    int guard = static_cast<int>(s.classes[cls].size()) + 1;
    do {
      QVec2 w = corner_sector_start(s, c), e = corner_sector_end(s, c);
      bool plus = in_half_open_sector(w, e, dv);
      bool minus = in_half_open_sector(w, e, negate(dv));
      std::vector<int> signs;
      if (plus && minus) {
        // order counterclockwise from the sector start
        bool plus_first = parallel_same(dv, w) ||
                          (!parallel_same(negate(dv), w) &&
                           in_half_open_sector(w, negate(dv), dv));
        signs = plus_first ? std::vector<int>{+1, -1} : std::vector<int>{-1, +1};
      } else if (plus) {
        signs = {+1};
      } else if (minus) {
        signs = {-1};
      }
      for (int sign : signs) {
        int id = static_cast<int>(out.prongs.size());
        out.prongs.push_back({cls, c, times_sign(dv, sign)});
        out.class_prongs[cls].push_back(id);
        keyed[{{c.poly, c.vert}, sign}] = id;
      }
      c = ccw_next_corner(s, c).first;
      if (--guard < 0) fail("Internal", "corner walk did not close up");
    } while (c != start);
    if (static_cast<int>(out.class_prongs[cls].size()) !=
        s.class_angle_multiple[cls])
      fail("Internal", "prong count does not match the cone angle");
  }

  int n = static_cast<int>(out.prongs.size());
  out.prong_partner.assign(n, -1);
  out.prong_connection.assign(n, -1);
  std::vector<Rational> times(n);
  std::vector<std::vector<EdgeRef>> crossings(n);

  for (int p = 0; p < n; ++p) {
    const Prong& prong = out.prongs[p];
    QVec2 origin = s.polygons[prong.corner.poly].v[prong.corner.vert];
    RayResult r =
        trace_ray(s, prong.corner.poly, origin, prong.dir, max_crossings);
    if (!r.hit) {
      out.undetermined = true;
      continue;
    }
    int sign = parallel_same(r.at.back_dir, dv) ? +1 : -1;
    auto it = keyed.find({{r.at.corner.poly, r.at.corner.vert}, sign});
    if (it == keyed.end())
      fail("Internal", "separatrix arrived at a prong that was not enumerated");
    out.prong_partner[p] = it->second;
    times[p] = r.at.time;
    crossings[p] = std::move(r.at.crossings);
  }

  for (int p = 0; p < n; ++p) {
    int q = out.prong_partner[p];
    if (q < 0) continue;
    if (q == p || out.prong_partner[q] != p)
      fail("Internal", "separatrix tracing is not an involution on prongs");
    if (q < p) continue;
    SaddleConnection sc;
    sc.start_prong = p;
    sc.end_prong = q;
    sc.start_class = out.prongs[p].cls;
    sc.end_class = out.prongs[q].cls;
    sc.length = times[p];
    sc.holonomy = QVec2(out.prongs[p].dir * times[p]);
    sc.crossings = crossings[p];
    int id = static_cast<int>(out.connections.size());
    out.prong_connection[p] = out.prong_connection[q] = id;
    out.connections.push_back(std::move(sc));
  }
  return out;
}

}  // namespace polyplane
