#include "polyplane/cylinders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace polyplane {

namespace {

QVec2 rot90(const QVec2& v) { return QVec2(Rational(-v.y()), v.x()); }

QVec2 times_sign(const QVec2& v, int sign) {
  return sign > 0 ? v : QVec2(Rational(-v.x()), Rational(-v.y()));
}

// Index of the polygon edge whose closed segment contains both a and b, or
// -1. At most one edge of a simple polygon can contain a nondegenerate
// segment.
int edge_containing(const Surface& s, int poly, const QVec2& a,
                    const QVec2& b) {
  const auto& P = s.polygons[poly];
  for (int i = 0; i < P.size(); ++i) {
    QVec2 V = P.vertex(i);
    QVec2 E = P.edge(i);
    QVec2 W(V + E);
    auto on = [&](const QVec2& p) {
      return cross2<Rational>(E, QVec2(p - V)) == 0 &&
             Rational(QVec2(p - V).dot(QVec2(p - W))) <= 0;
    };
    if (on(a) && on(b)) return i;
  }
  return -1;
}

// One straight piece of a saddle connection in one polygon chart, traveling
// from a to b while the canonical connection parameter runs from t0 to t1.
struct GraphSeg {
  int conn = -1;
  QVec2 a, b;
  Rational t0, t1;
};

struct GraphStore {
  std::vector<std::vector<GraphSeg>> by_poly;
  std::set<int> pass_classes;  // regular classes some connection runs through
  long passes = 0;             // pass-through events over all re-traces
};

void store_leg(const Surface& s, GraphStore& store, int conn, int poly,
               const QVec2& a, const QVec2& b, const Rational& t0,
               const Rational& t1) {
  store.by_poly[poly].push_back({conn, a, b, t0, t1});
  // A leg lying along a glued edge belongs to both adjacent charts.
  int ei = edge_containing(s, poly, a, b);
  if (ei < 0) return;
  auto [sign, c] = s.crossing_map({poly, ei});
  QVec2 a2(times_sign(a, sign) + c), b2(times_sign(b, sign) + c);
  store.by_poly[s.partner({poly, ei}).poly].push_back({conn, a2, b2, t0, t1});
}

// Re-traces connection ci from its canonical start prong and stores every
// chart leg, so transverse shots can detect graph crossings exactly.
void collect_connection(const Surface& s, const SeparatrixDiagram& diag,
                        int ci, GraphStore& store, long budget) {
  const SaddleConnection& sc = diag.connections[ci];
  const Prong& p = diag.prongs[sc.start_prong];
  RayWalker w(s, p.corner.poly,
              s.polygons[p.corner.poly].vertex(p.corner.vert), p.dir);
  while (true) {
    if (w.events() > budget)
      fail("Internal", "connection re-trace exceeded the crossing budget");
    int poly = w.polygon();
    QVec2 a = w.position();
    Rational t0 = w.time();
    auto ev = w.advance();
    store_leg(s, store, ci, poly, a, w.position(), t0, w.time());
    if (ev.kind == RayWalker::EventKind::Crossed) {
      w.cross();
      continue;
    }
    int cls = s.class_of(ev.corner);
    if (s.class_is_flow_stop(cls)) {
      if (w.time() != sc.length)
        fail("Internal", "connection re-trace length mismatch");
      return;
    }
    store.pass_classes.insert(cls);
    ++store.passes;
    w.pass_through();
  }
}

struct CircleIndex {
  std::vector<int> circle_of;    // prong -> circle id
  std::vector<Rational> pos_of;  // prong -> start position on its circle
};

// Boundary circles are the orbits of p -> sigma^{-1}(partner(p)): traveling
// outward along prong p with the cylinder on the left and arriving at the far
// prong, the boundary continues along the previous prong in the cyclic order
// there, keeping the cylinder on the left.
CircleIndex build_circles(const SeparatrixDiagram& diag,
                          std::vector<BoundaryCircle>& circles) {
  int n = static_cast<int>(diag.prongs.size());
  std::vector<int> sigma_inv(n, -1);
  for (const auto& cp : diag.class_prongs) {
    int m = static_cast<int>(cp.size());
    for (int i = 0; i < m; ++i) sigma_inv[cp[(i + 1) % m]] = cp[i];
  }
  CircleIndex idx;
  idx.circle_of.assign(n, -1);
  idx.pos_of.assign(n, Rational(0));
  for (int start = 0; start < n; ++start) {
    if (idx.circle_of[start] >= 0) continue;
    BoundaryCircle c;
    Rational pos(0);
    int p = start;
    do {
      idx.circle_of[p] = static_cast<int>(circles.size());
      idx.pos_of[p] = pos;
      c.prongs.push_back(p);
      c.start_pos.push_back(pos);
      pos += diag.connections[diag.prong_connection[p]].length;
      p = sigma_inv[diag.prong_partner[p]];
    } while (p != start);
    c.circumference = pos;
    circles.push_back(std::move(c));
  }
  return idx;
}

struct ShotOutcome {
  bool clean = false;
  int conn = -1;
  Rational tstar;   // canonical connection parameter of the hit
  int side = 0;     // sign of cross(canonical leg direction, shot direction)
  Rational height;  // flow time from the source to the hit
};

// Flows from pos across a cylinder, perpendicular to the decomposition
// direction, until the critical graph is reached. clean=false means the shot
// ran into a vertex of the graph; the caller retries from another offset.
ShotOutcome graph_shot(const Surface& s, const GraphStore& store, int poly,
                       QVec2 pos, QVec2 dir, long budget) {
  RayWalker w(s, poly, std::move(pos), std::move(dir));
  while (w.events() <= budget) {
    int P = w.polygon();
    QVec2 A = w.position();
    QVec2 wd = w.direction();
    Rational T0 = w.time();
    auto ev = w.advance();
    Rational dt = w.time() - T0;
    std::optional<Rational> best;
    const GraphSeg* hit = nullptr;
    Rational hit_u;
    for (const GraphSeg& g : store.by_poly[P]) {
      QVec2 L(g.b - g.a);
      Rational denom = cross2<Rational>(wd, L);
      if (denom == 0)
        fail("Internal", "graph segment parallel to a transverse shot");
      QVec2 rel(g.a - A);
      Rational tau = cross2<Rational>(rel, L) / denom;
      if (!(tau > 0) || tau > dt) continue;
      // The far end of the leg is a graph point only when it lies on an
      // edge; vertex arrivals are handled as events below.
      if (tau == dt && ev.kind != RayWalker::EventKind::Crossed) continue;
      Rational u = cross2<Rational>(rel, wd) / denom;
      if (u < 0 || u > 1) continue;
      if (!best || tau < *best) {
        best = tau;
        hit = &g;
        hit_u = u;
      }
    }
    if (hit) {
      ShotOutcome out;
      out.clean = true;
      out.conn = hit->conn;
      out.tstar = Rational(hit->t0 + hit_u * (hit->t1 - hit->t0));
      QVec2 L(hit->b - hit->a);
      Rational chi = cross2<Rational>(L, wd);
      if (chi == 0) fail("Internal", "degenerate side attribution");
      out.side = chi > 0 ? 1 : -1;
      out.height = Rational(T0 + *best);
      return out;
    }
    if (ev.kind == RayWalker::EventKind::Crossed) {
      w.cross();
      continue;
    }
    int cls = s.class_of(ev.corner);
    if (s.class_is_flow_stop(cls) || store.pass_classes.count(cls) > 0)
      return {};
    w.pass_through();
  }
  fail("Internal", "transverse shot exceeded the crossing budget");
}

// A sub-arc of one boundary-circle element after splitting at cut landings.
struct TravelPiece {
  int conn = -1;
  Rational alpha, beta;  // canonical parameter interval, alpha < beta
  Rational sa, sb;       // circle positions of the piece
  int start_cls = -1;    // cone class at sa, or -1 at a split point
};

std::vector<TravelPiece> circle_pieces(
    const CylinderDecomposition& dec, const BoundaryCircle& O,
    const std::map<int, std::set<Rational>>& splits) {
  const SeparatrixDiagram& diag = dec.diagram;
  std::vector<TravelPiece> out;
  for (std::size_t i = 0; i < O.prongs.size(); ++i) {
    int r = O.prongs[i];
    int ci = diag.prong_connection[r];
    const SaddleConnection& sc = diag.connections[ci];
    bool fwd = sc.start_prong == r;
    std::vector<Rational> cuts{Rational(0), sc.length};
    if (auto it = splits.find(ci); it != splits.end())
      for (const Rational& u : it->second)
        cuts.push_back(fwd ? u : Rational(sc.length - u));
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const Rational& la = cuts[k];
      const Rational& lb = cuts[k + 1];
      if (la == lb) fail("Internal", "duplicate split parameter");
      TravelPiece tp;
      tp.conn = ci;
      tp.alpha = fwd ? la : Rational(sc.length - lb);
      tp.beta = fwd ? lb : Rational(sc.length - la);
      tp.sa = Rational(O.start_pos[i] + la);
      tp.sb = Rational(O.start_pos[i] + lb);
      tp.start_cls = la == 0 ? diag.prongs[r].cls : -1;
      out.push_back(std::move(tp));
    }
  }
  return out;
}

// Builds one rectangle per cylinder, cut vertically above the base cone point
// of its lower circle, optionally applying x+iy -> x + lambda_j * y to the
// j-th rectangle, and reglues everything along matching connection pieces.
Surface assemble_cylinder_complex(const CylinderDecomposition& dec,
                                  const PolyplanePoint* lambda) {
  const SeparatrixDiagram& diag = dec.diagram;

  // The cut over cylinder j lands on its upper circle at position twist_j;
  // landings inside a connection subdivide it (on both of its sides).
  std::map<int, std::set<Rational>> splits;
  for (const CylinderData& cd : dec.cylinders) {
    const BoundaryCircle& B = dec.circles[cd.circle_b];
    const Rational& tau = cd.twist;
    std::size_t i = B.prongs.size() - 1;
    while (B.start_pos[i] > tau) --i;
    if (B.start_pos[i] == tau) continue;  // lands on a cone point
    int r = B.prongs[i];
    int ci = diag.prong_connection[r];
    const SaddleConnection& sc = diag.connections[ci];
    Rational local = Rational(tau - B.start_pos[i]);
    if (!(local < sc.length))
      fail("Internal", "cut landing outside its boundary element");
    splits[ci].insert(sc.start_prong == r ? local
                                          : Rational(sc.length - local));
  }

  // Rectangles are laid out in direction-parameter coordinates and mapped
  // back through the rotation-by-d matrix, so a horizontal rebuild is the
  // identity frame and rational directions stay exact.
  Rational rdx(dec.direction.dx), rdy(dec.direction.dy);
  auto place = [&](const Rational& x, const Rational& y, const Rational& re,
                   const Rational& im) {
    Rational u = Rational(x + re * y);
    Rational v = Rational(im * y);
    return QVec2(Rational(rdx * u - rdy * v), Rational(rdy * u + rdx * v));
  };

  std::vector<FlatPolygonT<Rational>> polys;
  std::vector<EdgeGluing> gluings;
  std::map<std::tuple<int, Rational, Rational>,
           std::vector<std::pair<EdgeRef, QVec2>>>
      sides;
  std::map<int, CornerRef> mark_corner;  // source class -> rebuilt corner

  for (std::size_t j = 0; j < dec.cylinders.size(); ++j) {
    const CylinderData& cd = dec.cylinders[j];
    Rational re(0), im(1);
    if (lambda) {
      re = (*lambda)[j].re;
      im = (*lambda)[j].im;
    }
    auto bottom = circle_pieces(dec, dec.circles[cd.circle_a], splits);
    auto traw = circle_pieces(dec, dec.circles[cd.circle_b], splits);
    // The top boundary is traversed from the cut landing, so rotate the
    // upper circle's pieces to start at position twist.
    std::size_t rot = traw.size();
    for (std::size_t k = 0; k < traw.size(); ++k)
      if (traw[k].sa == cd.twist) {
        rot = k;
        break;
      }
    if (rot == traw.size())
      fail("Internal", "cut landing is not a piece boundary");
    std::vector<TravelPiece> top(traw.begin() + rot, traw.end());
    top.insert(top.end(), traw.begin(), traw.begin() + rot);

    int pj = static_cast<int>(polys.size());
    const Rational& c = cd.circumference;
    const Rational& h = cd.height;
    FlatPolygonT<Rational> P;
    std::vector<int> vcls;
    for (const TravelPiece& tp : bottom) {
      P.v.push_back(place(tp.sa, Rational(0), re, im));
      vcls.push_back(tp.start_cls);
    }
    P.v.push_back(place(c, Rational(0), re, im));
    vcls.push_back(-1);
    P.v.push_back(place(c, h, re, im));
    vcls.push_back(top.front().start_cls);
    Rational xh = c;
    for (std::size_t k = 0; k < top.size(); ++k) {
      Rational xlo = Rational(xh - (top[k].sb - top[k].sa));
      if (k + 1 < top.size()) {
        P.v.push_back(place(xlo, h, re, im));
        vcls.push_back(top[k + 1].start_cls);
      }
      xh = xlo;
    }
    if (xh != 0) fail("Internal", "top boundary does not close up");
    P.v.push_back(place(Rational(0), h, re, im));
    vcls.push_back(-1);

    int B = static_cast<int>(bottom.size());
    int T = static_cast<int>(top.size());
    // Edge layout: 0..B-1 bottom, B right cut, B+1..B+T top, B+T+1 left cut.
    for (int k = 0; k < B; ++k)
      sides[{bottom[k].conn, bottom[k].alpha, bottom[k].beta}].push_back(
          {EdgeRef{pj, k}, P.edge(k)});
    for (int k = 0; k < T; ++k)
      sides[{top[k].conn, top[k].alpha, top[k].beta}].push_back(
          {EdgeRef{pj, B + 1 + k}, P.edge(B + 1 + k)});
    gluings.push_back(
        {EdgeRef{pj, B}, EdgeRef{pj, B + T + 1}, GluingKind::Translation});

    for (std::size_t vi = 0; vi < vcls.size(); ++vi) {
      int cls = vcls[vi];
      if (cls < 0 || cls == dec.aux_marked_class) continue;
      if (!dec.surface.class_marked[cls]) continue;
      mark_corner.try_emplace(cls, CornerRef{pj, static_cast<int>(vi)});
    }
    polys.push_back(std::move(P));
  }

  for (const auto& [tag, lst] : sides) {
    if (lst.size() != 2)
      fail("Internal", "connection piece not matched in pairs");
    const auto& [e1, v1] = lst[0];
    const auto& [e2, v2] = lst[1];
    GluingKind kind;
    if (v2.x() == -v1.x() && v2.y() == -v1.y())
      kind = GluingKind::Translation;
    else if (v2.x() == v1.x() && v2.y() == v1.y())
      kind = GluingKind::PointReflection;
    else
      fail("Internal", "mismatched edge vectors in the rebuilt complex");
    gluings.push_back({e1, e2, kind});
  }

  std::vector<CornerRef> marked;
  marked.reserve(mark_corner.size());
  for (const auto& [cls, cr] : mark_corner) marked.push_back(cr);
  return build_surface(std::move(polys), std::move(gluings), std::move(marked));
}

}  // namespace

std::optional<CylinderDecomposition> cylinder_decomposition(
    const Surface& s, const Direction& d, long max_crossings) {
  SeparatrixDiagram diag = trace_separatrices(s, d, max_crossings);
  if (diag.undetermined) return std::nullopt;

  if (diag.prongs.empty()) {
    // No flow stops at all: an unmarked flat torus. Decompose a copy with one
    // auxiliary marked class; the cylinder data is a lattice invariant and
    // does not depend on the choice of point.
    CornerRef aux_corner = s.classes[0].front();
    Surface aux = build_surface(s.polygons, s.gluings, {aux_corner});
    auto sub = cylinder_decomposition(aux, d, max_crossings);
    if (!sub) return std::nullopt;
    sub->torus_normalized = true;
    sub->aux_marked_class = sub->surface.class_of(aux_corner);
    return sub;
  }

  CylinderDecomposition dec;
  dec.surface = s;
  dec.direction = d;

  // Critical-graph components: flow-stop classes joined by connections.
  {
    int nc = s.num_classes();
    std::vector<int> parent(nc);
    for (int i = 0; i < nc; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& sc : diag.connections)
      parent[find(sc.start_class)] = find(sc.end_class);
    dec.graph_component.assign(nc, -1);
    std::map<int, int> ids;
    for (int c = 0; c < nc; ++c) {
      if (diag.class_prongs[c].empty()) continue;
      auto [it, fresh] =
          ids.try_emplace(find(c), static_cast<int>(ids.size()));
      dec.graph_component[c] = it->second;
    }
    dec.num_graph_components = static_cast<int>(ids.size());
  }

  GraphStore store;
  store.by_poly.assign(s.num_polygons(), {});
  for (int ci = 0; ci < static_cast<int>(diag.connections.size()); ++ci)
    collect_connection(s, diag, ci, store, max_crossings + 4);

  CircleIndex idx = build_circles(diag, dec.circles);
  int ncirc = static_cast<int>(dec.circles.size());

  // Pair the circles off by shooting across each cylinder. Each far-boundary
  // cone point or pass-through vertex blocks exactly one source offset, so a
  // pool larger than their total always contains a clean shot.
  std::vector<int> paired(ncirc, -1);
  long pool = static_cast<long>(diag.prongs.size()) + store.passes + 2;
  for (int ca = 0; ca < ncirc; ++ca) {
    if (paired[ca] >= 0) continue;
    const BoundaryCircle& O = dec.circles[ca];
    const Prong& pr = diag.prongs[O.prongs[0]];
    QVec2 x0 = s.polygons[pr.corner.poly].vertex(pr.corner.vert);
    RayWalker probe(s, pr.corner.poly, x0, pr.dir);
    probe.advance();
    Rational dt0 = probe.time();
    QVec2 x1 = probe.position();
    // Perpendicular-left of the travel direction points into the cylinder
    // this circle bounds. When the first boundary leg runs along a glued
    // edge and the shot frame points out of the polygon, shoot from the
    // partner chart instead.
    QVec2 w = rot90(pr.dir);
    int poly_shot = pr.corner.poly;
    bool transport = false;
    int tsign = 1;
    QVec2 tc(Rational(0), Rational(0));
    int ei = edge_containing(s, poly_shot, x0, x1);
    if (ei >= 0) {
      Rational side = cross2<Rational>(s.polygons[poly_shot].edge(ei), w);
      if (side == 0) fail("Internal", "degenerate shot frame");
      if (side < 0) {
        auto [sg, cc] = s.crossing_map({poly_shot, ei});
        transport = true;
        tsign = sg;
        tc = cc;
        poly_shot = s.partner({poly_shot, ei}).poly;
      }
    }
    bool done = false;
    for (long jj = 1; jj <= pool + 1 && !done; ++jj) {
      Rational s0 = Rational(dt0 * Rational(jj) / Rational(pool + 2));
      QVec2 src(x0 + QVec2(pr.dir * s0));
      QVec2 wdir = w;
      if (transport) {
        src = QVec2(times_sign(src, tsign) + tc);
        wdir = times_sign(w, tsign);
      }
      ShotOutcome sh = graph_shot(s, store, poly_shot, src, wdir, max_crossings);
      if (!sh.clean) continue;
      const SaddleConnection& sc = diag.connections[sh.conn];
      // The cylinder lies behind the arrival, so a negative side means the
      // far boundary traverses the connection in its canonical direction.
      int prong_hit;
      Rational within;
      if (sh.side < 0) {
        prong_hit = sc.start_prong;
        within = sh.tstar;
      } else {
        prong_hit = sc.end_prong;
        within = Rational(sc.length - sh.tstar);
      }
      int cb = idx.circle_of[prong_hit];
      if (cb == ca)
        fail("Internal", "transverse shot returned to its own circle");
      if (paired[cb] >= 0 ||
          dec.circles[cb].circumference != O.circumference)
        fail("Internal", "inconsistent cylinder pairing");
      CylinderData cd;
      cd.circle_a = ca;
      cd.circle_b = cb;
      cd.circumference = O.circumference;
      cd.height = sh.height;
      cd.twist = rational_mod(Rational(idx.pos_of[prong_hit] + within + s0),
                              cd.circumference);
      cd.area = Rational(cd.circumference * cd.height *
                         Rational(d.dx * d.dx + d.dy * d.dy));
      paired[ca] = cb;
      paired[cb] = ca;
      dec.cylinders.push_back(cd);
      done = true;
    }
    if (!done) fail("Internal", "no clean transverse shot across a cylinder");
  }

  Rational total(0);
  for (const CylinderData& cd : dec.cylinders) total += cd.area;
  if (total != area(s))
    fail("Internal", "cylinder areas do not sum to the surface area");

  std::sort(dec.cylinders.begin(), dec.cylinders.end(),
            [](const CylinderData& a, const CylinderData& b) {
              return std::tie(a.circumference, a.height, a.twist) <
                     std::tie(b.circumference, b.height, b.twist);
            });
  dec.diagram = std::move(diag);
  return dec;
}

std::vector<Rational> area_weights(const CylinderDecomposition& dec) {
  Rational total(0);
  for (const CylinderData& cd : dec.cylinders) total += cd.area;
  std::vector<Rational> w;
  w.reserve(dec.cylinders.size());
  for (const CylinderData& cd : dec.cylinders)
    w.push_back(Rational(cd.area / total));
  return w;
}

JSNormalForm js_normal_form(const CylinderDecomposition& dec) {
  JSNormalForm nf;
  if (dec.torus_normalized) {
    nf.torus = true;
    if (dec.cylinders.size() != 1)
      fail("Internal", "a torus decomposition must have one cylinder");
    const CylinderData& cd = dec.cylinders.front();
    nf.code = {cd.circumference, cd.height, cd.twist};
    return nf;
  }

  const SeparatrixDiagram& diag = dec.diagram;
  int n = static_cast<int>(diag.prongs.size());
  if (n == 0) fail("Internal", "empty diagram outside the torus case");
  std::vector<int> sigma(n, -1);
  for (const auto& cp : diag.class_prongs) {
    int m = static_cast<int>(cp.size());
    for (int i = 0; i < m; ++i) sigma[cp[i]] = cp[(i + 1) % m];
  }
  const std::vector<int>& partner = diag.prong_partner;

  std::vector<Rational> pos_of(n, Rational(0));
  for (const BoundaryCircle& O : dec.circles)
    for (std::size_t i = 0; i < O.prongs.size(); ++i)
      pos_of[O.prongs[i]] = O.start_pos[i];

  std::vector<Rational> best;
  bool has_best = false;
  std::vector<int> label(n, -1);
  std::vector<int> order;
  order.reserve(n);

  // Emits the code of the current labeling: combinatorics and lengths per
  // prong, then cylinder records rebased to each circle's least-labeled
  // element and sorted by (circumference, height).
  auto emit = [&]() {
    std::vector<Rational> code;
    code.reserve(2 + 3 * static_cast<std::size_t>(n) +
                 5 * dec.cylinders.size());
    code.emplace_back(n);
    code.emplace_back(static_cast<int>(dec.cylinders.size()));
    for (int i = 0; i < n; ++i) {
      int p = order[i];
      code.emplace_back(label[sigma[p]]);
      code.emplace_back(label[partner[p]]);
      code.push_back(diag.connections[diag.prong_connection[p]].length);
    }
    std::vector<std::array<Rational, 5>> recs;
    recs.reserve(dec.cylinders.size());
    for (const CylinderData& cd : dec.cylinders) {
      auto scan = [&](int ci) {
        const BoundaryCircle& O = dec.circles[ci];
        std::size_t besti = 0;
        for (std::size_t i = 1; i < O.prongs.size(); ++i)
          if (label[O.prongs[i]] < label[O.prongs[besti]]) besti = i;
        return std::pair<int, Rational>(label[O.prongs[besti]],
                                        O.start_pos[besti]);
      };
      auto [la, pa] = scan(cd.circle_a);
      auto [lb, pb] = scan(cd.circle_b);
      Rational tw =
          rational_mod(Rational(cd.twist - pa - pb), cd.circumference);
      recs.push_back({cd.circumference, cd.height, Rational(std::min(la, lb)),
                      Rational(std::max(la, lb)), tw});
    }
    std::sort(recs.begin(), recs.end());
    for (const auto& r : recs) code.insert(code.end(), r.begin(), r.end());
    if (!has_best || code < best) {
      best = std::move(code);
      has_best = true;
    }
  };

  // Tries every prong as the root of its critical-graph component; each root
  // determines the rest of the labeling by breadth-first closure under the
  // cyclic successor and the far-end partner.
  std::function<void()> step = [&]() {
    if (static_cast<int>(order.size()) == n) {
      emit();
      return;
    }
    for (int r = 0; r < n; ++r) {
      if (label[r] >= 0) continue;
      std::size_t base = order.size();
      label[r] = static_cast<int>(base);
      order.push_back(r);
      for (std::size_t i = base; i < order.size(); ++i) {
        int p = order[i];
        for (int nb : {sigma[p], partner[p]}) {
          if (label[nb] < 0) {
            label[nb] = static_cast<int>(order.size());
            order.push_back(nb);
          }
        }
      }
      step();
      while (order.size() > base) {
        label[order.back()] = -1;
        order.pop_back();
      }
    }
  };
  step();
  nf.code = std::move(best);
  return nf;
}

JSNormalForm js_normal_form(const Surface& s, const Direction& d,
                            long max_crossings) {
  auto dec = cylinder_decomposition(s, d, max_crossings);
  if (!dec)
    fail("NotJenkinsStrebel",
         "the decomposition is undetermined at this crossing budget");
  return js_normal_form(*dec);
}

Surface rebuild_cylinder_complex(const CylinderDecomposition& dec) {
  return assemble_cylinder_complex(dec, nullptr);
}

Surface shear_cylinders(const Surface& s, const PolyplanePoint& lambda,
                        long max_crossings) {
  auto dec = cylinder_decomposition(s, Direction::horizontal(), max_crossings);
  if (!dec)
    fail("NotJenkinsStrebel",
         "the horizontal decomposition is undetermined at this crossing "
         "budget");
  if (lambda.size() != dec->cylinders.size())
    fail("OutOfRange",
         "expected " + std::to_string(dec->cylinders.size()) +
             " shear coordinates, got " + std::to_string(lambda.size()));
  for (const QHalfPlanePoint& z : lambda) check_upper(z);
  return assemble_cylinder_complex(*dec, &lambda);
}

bool verify_twist_identity(const Surface& s, int j,
                           const PolyplanePoint& lambda, long max_crossings) {
  auto dec = cylinder_decomposition(s, Direction::horizontal(), max_crossings);
  if (!dec)
    fail("NotJenkinsStrebel",
         "the horizontal decomposition is undetermined at this crossing "
         "budget");
  int k = static_cast<int>(dec->cylinders.size());
  if (j < 0 || j >= k) fail("OutOfRange", "cylinder index out of range");
  if (static_cast<int>(lambda.size()) != k)
    fail("OutOfRange", "expected " + std::to_string(k) +
                           " shear coordinates, got " +
                           std::to_string(lambda.size()));
  PolyplanePoint shifted = lambda;
  shifted[j].re += Rational(dec->cylinders[j].circumference /
                            dec->cylinders[j].height);
  return js_normal_form(shear_cylinders(s, shifted, max_crossings),
                        Direction::horizontal(), max_crossings) ==
         js_normal_form(shear_cylinders(s, lambda, max_crossings),
                        Direction::horizontal(), max_crossings);
}

KobayashiSample kobayashi_nonexpansion_sample(
    const Surface& s, const std::vector<HalfPlanePoint>& l1,
    const std::vector<HalfPlanePoint>& l2, long max_crossings) {
  auto dec = cylinder_decomposition(s, Direction::horizontal(), max_crossings);
  if (!dec)
    fail("NotJenkinsStrebel",
         "the horizontal decomposition is undetermined at this crossing "
         "budget");
  std::size_t k = dec->cylinders.size();
  if (l1.size() != k || l2.size() != k)
    fail("OutOfRange", "expected " + std::to_string(k) +
                           " coordinates per point");
  KobayashiSample out;
  for (std::size_t i = 0; i < k; ++i) {
    check_upper(l1[i]);
    check_upper(l2[i]);
    out.poincare_sup = std::max(
        out.poincare_sup, poincare_distance(to_complex(l1[i]), to_complex(l2[i])));
    out.modulus_proxy =
        std::max(out.modulus_proxy, 0.5 * std::abs(std::log(l1[i].im / l2[i].im)));
  }
  if (out.modulus_proxy > out.poincare_sup + 1e-12)
    fail("Internal", "modulus proxy exceeded the Poincare bound");
  return out;
}

}  // namespace polyplane
