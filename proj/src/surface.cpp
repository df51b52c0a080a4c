#include "polyplane/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

namespace polyplane {

namespace {

constexpr double kAngleTol = 1e-9;

template <class S>
bool is_zero(const S& x) {
  if constexpr (std::is_same_v<S, double>)
    return std::abs(x) <= 1e-9;
  else
    return x == 0;
}

template <class S>
bool vec_eq(const Vec2<S>& a, const Vec2<S>& b) {
  return is_zero<S>(S(a.x() - b.x())) && is_zero<S>(S(a.y() - b.y()));
}

template <class S>
int sign_of(const S& x) {
  if (is_zero(x)) return 0;
  return x > 0 ? 1 : -1;
}

template <class S>
int orient(const Vec2<S>& a, const Vec2<S>& b, const Vec2<S>& c) {
  return sign_of(cross2<S>(Vec2<S>(b - a), Vec2<S>(c - a)));
}

template <class S>
bool on_segment(const Vec2<S>& p, const Vec2<S>& a, const Vec2<S>& b) {
  if (orient(a, b, p) != 0) return false;
  return !(sign_of(S(p.x() - a.x())) * sign_of(S(p.x() - b.x())) > 0 ||
           sign_of(S(p.y() - a.y())) * sign_of(S(p.y() - b.y())) > 0);
}

// Closed-segment intersection test (any shared point counts).
template <class S>
bool segments_touch(const Vec2<S>& a, const Vec2<S>& b, const Vec2<S>& c,
                    const Vec2<S>& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;  // proper crossing
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
         on_segment(b, c, d);
}

double to_angle_double(const Rational& x) { return to_double(x); }
double to_angle_double(double x) { return x; }

template <class S>
double interior_angle(const FlatPolygonT<S>& p, int i) {
  Vec2<S> u = p.edge(i - 1);  // incoming
  Vec2<S> w = p.edge(i);      // outgoing
  double cx = to_angle_double(cross2<S>(u, w));
  double dx = to_angle_double(S(u.dot(w)));
  return std::numbers::pi - std::atan2(cx, dx);
}

template <class S>
void validate_polygon(const FlatPolygonT<S>& p, int index) {
  auto where = [&](int v) {
    std::ostringstream os;
    os << "polygon " << index << ", vertex " << v;
    return os.str();
  };
  int n = p.size();
  if (n < 3) fail("BadPolygon", "polygon " + std::to_string(index) + " has fewer than 3 vertices");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (vec_eq<S>(p.v[i], p.v[j]))
        fail("BadPolygon", "repeated vertex at " + where(j));
  for (int i = 0; i < n; ++i) {
    Vec2<S> e = p.edge(i);
    if (is_zero<S>(e.x()) && is_zero<S>(e.y()))
      fail("BadPolygon", "zero-length edge at " + where(i));
  }
  // No cusps: consecutive edges must not fold straight back.
  for (int i = 0; i < n; ++i) {
    Vec2<S> u = p.edge(i - 1), w = p.edge(i);
    if (is_zero(cross2<S>(u, w)) && sign_of(S(u.dot(w))) < 0)
      fail("BadPolygon", "zero-angle corner at " + where(i));
  }
  // CCW orientation via shoelace.
  S twice_area(0);
  for (int i = 0; i < n; ++i) twice_area += cross2<S>(p.vertex(i), p.vertex(i + 1));
  if (sign_of(twice_area) <= 0)
    fail("BadPolygon", "polygon " + std::to_string(index) + " is not CCW with positive area");
  // Simplicity: non-adjacent edges must not meet at all.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch<S>(p.vertex(i), p.vertex(i + 1), p.vertex(j), p.vertex(j + 1)))
        fail("BadPolygon", "self-intersection between edges " + std::to_string(i) +
                               " and " + std::to_string(j) + " of polygon " +
                               std::to_string(index));
    }
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

template <class S>
int SurfaceT<S>::num_edges() const {
  int slots = 0;
  for (const auto& p : polygons) slots += p.size();
  return slots / 2;
}

template <class S>
int SurfaceT<S>::genus() const {
  int chi = num_classes() - num_edges() + num_polygons();
  return (2 - chi) / 2;
}

template <class S>
EdgeRef SurfaceT<S>::partner(EdgeRef e) const {
  const EdgeGluing& g = gluing_at(e);
  return g.a == e ? g.b : g.a;
}

template <class S>
std::pair<int, Vec2<S>> SurfaceT<S>::crossing_map(EdgeRef e) const {
  EdgeRef f = partner(e);
  const auto& pe = polygons[e.poly];
  const auto& pf = polygons[f.poly];
  Vec2<S> start_e = pe.vertex(e.edge);
  Vec2<S> end_f = pf.vertex(f.edge + 1);
  if (kind_at(e) == GluingKind::Translation)
    return {+1, Vec2<S>(end_f - start_e)};
  return {-1, Vec2<S>(end_f + start_e)};
}

template <class S>
SurfaceT<S> build_surface(std::vector<FlatPolygonT<S>> polygons,
                          std::vector<EdgeGluing> gluings,
                          std::vector<CornerRef> marked_points) {
  SurfaceT<S> s;
  s.polygons = std::move(polygons);
  s.gluings = std::move(gluings);
  s.marked = std::move(marked_points);

  if (s.polygons.empty()) fail("BadPolygon", "surface needs at least one polygon");
  for (int i = 0; i < s.num_polygons(); ++i) validate_polygon(s.polygons[i], i);

  auto edge_ok = [&](EdgeRef e) {
    return e.poly >= 0 && e.poly < s.num_polygons() && e.edge >= 0 &&
           e.edge < s.polygons[e.poly].size();
  };

  // Index gluings; every edge slot must appear in exactly one.
  s.edge_gluing.assign(s.num_polygons(), {});
  for (int p = 0; p < s.num_polygons(); ++p)
    s.edge_gluing[p].assign(s.polygons[p].size(), -1);
  for (int gi = 0; gi < static_cast<int>(s.gluings.size()); ++gi) {
    const EdgeGluing& g = s.gluings[gi];
    if (!edge_ok(g.a) || !edge_ok(g.b))
      fail("EdgeMismatch", "gluing " + std::to_string(gi) + " references a nonexistent edge");
    if (g.a == g.b)
      fail("EdgeMismatch",
           "gluing " + std::to_string(gi) +
               " glues an edge to itself; subdivide at the fold point instead");
    for (EdgeRef e : {g.a, g.b}) {
      if (s.edge_gluing[e.poly][e.edge] != -1)
        fail("NonManifold", "edge (" + std::to_string(e.poly) + "," +
                                std::to_string(e.edge) + ") appears in two gluings");
      s.edge_gluing[e.poly][e.edge] = gi;
    }
    Vec2<S> va = s.polygons[g.a.poly].edge(g.a.edge);
    Vec2<S> vb = s.polygons[g.b.poly].edge(g.b.edge);
    bool ok = g.kind == GluingKind::Translation ? vec_eq<S>(vb, Vec2<S>(-va))
                                                : vec_eq<S>(vb, va);
    if (!ok)
      fail("EdgeMismatch", "gluing " + std::to_string(gi) +
                               " violates its edge-vector condition");
  }
  for (int p = 0; p < s.num_polygons(); ++p)
    for (int e = 0; e < s.polygons[p].size(); ++e)
      if (s.edge_gluing[p][e] == -1)
        fail("NonManifold", "edge (" + std::to_string(p) + "," + std::to_string(e) +
                                ") is not glued");

  // Polygons must be connected through gluings.
  {
    std::vector<char> seen(s.num_polygons(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int p = q.front();
      q.pop();
      for (int e = 0; e < s.polygons[p].size(); ++e) {
        int other = s.partner({p, e}).poly;
        if (!seen[other]) {
          seen[other] = 1;
          q.push(other);
        }
      }
    }
    for (char c : seen)
      if (!c) fail("Disconnected", "polygons are not connected by the gluings");
  }

  // Vertex classes: each gluing identifies start(a)~end(b) and end(a)~start(b).
  std::vector<int> offset(s.num_polygons() + 1, 0);
  for (int p = 0; p < s.num_polygons(); ++p)
    offset[p + 1] = offset[p] + s.polygons[p].size();
  auto corner_id = [&](CornerRef c) {
    return offset[c.poly] + s.polygons[c.poly].mod(c.vert);
  };
  UnionFind uf(offset.back());
  for (const EdgeGluing& g : s.gluings) {
    uf.unite(corner_id({g.a.poly, g.a.edge}), corner_id({g.b.poly, g.b.edge + 1}));
    uf.unite(corner_id({g.a.poly, g.a.edge + 1}), corner_id({g.b.poly, g.b.edge}));
  }

  std::vector<int> root_to_class(offset.back(), -1);
  s.corner_class.assign(s.num_polygons(), {});
  for (int p = 0; p < s.num_polygons(); ++p)
    s.corner_class[p].assign(s.polygons[p].size(), -1);
  for (int p = 0; p < s.num_polygons(); ++p) {
    for (int v = 0; v < s.polygons[p].size(); ++v) {
      int root = uf.find(corner_id({p, v}));
      if (root_to_class[root] == -1) {
        root_to_class[root] = static_cast<int>(s.classes.size());
        s.classes.emplace_back();
      }
      int cls = root_to_class[root];
      s.corner_class[p][v] = cls;
      s.classes[cls].push_back({p, v});
    }
  }

  // Cone angles: sum interior angles per class, snap to a multiple of pi.
  s.class_angle_multiple.assign(s.num_classes(), 0);
  for (int cls = 0; cls < s.num_classes(); ++cls) {
    double sum = 0;
    for (CornerRef c : s.classes[cls]) sum += interior_angle(s.polygons[c.poly], c.vert);
    double k = sum / std::numbers::pi;
    int snapped = static_cast<int>(std::lround(k));
    if (snapped < 1 || std::abs(sum - snapped * std::numbers::pi) > kAngleTol)
      fail("BadConeAngle", "vertex class " + std::to_string(cls) +
                               " has cone angle " + std::to_string(sum) +
                               ", not a positive multiple of pi");
    s.class_angle_multiple[cls] = snapped;
  }

  // Marked classes; angle-pi classes are punctures whether listed or not.
  s.class_marked.assign(s.num_classes(), 0);
  for (CornerRef c : s.marked) {
    if (c.poly < 0 || c.poly >= s.num_polygons() || c.vert < 0 ||
        c.vert >= s.polygons[c.poly].size())
      fail("BadPolygon", "marked point references a nonexistent corner");
    s.class_marked[s.class_of(c)] = 1;
  }
  for (int cls = 0; cls < s.num_classes(); ++cls)
    if (s.class_angle_multiple[cls] == 1) s.class_marked[cls] = 1;

  // Consistency: chi even, and Gauss-Bonnet (sum of orders = 4g - 4) is
  // automatic from the combinatorics; check it anyway.
  int chi = s.num_classes() - s.num_edges() + s.num_polygons();
  if (chi % 2 != 0 || chi > 2)
    fail("NonManifold", "gluing does not produce a closed oriented surface");
  int order_sum = 0;
  for (int m : s.class_angle_multiple) order_sum += m - 2;
  if (order_sum != 4 * s.genus() - 4)
    fail("BadConeAngle", "cone angles violate Gauss-Bonnet");

  return s;
}

template <class S>
std::vector<Singularity> singularities(const SurfaceT<S>& s) {
  std::vector<Singularity> out;
  for (int cls = 0; cls < s.num_classes(); ++cls) {
    bool marked = s.class_marked[cls];
    int multiple = s.class_angle_multiple[cls];
    if (multiple == 2 && !marked) continue;
    Singularity sing;
    sing.class_id = cls;
    sing.order = multiple - 2;
    sing.is_puncture = marked;
    sing.corners = s.classes[cls];
    out.push_back(std::move(sing));
  }
  return out;
}

template <class S>
StratumSignature stratum(const SurfaceT<S>& s) {
  StratumSignature sig;
  for (const Singularity& sing : singularities(s)) {
    sig.orders.push_back(sing.order);
    if (sing.is_puncture) ++sig.num_punctures;
  }
  std::sort(sig.orders.rbegin(), sig.orders.rend());
  sig.genus = s.genus();
  return sig;
}

template <class S>
S area(const SurfaceT<S>& s) {
  S twice(0);
  for (const auto& p : s.polygons)
    for (int i = 0; i < p.size(); ++i) twice += cross2<S>(p.vertex(i), p.vertex(i + 1));
  return S(twice / 2);
}

RealSurface to_real(const Surface& s) {
  std::vector<FlatPolygonT<double>> polys;
  polys.reserve(s.polygons.size());
  for (const auto& p : s.polygons) {
    FlatPolygonT<double> q;
    q.v.reserve(p.v.size());
    for (const auto& v : p.v) q.v.push_back(to_double(v));
    polys.push_back(std::move(q));
  }
  return build_surface<double>(std::move(polys), s.gluings, s.marked);
}

template struct SurfaceT<Rational>;
template struct SurfaceT<double>;
template Surface build_surface<Rational>(std::vector<FlatPolygonT<Rational>>,
                                         std::vector<EdgeGluing>,
                                         std::vector<CornerRef>);
template RealSurface build_surface<double>(std::vector<FlatPolygonT<double>>,
                                           std::vector<EdgeGluing>,
                                           std::vector<CornerRef>);
template std::vector<Singularity> singularities<Rational>(const Surface&);
template std::vector<Singularity> singularities<double>(const RealSurface&);
template StratumSignature stratum<Rational>(const Surface&);
template StratumSignature stratum<double>(const RealSurface&);
template Rational area<Rational>(const Surface&);
template double area<double>(const RealSurface&);

}  // namespace polyplane
