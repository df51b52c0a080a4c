#include "polyplane/pillowcase.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace polyplane {

namespace {

QVec2 qv2(const Rational& x, const Rational& y) { return QVec2(x, y); }

const char* k_undetermined_msg =
    "the decomposition is undetermined at this crossing budget";

// Positions of the cone points along a boundary circle, measured from the
// start of element 0.
std::vector<Rational> cone_positions(const BoundaryCircle& c) {
  return c.start_pos;
}

// The horizontal decomposition or a NotJenkinsStrebel failure.
CylinderDecomposition horizontal_decomposition(const Surface& s,
                                               long max_crossings) {
  auto dec = cylinder_decomposition(s, Direction::horizontal(), max_crossings);
  if (!dec) fail("NotJenkinsStrebel", k_undetermined_msg);
  return std::move(*dec);
}

}  // namespace

Surface mirror_double(const FlatPolygonT<Rational>& p,
                      const std::vector<int>& marked_vertices) {
  const int n = p.size();
  if (n < 3) fail("BadPolygon", "a polygon needs at least three vertices");
  for (int j = 0; j < n; ++j) {
    QVec2 e = p.edge(j);
    if (e.x() != 0 && e.y() != 0)
      fail("BadPolygon", "mirror doubling requires axis-parallel edges");
  }
  // The mirror copy: reflect across y = 0 and reverse the walk to stay CCW.
  // Edge j of p then pairs with edge n-1-j of the copy; horizontal edges come
  // out reversed (Translation), vertical edges equal (PointReflection), and
  // both identifications match the geometric fold point for point.
  FlatPolygonT<Rational> m;
  m.v.resize(n);
  for (int i = 0; i < n; ++i) {
    const QVec2& v = p.v[(n - i) % n];
    m.v[i] = qv2(v.x(), -v.y());
  }
  std::vector<EdgeGluing> gluings;
  gluings.reserve(n);
  for (int j = 0; j < n; ++j) {
    GluingKind kind = p.edge(j).y() == 0 ? GluingKind::Translation
                                         : GluingKind::PointReflection;
    gluings.push_back({{0, j}, {1, n - 1 - j}, kind});
  }
  std::vector<CornerRef> marked;
  marked.reserve(marked_vertices.size());
  for (int i : marked_vertices) {
    if (i < 0 || i >= n) fail("OutOfRange", "marked vertex index out of range");
    marked.push_back({0, i});
  }
  return build_surface<Rational>({p, m}, std::move(gluings), std::move(marked));
}

Surface make_l_pillowcase(const LPillowParams& p) {
  if (!(p.h1 > 0) || !(p.h2 > 0) || !(p.q > 0))
    fail("NonPositiveParameter",
         "the L-shaped pillowcase needs h1, h2, q all positive");
  const Rational top = p.h1 + p.h2;
  FlatPolygonT<Rational> hex;
  std::vector<int> marked;
  if (p.q == 1) {
    // Degenerate member: the reflex corner lands on the right edge, the zero
    // cancels against the pole there, and only a marked regular point
    // remembers the merge. Kept so the two-cylinder structure survives.
    hex.v = {qv2(0, 0), qv2(1, 0), qv2(1, p.h2), qv2(1, top), qv2(0, top)};
    marked = {2};
  } else {
    hex.v = {qv2(0, 0),   qv2(1, 0),   qv2(1, p.h2),
             qv2(p.q, p.h2), qv2(p.q, top), qv2(0, top)};
  }
  return mirror_double(hex, marked);
}

S05Case classify_s05(const Surface& s, long max_crossings) {
  StratumSignature sig = stratum(s);
  const std::vector<int> want = {1, -1, -1, -1, -1, -1};
  if (sig.orders != want)
    fail("WrongStratum",
         "classification needs exactly five simple poles and one simple zero");

  S05Case result;
  result.decomposition = horizontal_decomposition(s, max_crossings);
  const CylinderDecomposition& dec = result.decomposition;

  for (int cls = 0; cls < s.num_classes(); ++cls)
    if (s.class_angle_multiple[cls] == 3) result.zero_class = cls;

  for (const SaddleConnection& con : dec.diagram.connections) {
    CriticalGraphEdge e;
    e.class_a = std::min(con.start_class, con.end_class);
    e.class_b = std::max(con.start_class, con.end_class);
    e.length = con.length;
    result.witness.push_back(e);
  }
  std::sort(result.witness.begin(), result.witness.end(),
            [](const CriticalGraphEdge& a, const CriticalGraphEdge& b) {
              return std::tie(a.class_a, a.class_b, a.length) <
                     std::tie(b.class_a, b.class_b, b.length);
            });

  bool loop_at_zero = false;
  for (const CriticalGraphEdge& e : result.witness)
    if (e.class_a == result.zero_class && e.class_b == result.zero_class)
      loop_at_zero = true;

  const int n = static_cast<int>(dec.cylinders.size());
  if (n == 1 && !loop_at_zero) {
    result.tag = S05Tag::Case1;
  } else if (n == 2 && loop_at_zero) {
    result.tag = S05Tag::Case2;
  } else {
    fail("Internal",
         "cylinder count and critical graph disagree with the dichotomy");
  }
  return result;
}

LNormalization shear_to_L(const Surface& s, long max_crossings) {
  S05Case c = classify_s05(s, max_crossings);
  if (c.tag != S05Tag::Case2)
    fail("NotCase2",
         "shearing to the L-shaped form needs a two-cylinder critical graph");
  const CylinderDecomposition& dec = c.decomposition;
  const std::vector<CylinderData>& cyl = dec.cylinders;

  // The two circumferences are distinct (loop length vs loop plus twice the
  // tail); the length-1 role must already be scaled to circumference 2.
  int i2 = -1;
  for (int j = 0; j < 2; ++j)
    if (cyl[j].circumference == 2) i2 = j;
  if (i2 < 0)
    fail("OutOfRange",
         "the surface is not on the family's scale: no cylinder has "
         "circumference 2");
  const int i1 = 1 - i2;

  LNormalization out;
  out.params = {cyl[i1].height, cyl[i2].height, cyl[i1].circumference / 2};

  Surface target = make_l_pillowcase(out.params);
  auto target_dec = cylinder_decomposition(target, Direction::horizontal(),
                                           max_crossings);
  if (!target_dec) fail("Internal", "the reference surface did not decompose");
  JSNormalForm target_form = js_normal_form(*target_dec);

  // Candidate shears per cylinder: a successful shear aligns some cone-point
  // pair of this cylinder's circles with some cone-point pair of the matching
  // reference cylinder, so enumerating those alignments modulo the full-twist
  // period covers every possibility; the normal form then certifies a global
  // match.
  std::array<std::vector<Rational>, 2> cands;
  for (int j = 0; j < 2; ++j) {
    const CylinderData& cj = cyl[j];
    int tj = -1;
    for (int k = 0; k < 2; ++k)
      if (target_dec->cylinders[k].circumference == cj.circumference) tj = k;
    if (tj < 0) fail("Internal", "reference cylinders do not match");
    const CylinderData& ct = target_dec->cylinders[tj];

    std::set<Rational> base_free;  // reference twists with basepoints removed
    for (const Rational& a : cone_positions(target_dec->circles[ct.circle_a]))
      for (const Rational& b : cone_positions(target_dec->circles[ct.circle_b]))
        base_free.insert(rational_mod(ct.twist - a - b, ct.circumference));

    const Rational period = cj.circumference / cj.height;
    std::set<Rational> mu_set;
    for (const Rational& a : cone_positions(dec.circles[cj.circle_a]))
      for (const Rational& b : cone_positions(dec.circles[cj.circle_b]))
        for (const Rational& x : base_free) {
          Rational mu = (x + a + b - cj.twist) / cj.height;
          mu_set.insert(rational_mod(mu, period));
        }
    cands[j].assign(mu_set.begin(), mu_set.end());
  }

  for (const Rational& mu0 : cands[0]) {
    for (const Rational& mu1 : cands[1]) {
      PolyplanePoint lambda = {{mu0, Rational(1)}, {mu1, Rational(1)}};
      Surface sheared = shear_cylinders(s, lambda, max_crossings);
      if (js_normal_form(sheared, Direction::horizontal(), max_crossings) ==
          target_form) {
        out.mu = {mu0, mu1};
        return out;
      }
    }
  }
  fail("Internal", "no candidate shear reached the L-shaped normal form");
}

std::optional<Direction> find_two_cylinder_direction(const Surface& s,
                                                     int search_bound,
                                                     long max_crossings) {
  S05Case c = classify_s05(s, max_crossings);
  if (c.tag != S05Tag::Case1)
    fail("OutOfRange",
         "the direction search needs a one-cylinder (Case 1) surface");

  auto try_direction = [&](const Direction& d) {
    auto dec = cylinder_decomposition(s, d, max_crossings);
    return dec && dec->cylinders.size() >= 2;
  };

  if (search_bound >= 1 && try_direction(Direction::vertical()))
    return Direction::vertical();

  // Positive slopes in breadth-first mediant order, each with both signs.
  struct Interval {
    long long ln, ld, rn, rd;
  };
  std::queue<Interval> queue;
  queue.push({0, 1, 1, 0});
  while (!queue.empty()) {
    Interval iv = queue.front();
    queue.pop();
    long long num = iv.ln + iv.rn, den = iv.ld + iv.rd;
    if (std::max(num, den) > search_bound) continue;
    Direction up = Direction::of_vector(qv2(Rational(den), Rational(num)));
    if (try_direction(up)) return up;
    Direction down = Direction::of_vector(qv2(Rational(den), Rational(-num)));
    if (try_direction(down)) return down;
    queue.push({iv.ln, iv.ld, num, den});
    queue.push({num, den, iv.rn, iv.rd});
  }
  return std::nullopt;
}

CollapsedPillow collapse_top(const LPillowParams& p, const Rational& t) {
  if (p.h1 < 0 || !(p.h2 > 0) || !(p.q > 0))
    fail("NonPositiveParameter",
         "collapsing needs h2 and q positive and h1 nonnegative");
  if (t < 0 || !(t < p.q))
    fail("OutOfRange", "the collapse parameter must satisfy 0 <= t < q");
  CollapsedPillow out{p.h2, p.q - t};
  if (!(out.slit_position < 1))
    fail("OutOfRange",
         "the marked point q - t must fall strictly inside the unit edge");
  return out;
}

Surface make_collapsed_pillow(const CollapsedPillow& c) {
  if (!(c.h2 > 0))
    fail("NonPositiveParameter", "the collapsed pillowcase needs h2 positive");
  if (!(c.slit_position > 0) || !(c.slit_position < 1))
    fail("OutOfRange", "the marked point must lie strictly inside the top edge");
  FlatPolygonT<Rational> pent;
  pent.v = {qv2(0, 0), qv2(1, 0), qv2(1, c.h2), qv2(c.slit_position, c.h2),
            qv2(0, c.h2)};
  return mirror_double(pent, {3});
}

Surface branched_double_cover(const Surface& s,
                              const std::vector<int>& branch_classes) {
  if (s.genus() != 0)
    fail("WrongStratum", "the double-cover construction needs a genus-0 base");

  std::vector<int> branch = branch_classes;
  std::sort(branch.begin(), branch.end());
  if (std::adjacent_find(branch.begin(), branch.end()) != branch.end())
    fail("OutOfRange", "branch classes must be distinct");
  for (int cls : branch) {
    if (cls < 0 || cls >= s.num_classes())
      fail("OutOfRange", "branch class index out of range");
    if (s.class_angle_multiple[cls] % 2 == 0 && !s.class_marked[cls])
      fail("OutOfRange",
           "branch points must be odd-angle singularities or marked points");
  }
  if (branch.size() % 2 != 0)
    fail("InconsistentMonodromy",
         "a double cover needs an even number of branch points");

  // One mod-2 unknown per gluing (does crossing it swap the sheets), one
  // equation per vertex class: the walk around a class crosses each incident
  // gluing once per end, and must swap sheets exactly at branch classes.
  const int num_g = static_cast<int>(s.gluings.size());
  const int num_c = s.num_classes();
  std::vector<std::vector<char>> row(num_c,
                                     std::vector<char>(num_g + 1, 0));
  for (int g = 0; g < num_g; ++g) {
    EdgeRef a = s.gluings[g].a;
    const FlatPolygonT<Rational>& poly = s.polygons[a.poly];
    int start_cls = s.class_of({a.poly, a.edge});
    int end_cls = s.class_of({a.poly, poly.mod(a.edge + 1)});
    row[start_cls][g] ^= 1;
    row[end_cls][g] ^= 1;
  }
  for (int cls : branch) row[cls][num_g] ^= 1;

  std::vector<int> pivot_of_row;
  int rank = 0;
  for (int col = 0; col < num_g && rank < num_c; ++col) {
    int sel = -1;
    for (int r = rank; r < num_c; ++r)
      if (row[r][col]) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(row[rank], row[sel]);
    for (int r = 0; r < num_c; ++r)
      if (r != rank && row[r][col])
        for (int k = col; k <= num_g; ++k) row[r][k] ^= row[rank][k];
    pivot_of_row.push_back(col);
    ++rank;
  }
  for (int r = rank; r < num_c; ++r)
    if (row[r][num_g])
      fail("InconsistentMonodromy",
           "the branch set admits no consistent sheet assignment");
  std::vector<char> omega(num_g, 0);  // free unknowns stay 0
  for (int r = 0; r < rank; ++r) omega[pivot_of_row[r]] = row[r][num_g];

  const int n = s.num_polygons();
  std::vector<FlatPolygonT<Rational>> polys;
  polys.reserve(2 * n);
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int i = 0; i < n; ++i) polys.push_back(s.polygons[i]);

  std::vector<EdgeGluing> gluings;
  gluings.reserve(2 * num_g);
  for (int g = 0; g < num_g; ++g) {
    const EdgeGluing& base = s.gluings[g];
    int flip = omega[g] ? n : 0;
    gluings.push_back({{base.a.poly, base.a.edge},
                       {base.b.poly + flip, base.b.edge},
                       base.kind});
    gluings.push_back({{base.a.poly + n, base.a.edge},
                       {base.b.poly + (n - flip), base.b.edge},
                       base.kind});
  }

  // Marks lift to the two preimages of unbranched marked classes; pole
  // classes re-mark themselves automatically. A branched preimage has its
  // angle doubled into a genuine cone point (or an unmarked regular point),
  // so it carries no mark.
  std::vector<char> is_branch(num_c, 0);
  for (int cls : branch) is_branch[cls] = 1;
  std::vector<CornerRef> marked;
  for (int cls = 0; cls < num_c; ++cls) {
    if (!s.class_marked[cls] || is_branch[cls]) continue;
    if (s.class_angle_multiple[cls] == 1) continue;  // poles auto-mark
    CornerRef rep = s.classes[cls].front();
    marked.push_back({rep.poly, rep.vert});
    marked.push_back({rep.poly + n, rep.vert});
  }

  return build_surface<Rational>(std::move(polys), std::move(gluings),
                                 std::move(marked));
}

}  // namespace polyplane
