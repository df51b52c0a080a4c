// L-shaped pillowcases, the one-loop/two-loop critical-graph classification,
// shear normalization back to the L family, cylinder collapse, and branched
// double covers. Oracles are hand-worked from the doubled-hexagon geometry.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "polyplane/cylinders.hpp"
#include "polyplane/pillowcase.hpp"

using namespace polyplane;
using namespace polyplane::fixtures;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

LPillowParams lp(long h1, long h2, const char* q) {
  return {Rational(h1), Rational(h2), parse_rational(q)};
}

std::vector<int> classes_with_multiple(const Surface& s, int k) {
  std::vector<int> out;
  for (int c = 0; c < s.num_classes(); ++c)
    if (s.class_angle_multiple[c] == k) out.push_back(c);
  return out;
}

std::vector<int> pole_classes(const Surface& s) {
  return classes_with_multiple(s, 1);
}

int zero_degree(const S05Case& c) {
  int deg = 0;
  for (const auto& e : c.witness) {
    if (e.class_a == c.zero_class) ++deg;
    if (e.class_b == c.zero_class) ++deg;
  }
  return deg;
}

std::vector<Rational> sorted_lengths(const S05Case& c) {
  std::vector<Rational> out;
  for (const auto& e : c.witness) out.push_back(e.length);
  std::sort(out.begin(), out.end());
  return out;
}

Rational rnd_rational(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, hi);
  return make_rational(BigInt(num(rng)), BigInt(den(rng)));
}

}  // namespace

TEST_CASE("the doubled L-hexagon carries five poles and one simple zero") {
  for (const char* q : {"1/2", "3", "7/5"}) {
    Surface s = make_l_pillowcase(lp(1, 1, q));
    StratumSignature sig = stratum(s);
    CHECK(sig.orders == std::vector<int>{1, -1, -1, -1, -1, -1});
    CHECK(sig.genus == 0);
    CHECK(sig.num_punctures == 5);
    CHECK(area(s) == 2 * (parse_rational(q) + 1));
  }
  Surface s = make_l_pillowcase(lp(2, 3, "3"));
  CHECK(area(s) == 2 * (Rational(3) * 2 + 3));
}

TEST_CASE("the square member keeps two cylinders through a marked merge point") {
  // At q = 1 the reflex corner collides with a pole: the zero cancels and
  // only a marked regular point splits the two cylinders.
  Surface s = make_l_pillowcase(lp(1, 1, "1"));
  StratumSignature sig = stratum(s);
  CHECK(sig.orders == std::vector<int>{0, -1, -1, -1, -1});
  CHECK(sig.genus == 0);
  CHECK(sig.num_punctures == 5);
  CHECK(area(s) == 4);
  auto dec = cylinder_decomposition(s, Direction::horizontal());
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 2);
  CHECK(dec->cylinders[0].circumference == 2);
  CHECK(dec->cylinders[1].circumference == 2);
  CHECK(dec->cylinders[0].height == 1);
  CHECK(dec->cylinders[1].height == 1);
  CHECK(dec->num_graph_components == 3);
}

TEST_CASE("horizontal cylinders have the advertised heights and lengths") {
  auto pairs = [](const Surface& s) {
    auto dec = cylinder_decomposition(s, Direction::horizontal());
    REQUIRE(dec.has_value());
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& cd : dec->cylinders)
      out.emplace_back(cd.circumference, cd.height);
    return out;
  };
  using P = std::pair<Rational, Rational>;
  CHECK(pairs(make_l_pillowcase(lp(1, 2, "1/2"))) ==
        std::vector<P>{{Rational(1), Rational(1)}, {Rational(2), Rational(2)}});
  CHECK(pairs(make_l_pillowcase(lp(2, 3, "3"))) ==
        std::vector<P>{{Rational(2), Rational(3)}, {Rational(6), Rational(2)}});
  LPillowParams p = lp(2, 3, "3");
  CHECK(p.top_circumference() == 6);
  CHECK(p.bottom_circumference() == 2);
}

TEST_CASE("area weights split as q : 1") {
  for (const char* qs : {"1/2", "1", "3"}) {
    Rational q = parse_rational(qs);
    Surface s = make_l_pillowcase({Rational(1), Rational(1), q});
    auto dec = cylinder_decomposition(s, Direction::horizontal());
    REQUIRE(dec.has_value());
    auto w = area_weights(*dec);
    REQUIRE(w.size() == 2);
    for (int j = 0; j < 2; ++j) {
      if (dec->cylinders[j].circumference == 2 * q)
        CHECK(w[j] == q / (1 + q));
      else
        CHECK(w[j] == 1 / (1 + q));
    }
    CHECK(w[0] + w[1] == 1);
  }
}

TEST_CASE("the normal form ignores the presentation") {
  // Same hexagon listed from a different starting vertex.
  Rational h2(2), top(3), q = parse_rational("1/2");
  FlatPolygonT<Rational> rotated;
  rotated.v = {QVec2(q, h2),          QVec2(q, top), QVec2(Rational(0), top),
               QVec2(Rational(0), Rational(0)), QVec2(Rational(1), Rational(0)),
               QVec2(Rational(1), h2)};
  CHECK(js_normal_form(mirror_double(rotated)) ==
        js_normal_form(make_l_pillowcase(lp(1, 2, "1/2"))));
}

TEST_CASE("the symmetric square member is invariant under the cylinder swap") {
  Rational h(2), H(4);
  // The flip exchanging the two cylinders relists the marked pentagon upside
  // down; the doubled surfaces must agree exactly.
  FlatPolygonT<Rational> flipped;
  flipped.v = {QVec2(Rational(0), H), QVec2(Rational(0), Rational(0)),
               QVec2(Rational(1), Rational(0)), QVec2(Rational(1), h),
               QVec2(Rational(1), H)};
  CHECK(js_normal_form(mirror_double(flipped, {3})) ==
        js_normal_form(make_l_pillowcase({h, h, Rational(1)})));
}

TEST_CASE("parameter validation") {
  CHECK(error_code([] { make_l_pillowcase(lp(0, 1, "1")); }) ==
        "NonPositiveParameter");
  CHECK(error_code([] { make_l_pillowcase(lp(1, -1, "1")); }) ==
        "NonPositiveParameter");
  CHECK(error_code([] { make_l_pillowcase(lp(1, 1, "0")); }) ==
        "NonPositiveParameter");
  FlatPolygonT<Rational> tri;
  tri.v = {QVec2(Rational(0), Rational(0)), QVec2(Rational(1), Rational(0)),
           QVec2(Rational(0), Rational(1))};
  CHECK(error_code([&] { mirror_double(tri); }) == "BadPolygon");
}

TEST_CASE("the two-cylinder surface classifies as a loop at the zero") {
  Surface s = make_l_pillowcase(lp(1, 1, "1/2"));
  S05Case c = classify_s05(s);
  CHECK(c.tag == S05Tag::Case2);
  CHECK(c.decomposition.cylinders.size() == 2);
  REQUIRE(c.witness.size() == 4);
  int loops = 0;
  for (const auto& e : c.witness)
    if (e.class_a == c.zero_class && e.class_b == c.zero_class) {
      ++loops;
      CHECK(e.length == 1);  // the loop walks the top bar in both copies
    }
  CHECK(loops == 1);
  CHECK(zero_degree(c) == 3);
  CHECK(sorted_lengths(c) ==
        std::vector<Rational>{parse_rational("1/2"), parse_rational("1/2"),
                              Rational(1), Rational(1)});
}

TEST_CASE("the one-cylinder surface classifies as three pole rays") {
  Surface s = one_cylinder_five_pole_sphere(1, 2, 3, 1);
  CHECK(stratum(s).orders == std::vector<int>{1, -1, -1, -1, -1, -1});
  CHECK(area(s) == 12);
  S05Case c = classify_s05(s);
  CHECK(c.tag == S05Tag::Case1);
  REQUIRE(c.decomposition.cylinders.size() == 1);
  CHECK(c.decomposition.cylinders[0].circumference == 12);
  CHECK(c.decomposition.cylinders[0].height == 1);
  CHECK(c.decomposition.num_graph_components == 2);
  REQUIRE(c.witness.size() == 4);
  CHECK(zero_degree(c) == 3);
  for (const auto& e : c.witness)
    CHECK_FALSE((e.class_a == c.zero_class && e.class_b == c.zero_class));
  CHECK(sorted_lengths(c) == std::vector<Rational>{Rational(1), Rational(2),
                                                   Rational(3), Rational(6)});
}

TEST_CASE("classification rejects other strata") {
  CHECK(error_code([] { classify_s05(two_square_pillowcase()); }) ==
        "WrongStratum");
  CHECK(error_code([] { classify_s05(square_torus()); }) == "WrongStratum");
  // The q = 1 member has no zero left to classify.
  CHECK(error_code([] { classify_s05(make_l_pillowcase(lp(1, 1, "1"))); }) ==
        "WrongStratum");
}

TEST_CASE("the tag always matches the cylinder count") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 10; ++trial) {
    Rational h1 = rnd_rational(rng, 1, 4), h2 = rnd_rational(rng, 1, 4);
    std::uniform_int_distribution<int> qn(1, 5);
    int a = qn(rng), b = qn(rng);
    if (a == b) ++a;  // keep q away from the degenerate square member
    Surface two = make_l_pillowcase({h1, h2, make_rational(a, b)});
    PolyplanePoint twist = {{rnd_rational(rng, -3, 3), Rational(1)},
                            {rnd_rational(rng, -3, 3), Rational(1)}};
    S05Case c2 = classify_s05(shear_cylinders(two, twist));
    CHECK(c2.tag == S05Tag::Case2);
    CHECK(c2.decomposition.cylinders.size() == 2);

    Surface one = one_cylinder_five_pole_sphere(
        rnd_rational(rng, 1, 4), rnd_rational(rng, 1, 4),
        rnd_rational(rng, 1, 4), rnd_rational(rng, 1, 4));
    S05Case c1 = classify_s05(
        shear_cylinders(one, {{rnd_rational(rng, -3, 3), Rational(1)}}));
    CHECK(c1.tag == S05Tag::Case1);
    CHECK(c1.decomposition.cylinders.size() == 1);
  }
}

TEST_CASE("an L-shaped surface normalizes to itself") {
  Surface s = make_l_pillowcase(lp(1, 2, "1/2"));
  LNormalization n = shear_to_L(s);
  CHECK(n.params.h1 == 1);
  CHECK(n.params.h2 == 2);
  CHECK(n.params.q == parse_rational("1/2"));
  CHECK(n.mu[0] == 0);
  CHECK(n.mu[1] == 0);
}

TEST_CASE("normalization inverts a known shear") {
  Surface base = make_l_pillowcase(lp(1, 1, "1/2"));
  // Cylinder 0 is the length-q cylinder (circumference 1 < 2); push its
  // twist by 3/10.
  Rational r = parse_rational("3/10");
  Surface sheared = shear_cylinders(base, {{r, Rational(1)}, {Rational(0), Rational(1)}});
  LNormalization n = shear_to_L(sheared);
  CHECK(n.params.h1 == 1);
  CHECK(n.params.h2 == 1);
  CHECK(n.params.q == parse_rational("1/2"));
  // mu undoes the shear modulo a HALF twist, not a full one: the far circle
  // of the short cylinder is a fold with its two poles half a circumference
  // apart, so twisting by c/2 swaps the poles and reproduces the same
  // surface. The period of cylinder 0 is therefore c/(2h) = q = 1/2.
  CHECK(rational_mod(n.mu[0] + r, parse_rational("1/2")) == 0);
  CHECK(n.mu[1] == 0);
  Surface back = shear_cylinders(
      sheared, {{n.mu[0], Rational(1)}, {n.mu[1], Rational(1)}});
  CHECK(js_normal_form(back) == js_normal_form(base));
}

TEST_CASE("random twist perturbations round-trip exactly") {
  std::mt19937_64 rng(911);
  for (int trial = 0; trial < 8; ++trial) {
    Rational h1 = rnd_rational(rng, 1, 3), h2 = rnd_rational(rng, 1, 3);
    std::uniform_int_distribution<int> qn(1, 4);
    int a = qn(rng), b = qn(rng);
    if (a == b) ++a;
    Rational q = make_rational(a, b);
    Surface base = make_l_pillowcase({h1, h2, q});
    PolyplanePoint twist = {{rnd_rational(rng, -4, 4), Rational(1)},
                            {rnd_rational(rng, -4, 4), Rational(1)}};
    Surface sheared = shear_cylinders(base, twist);
    LNormalization n = shear_to_L(sheared);
    CHECK(n.params.h1 == h1);
    CHECK(n.params.h2 == h2);
    CHECK(n.params.q == q);
    Surface back = shear_cylinders(
        sheared, {{n.mu[0], Rational(1)}, {n.mu[1], Rational(1)}});
    CHECK(js_normal_form(back) == js_normal_form(base));
  }
}

TEST_CASE("pillowcase cylinders absorb half twists through the pole swap") {
  // Each cylinder of the family has a fold circle whose two poles sit half a
  // circumference apart. Twisting by c/2 maps that fold to itself (it swaps
  // the poles), so unlike cylinders with rigid circles on both sides the
  // half twist already reproduces the same unmarked surface.
  for (LPillowParams p : {lp(1, 1, "1"), lp(1, 2, "1/2")}) {
    Surface s = make_l_pillowcase(p);
    auto dec = cylinder_decomposition(s, Direction::horizontal());
    REQUIRE(dec.has_value());
    for (int j = 0; j < 2; ++j) {
      PolyplanePoint half = {{Rational(0), Rational(1)},
                             {Rational(0), Rational(1)}};
      half[j].re = dec->cylinders[j].circumference /
                   (2 * dec->cylinders[j].height);
      CHECK(js_normal_form(shear_cylinders(s, half)) == js_normal_form(s));
    }
  }
}

TEST_CASE("normalization demands the family scale") {
  // Tripling the hexagon moves both circumferences off 2.
  Rational q = parse_rational("1/2");
  FlatPolygonT<Rational> tripled;
  tripled.v = {QVec2(Rational(0), Rational(0)), QVec2(Rational(3), Rational(0)),
               QVec2(Rational(3), Rational(3)), QVec2(3 * q, Rational(3)),
               QVec2(3 * q, Rational(6)),       QVec2(Rational(0), Rational(6))};
  Surface off_scale = mirror_double(tripled);
  CHECK(stratum(off_scale).orders == std::vector<int>{1, -1, -1, -1, -1, -1});
  CHECK(error_code([&] { shear_to_L(off_scale); }) == "OutOfRange");

  // Doubling happens to land the top bar on circumference 2, which presents
  // the same surface as the member with q = 2 read from the other side.
  FlatPolygonT<Rational> doubled;
  doubled.v = {QVec2(Rational(0), Rational(0)), QVec2(Rational(2), Rational(0)),
               QVec2(Rational(2), Rational(2)), QVec2(Rational(1), Rational(2)),
               QVec2(Rational(1), Rational(4)), QVec2(Rational(0), Rational(4))};
  LNormalization n = shear_to_L(mirror_double(doubled));
  CHECK(n.params.h1 == 2);
  CHECK(n.params.h2 == 2);
  CHECK(n.params.q == 2);

  CHECK(error_code([] { shear_to_L(one_cylinder_five_pole_sphere(1, 1, 1, 1)); }) ==
        "NotCase2");
}

TEST_CASE("the direction search finds a two-cylinder direction") {
  Surface s = one_cylinder_five_pole_sphere(1, 1, 1, 1);
  auto d = find_two_cylinder_direction(s, 8);
  REQUIRE(d.has_value());
  CHECK(*d == Direction::vertical());
  auto dec = cylinder_decomposition(s, *d);
  REQUIRE(dec.has_value());
  CHECK(dec->cylinders.size() >= 2);
}

TEST_CASE("the search skips directions that stay one-cylinder") {
  // For this member the vertical leaf closes up through every strip, so the
  // vertical direction is again one cylinder and the search must go on.
  Surface s = one_cylinder_five_pole_sphere(2, 1, 1, 1);
  auto vertical = cylinder_decomposition(s, Direction::vertical());
  REQUIRE(vertical.has_value());
  CHECK(vertical->cylinders.size() == 1);
  auto d = find_two_cylinder_direction(s, 8);
  REQUIRE(d.has_value());
  CHECK_FALSE(*d == Direction::vertical());
  auto dec = cylinder_decomposition(s, *d);
  REQUIRE(dec.has_value());
  CHECK(dec->cylinders.size() >= 2);
}

TEST_CASE("the search reports exhaustion as a value") {
  Surface s = one_cylinder_five_pole_sphere(1, 1, 1, 1);
  CHECK_FALSE(find_two_cylinder_direction(s, 0).has_value());
  CHECK(error_code([] {
          find_two_cylinder_direction(make_l_pillowcase(lp(1, 1, "1/2")), 5);
        }) == "OutOfRange");
  CHECK(error_code([] {
          find_two_cylinder_direction(two_square_pillowcase(), 5);
        }) == "WrongStratum");
}

TEST_CASE("collapsing the top cylinder leaves a marked pillowcase") {
  CollapsedPillow c = collapse_top(lp(1, 2, "1/2"), parse_rational("1/4"));
  CHECK(c.h2 == 2);
  CHECK(c.slit_position == parse_rational("1/4"));
  Surface s = make_collapsed_pillow(c);
  CHECK(stratum(s).orders == std::vector<int>{0, -1, -1, -1, -1});
  CHECK(stratum(s).genus == 0);
  CHECK(stratum(s).num_punctures == 5);
  CHECK(area(s) == 4);
  auto dec = cylinder_decomposition(s, Direction::horizontal());
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 1);
  CHECK(dec->cylinders[0].circumference == 2);
  CHECK(dec->cylinders[0].height == 2);

  // h1 = 0 is allowed: the collapsed member only remembers h2 and the slit.
  CollapsedPillow c0 = collapse_top({Rational(0), Rational(1), parse_rational("3/4")},
                                    Rational(0));
  CHECK(c0.slit_position == parse_rational("3/4"));
  CollapsedPillow c1 = collapse_top(lp(1, 1, "3"), parse_rational("5/2"));
  CHECK(c1.slit_position == parse_rational("1/2"));
}

TEST_CASE("collapse parameter validation") {
  CHECK(error_code([] { collapse_top(lp(1, 1, "1/2"), parse_rational("1/2")); }) ==
        "OutOfRange");
  CHECK(error_code([] { collapse_top(lp(1, 1, "1/2"), Rational(-1)); }) ==
        "OutOfRange");
  CHECK(error_code([] { collapse_top(lp(1, 1, "3"), Rational(1)); }) ==
        "OutOfRange");
  CHECK(error_code([] { collapse_top(lp(1, 0, "1/2"), Rational(0)); }) ==
        "NonPositiveParameter");
  CHECK(error_code([] {
          collapse_top({Rational(-1), Rational(1), parse_rational("1/2")},
                       Rational(0));
        }) == "NonPositiveParameter");
  CHECK(error_code([] {
          make_collapsed_pillow({Rational(1), Rational(1)});
        }) == "OutOfRange");
}

TEST_CASE("branching the pillowcase over all four poles yields a flat torus") {
  Surface s = two_square_pillowcase();
  std::vector<int> branch = pole_classes(s);
  REQUIRE(branch.size() == 4);
  Surface cover = branched_double_cover(s, branch);
  CHECK(stratum(cover).orders.empty());
  CHECK(cover.genus() == 1);
  CHECK(stratum(cover).num_punctures == 0);
  CHECK(area(cover) == 4);
  auto dec = cylinder_decomposition(cover, Direction::horizontal());
  REQUIRE(dec.has_value());
  CHECK(dec->torus_normalized);
}

TEST_CASE("branching the L-pillowcase over four poles lifts the zero twice") {
  Surface s = make_l_pillowcase(lp(1, 1, "1/2"));
  std::vector<int> poles = pole_classes(s);
  REQUIRE(poles.size() == 5);
  for (int skip : {0, 4}) {
    std::vector<int> branch;
    for (int i = 0; i < 5; ++i)
      if (i != skip) branch.push_back(poles[i]);
    Surface cover = branched_double_cover(s, branch);
    // Two simple zeros from the unbranched zero, two poles over the spared
    // pole, nothing from the branched ones.
    CHECK(stratum(cover).orders == std::vector<int>{1, 1, -1, -1});
    CHECK(cover.genus() == 1);
    CHECK(stratum(cover).num_punctures == 2);
    CHECK(area(cover) == 6);
  }
}

TEST_CASE("a branched zero doubles its cone angle") {
  Surface s = make_l_pillowcase(lp(1, 1, "1/2"));
  std::vector<int> poles = pole_classes(s);
  std::vector<int> zero = classes_with_multiple(s, 3);
  REQUIRE(zero.size() == 1);
  std::vector<int> branch = {zero[0], poles[0], poles[1], poles[2]};
  Surface cover = branched_double_cover(s, branch);
  CHECK(stratum(cover).orders == std::vector<int>{4, -1, -1, -1, -1});
  CHECK(cover.genus() == 1);
  CHECK(stratum(cover).num_punctures == 4);
  CHECK(classes_with_multiple(cover, 6).size() == 1);
}

TEST_CASE("a branched marked point lifts to a double zero") {
  Surface s = make_collapsed_pillow({Rational(2), parse_rational("1/2")});
  std::vector<int> poles = pole_classes(s);
  REQUIRE(poles.size() == 4);
  int m = -1;
  for (int c = 0; c < s.num_classes(); ++c)
    if (s.class_angle_multiple[c] == 2 && s.class_marked[c]) m = c;
  REQUIRE(m >= 0);
  Surface cover = branched_double_cover(s, {m, poles[0], poles[1], poles[2]});
  CHECK(stratum(cover).orders == std::vector<int>{2, -1, -1});
  CHECK(cover.genus() == 1);
  CHECK(stratum(cover).num_punctures == 2);
  CHECK(area(cover) == 8);
}

TEST_CASE("cover validation") {
  Surface s = two_square_pillowcase();
  CHECK(error_code([&] { branched_double_cover(s, {}); }) == "Disconnected");
  CHECK(error_code([&] { branched_double_cover(s, {0, 1, 2}); }) ==
        "InconsistentMonodromy");
  CHECK(error_code([&] { branched_double_cover(s, {0, 0, 1, 2}); }) ==
        "OutOfRange");
  CHECK(error_code([&] { branched_double_cover(s, {0, 1, 2, 9}); }) ==
        "OutOfRange");
  CHECK(error_code([] { branched_double_cover(square_torus(), {0}); }) ==
        "WrongStratum");

  // An unmarked straight vertex is a regular point, not a valid branch class.
  FlatPolygonT<Rational> pent;
  pent.v = {QVec2(Rational(0), Rational(0)), QVec2(Rational(1), Rational(0)),
            QVec2(Rational(1), Rational(1)), QVec2(parse_rational("1/2"), Rational(1)),
            QVec2(Rational(0), Rational(1))};
  Surface cosmetic = mirror_double(pent);
  std::vector<int> straight = classes_with_multiple(cosmetic, 2);
  REQUIRE(straight.size() == 1);
  std::vector<int> poles = pole_classes(cosmetic);
  CHECK(error_code([&] {
          branched_double_cover(cosmetic,
                                {straight[0], poles[0], poles[1], poles[2]});
        }) == "OutOfRange");
  // Branched over its poles it is still the torus cover: the cosmetic vertex
  // lifts to two regular points.
  Surface cover = branched_double_cover(cosmetic, poles);
  CHECK(stratum(cover).orders.empty());
  CHECK(cover.genus() == 1);
  CHECK(area(cover) == 4);
}
