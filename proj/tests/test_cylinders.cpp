// Cylinder decompositions, normal forms, and the per-cylinder shear action,
// checked against hand-worked decompositions of the fixture surfaces.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "polyplane/affine.hpp"
#include "polyplane/cylinders.hpp"

using namespace polyplane;
using namespace polyplane::fixtures;

namespace {

QHalfPlanePoint qh(std::string_view re, std::string_view im) {
  return {parse_rational(re), parse_rational(im)};
}

std::vector<std::pair<Rational, Rational>> ch_list(
    const CylinderDecomposition& dec) {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& cd : dec.cylinders)
    out.emplace_back(cd.circumference, cd.height);
  return out;
}

}  // namespace

TEST_CASE("unmarked square torus is one unit cylinder") {
  Surface t = square_torus();
  auto dec = cylinder_decomposition(t, Direction::horizontal());
  REQUIRE(dec.has_value());
  CHECK(dec->torus_normalized);
  CHECK(dec->aux_marked_class >= 0);
  REQUIRE(dec->cylinders.size() == 1);
  CHECK(dec->cylinders[0].circumference == 1);
  CHECK(dec->cylinders[0].height == 1);
  CHECK(dec->cylinders[0].twist == 0);
  CHECK(dec->cylinders[0].area == 1);
  auto w = area_weights(*dec);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == 1);

  JSNormalForm nf = js_normal_form(*dec);
  CHECK(nf.torus);
  REQUIRE(nf.code.size() == 3);
  CHECK(nf.code[0] == 1);
  CHECK(nf.code[1] == 1);
  CHECK(nf.code[2] == 0);
}

TEST_CASE("square torus in an oblique direction") {
  Surface t = square_torus();
  Direction d = Direction::of_vector(qv(1, 2));
  auto dec = cylinder_decomposition(t, d);
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 1);
  // Primitive closed curve (1,2) has parameter length 1; area 1 = c*h*|d|^2
  // forces height 1/5.
  CHECK(dec->cylinders[0].circumference == 1);
  CHECK(dec->cylinders[0].height == parse_rational("1/5"));
  CHECK(dec->cylinders[0].area == 1);

  Surface r = rebuild_cylinder_complex(*dec);
  CHECK(area(r) == 1);
  CHECK(r.marked.empty());
  CHECK(stratum(r) == stratum(t));
  CHECK(js_normal_form(r, d) == js_normal_form(t, d));
}

TEST_CASE("marked square torus decomposes through its puncture") {
  Surface t = square_torus_marked();
  auto dec = cylinder_decomposition(t, Direction::horizontal());
  REQUIRE(dec.has_value());
  CHECK_FALSE(dec->torus_normalized);
  REQUIRE(dec->cylinders.size() == 1);
  CHECK(dec->cylinders[0].circumference == 1);
  CHECK(dec->cylinders[0].height == 1);
  CHECK(dec->cylinders[0].twist == 0);
  CHECK(dec->circles.size() == 2);
  CHECK(dec->num_graph_components == 1);

  // The ribbon code is not the bare lattice code of the unmarked torus.
  JSNormalForm nf = js_normal_form(*dec);
  CHECK_FALSE(nf.torus);
  CHECK(js_normal_form(square_torus()) != nf);
}

TEST_CASE("torus shears move the twist field") {
  Surface t = square_torus();
  Surface unit = shear_cylinders(t, {qh("1", "1")});
  CHECK(js_normal_form(unit) == js_normal_form(t));

  Surface half = shear_cylinders(t, {qh("1/2", "1")});
  JSNormalForm nf = js_normal_form(half);
  CHECK(nf.torus);
  REQUIRE(nf.code.size() == 3);
  CHECK(nf.code[0] == 1);
  CHECK(nf.code[1] == 1);
  CHECK(nf.code[2] == parse_rational("1/2"));
  CHECK(nf != js_normal_form(t));

  // The lattice spanned by (1,0) and (-1/2,1) is the same one.
  CHECK(js_normal_form(shear_cylinders(t, {qh("-1/2", "1")})) == nf);
  // Two half shears compose to the full shear, which is the square again.
  CHECK(js_normal_form(shear_cylinders(half, {qh("1/2", "1")})) ==
        js_normal_form(t));
}

TEST_CASE("L-shaped genus-2 horizontal decomposition") {
  Surface l = l_shaped_genus2();
  auto dec = cylinder_decomposition(l, Direction::horizontal());
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 2);
  CHECK(ch_list(*dec) ==
        std::vector<std::pair<Rational, Rational>>{{1, 1}, {2, 1}});
  CHECK(dec->cylinders[0].area == 1);
  CHECK(dec->cylinders[1].area == 2);
  CHECK(area_weights(*dec) ==
        std::vector<Rational>{parse_rational("1/3"), parse_rational("2/3")});

  // Single cone point of angle 6*pi: valence six, all three connections
  // loops at it.
  REQUIRE(dec->diagram.class_prongs.size() == 1);
  CHECK(dec->diagram.class_prongs[0].size() == 6);
  CHECK(dec->diagram.connections.size() == 3);
  for (const auto& sc : dec->diagram.connections) {
    CHECK(sc.start_class == sc.end_class);
    CHECK(sc.length == 1);
  }
  CHECK(dec->num_graph_components == 1);
  CHECK(dec->circles.size() == 4);
}

TEST_CASE("three-cylinder genus-2 surface") {
  Surface s = three_cylinder_genus2();
  StratumSignature sig = stratum(s);
  CHECK(sig.genus == 2);
  CHECK(sig.orders == std::vector<int>{2, 2});
  CHECK(sig.num_punctures == 0);
  CHECK(area(s) == 4);

  auto dec = cylinder_decomposition(s, Direction::horizontal());
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 3);
  CHECK(ch_list(*dec) ==
        std::vector<std::pair<Rational, Rational>>{{1, 1}, {1, 1}, {2, 1}});
  CHECK(area_weights(*dec) ==
        std::vector<Rational>{parse_rational("1/4"), parse_rational("1/4"),
                              parse_rational("1/2")});

  // Two 4*pi cone points, four unit loop connections; the critical graph has
  // two components joined only through cylinders.
  CHECK(dec->diagram.connections.size() == 4);
  for (const auto& sc : dec->diagram.connections) {
    CHECK(sc.start_class == sc.end_class);
    CHECK(sc.length == 1);
  }
  CHECK(dec->num_graph_components == 2);
  CHECK(dec->circles.size() == 6);
}

TEST_CASE("pillowcase presentations agree") {
  Surface a = two_square_pillowcase();
  Surface b = folded_rectangle_pillowcase();

  auto dec = cylinder_decomposition(a, Direction::horizontal());
  REQUIRE(dec.has_value());
  REQUIRE(dec->cylinders.size() == 1);
  CHECK(dec->cylinders[0].circumference == 2);
  CHECK(dec->cylinders[0].height == 1);
  CHECK(dec->diagram.connections.size() == 2);
  // Four simple poles, each of valence one.
  REQUIRE(dec->diagram.class_prongs.size() == 4);
  for (const auto& cp : dec->diagram.class_prongs) CHECK(cp.size() == 1);
  CHECK(area_weights(*dec) == std::vector<Rational>{1});

  // The same sphere glued from one folded rectangle has the same normal
  // form, although the polygon presentations differ.
  CHECK(js_normal_form(a) == js_normal_form(b));
}

TEST_CASE("rebuild preserves the surface up to flat isomorphism") {
  for (const Surface& s :
       {square_torus_marked(), l_shaped_genus2(), three_cylinder_genus2(),
        two_square_pillowcase()}) {
    auto dec = cylinder_decomposition(s, Direction::horizontal());
    REQUIRE(dec.has_value());
    Surface r = rebuild_cylinder_complex(*dec);
    CHECK(area(r) == area(s));
    CHECK(stratum(r) == stratum(s));
    CHECK(js_normal_form(r) == js_normal_form(s));
  }
}

TEST_CASE("identity shear is the identity") {
  Surface l = l_shaped_genus2();
  Surface r = shear_cylinders(l, {qh("0", "1"), qh("0", "1")});
  CHECK(js_normal_form(r) == js_normal_form(l));
}

TEST_CASE("heights scale by the imaginary parts, circumferences persist") {
  Surface l = l_shaped_genus2();
  Surface r = shear_cylinders(l, {qh("0", "2"), qh("1/2", "3")});
  auto dec = cylinder_decomposition(r, Direction::horizontal());
  REQUIRE(dec.has_value());
  CHECK(ch_list(*dec) ==
        std::vector<std::pair<Rational, Rational>>{{1, 2}, {2, 3}});
  CHECK(area(r) == 1 * 2 + 2 * 3);
}

TEST_CASE("diagonal shear equals the linear action") {
  Surface l = l_shaped_genus2();
  QHalfPlanePoint lam = qh("1", "1");
  Surface via_cylinders = shear_cylinders(l, {lam, lam});
  Surface via_matrix = teich_disk_point(l, lam);
  CHECK(js_normal_form(via_cylinders) == js_normal_form(via_matrix));
}

TEST_CASE("shear composition follows the matrix product") {
  Surface l = l_shaped_genus2();
  PolyplanePoint mu = {qh("1/2", "2"), qh("-1/3", "1")};
  PolyplanePoint lam = {qh("1/4", "1"), qh("1", "3")};
  // (lam o mu)_j = Im(mu_j) lam_j + Re(mu_j)
  PolyplanePoint comp = {qh("1", "2"), qh("2/3", "3")};
  Surface lhs = shear_cylinders(shear_cylinders(l, mu), lam);
  Surface rhs = shear_cylinders(l, comp);
  CHECK(js_normal_form(lhs) == js_normal_form(rhs));
}

TEST_CASE("full Dehn twists are invisible, half twists are not") {
  Surface l = l_shaped_genus2();
  PolyplanePoint base = {qh("0", "1"), qh("0", "1")};
  CHECK(verify_twist_identity(l, 0, base));
  CHECK(verify_twist_identity(l, 1, base));
  PolyplanePoint off = {qh("1/3", "2"), qh("-2/5", "1")};
  CHECK(verify_twist_identity(l, 0, off));
  CHECK(verify_twist_identity(l, 1, off));

  auto dec = cylinder_decomposition(l, Direction::horizontal());
  REQUIRE(dec.has_value());
  for (int j = 0; j < 2; ++j) {
    PolyplanePoint half = base;
    half[j].re += Rational(dec->cylinders[j].circumference /
                           (2 * dec->cylinders[j].height));
    CHECK(js_normal_form(shear_cylinders(l, half)) !=
          js_normal_form(shear_cylinders(l, base)));
  }
}

TEST_CASE("twist identity on the torus") {
  CHECK(verify_twist_identity(square_torus(), 0, {qh("0", "1")}));
  CHECK(verify_twist_identity(square_torus_marked(), 0, {qh("1/7", "2")}));
}

TEST_CASE("kobayashi sample bounds") {
  Surface l = l_shaped_genus2();
  std::vector<HalfPlanePoint> same = {{0, 1}, {0, 1}};
  KobayashiSample eq = kobayashi_nonexpansion_sample(l, same, same);
  CHECK(eq.poincare_sup == 0);
  CHECK(eq.modulus_proxy == 0);

  std::vector<HalfPlanePoint> one = {{0, 1}, {0, 1}};
  std::vector<HalfPlanePoint> two = {{0, 2}, {0, 1}};
  KobayashiSample k = kobayashi_nonexpansion_sample(l, one, two);
  double expected = std::atanh(1.0 / 3.0);
  CHECK(k.poincare_sup == doctest::Approx(expected).epsilon(1e-12));
  CHECK(k.modulus_proxy == doctest::Approx(expected).epsilon(1e-12));
  CHECK(k.modulus_proxy <= k.poincare_sup + 1e-12);
}

TEST_CASE("exhausted budgets surface as undetermined") {
  Surface l = l_shaped_genus2();
  Direction steep = Direction::of_vector(qv(100003, 1));
  CHECK_FALSE(cylinder_decomposition(l, steep, 50).has_value());
  CHECK_THROWS_WITH_AS(js_normal_form(l, steep, 50),
                       "the decomposition is undetermined at this crossing "
                       "budget",
                       DomainError);

  // The auxiliary-marking path reports the same way.
  CHECK_FALSE(
      cylinder_decomposition(square_torus(), steep, 5).has_value());
}

TEST_CASE("shear rejects malformed parameters") {
  Surface l = l_shaped_genus2();
  CHECK_THROWS_AS(shear_cylinders(l, {qh("0", "1")}), DomainError);
  CHECK_THROWS_AS(shear_cylinders(l, {qh("0", "1"), qh("0", "-1")}),
                  DomainError);
  CHECK_THROWS_AS(verify_twist_identity(l, 5, {qh("0", "1"), qh("0", "1")}),
                  DomainError);
}

TEST_CASE("weights sum to one exactly") {
  for (const Surface& s :
       {square_torus(), l_shaped_genus2(), three_cylinder_genus2(),
        two_square_pillowcase()}) {
    auto dec = cylinder_decomposition(s, Direction::horizontal());
    REQUIRE(dec.has_value());
    Rational total(0);
    for (const Rational& w : area_weights(*dec)) total += w;
    CHECK(total == 1);
  }
}
