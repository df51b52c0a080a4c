#include "polyplane/surface_io.hpp"

#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polyplane/errors.hpp"

namespace polyplane {

namespace {

using nlohmann::json;

Rational read_rational(const json& j, const char* where) {
  if (j.is_number_integer())
    return Rational(BigInt(std::to_string(j.get<long long>())));
  if (!j.is_string())
    fail("BadFormat", std::string(where) +
                          ": rationals must be strings like \"3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail("BadFormat",
         std::string(where) + ": bad rational literal: " + e.what());
  }
}

int read_index(const json& j, const char* where) {
  if (!j.is_number_integer())
    fail("BadFormat", std::string(where) + ": indices must be integers");
  return j.get<int>();
}

const json& member(const json& j, const char* key) {
  if (!j.contains(key))
    fail("BadFormat", std::string("missing \"") + key + "\" field");
  return j.at(key);
}

}  // namespace

Surface surface_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail("BadFormat", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("BadFormat", "top level must be an object");
  const json& ver = member(doc, "version");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    fail("BadFormat", "unsupported format version (expected 1)");

  std::vector<FlatPolygonT<Rational>> polys;
  const json& jpolys = member(doc, "polygons");
  if (!jpolys.is_array()) fail("BadFormat", "\"polygons\" must be an array");
  for (const json& jp : jpolys) {
    if (!jp.is_array())
      fail("BadFormat", "each polygon must be an array of vertices");
    FlatPolygonT<Rational> P;
    for (const json& jv : jp) {
      if (!jv.is_array() || jv.size() != 2)
        fail("BadFormat", "each vertex must be an [x, y] pair");
      P.v.emplace_back(read_rational(jv[0], "vertex"),
                       read_rational(jv[1], "vertex"));
    }
    polys.push_back(std::move(P));
  }

  std::vector<EdgeGluing> gluings;
  const json& jglue = member(doc, "gluings");
  if (!jglue.is_array()) fail("BadFormat", "\"gluings\" must be an array");
  for (const json& jg : jglue) {
    if (!jg.is_array() || jg.size() != 3)
      fail("BadFormat",
           "each gluing must be [[poly, edge], [poly, edge], kind]");
    EdgeGluing g;
    for (int side = 0; side < 2; ++side) {
      const json& je = jg[side];
      if (!je.is_array() || je.size() != 2)
        fail("BadFormat", "each gluing side must be a [poly, edge] pair");
      EdgeRef& e = side == 0 ? g.a : g.b;
      e.poly = read_index(je[0], "gluing");
      e.edge = read_index(je[1], "gluing");
    }
    if (!jg[2].is_string())
      fail("BadFormat", "gluing kind must be \"T\" or \"R\"");
    std::string kind = jg[2].get<std::string>();
    if (kind == "T")
      g.kind = GluingKind::Translation;
    else if (kind == "R")
      g.kind = GluingKind::PointReflection;
    else
      fail("BadFormat", "gluing kind must be \"T\" or \"R\", got \"" + kind +
                            "\"");
    gluings.push_back(g);
  }

  std::vector<CornerRef> marked;
  if (doc.contains("marked")) {
    const json& jmark = doc.at("marked");
    if (!jmark.is_array()) fail("BadFormat", "\"marked\" must be an array");
    for (const json& jm : jmark) {
      if (!jm.is_array() || jm.size() != 2)
        fail("BadFormat", "each marked point must be a [poly, vertex] pair");
      marked.push_back(CornerRef{read_index(jm[0], "marked"),
                                 read_index(jm[1], "marked")});
    }
  }

  return build_surface<Rational>(std::move(polys), std::move(gluings),
                                 std::move(marked));
}

std::string surface_to_json(const Surface& s) {
  json doc;
  doc["version"] = 1;
  json jpolys = json::array();
  for (const auto& p : s.polygons) {
    json jp = json::array();
    for (const auto& v : p.v)
      jp.push_back({format_rational(v.x()), format_rational(v.y())});
    jpolys.push_back(std::move(jp));
  }
  doc["polygons"] = std::move(jpolys);
  json jglue = json::array();
  for (const auto& g : s.gluings)
    jglue.push_back({{g.a.poly, g.a.edge},
                     {g.b.poly, g.b.edge},
                     g.kind == GluingKind::Translation ? "T" : "R"});
  doc["gluings"] = std::move(jglue);
  json jmark = json::array();
  for (const auto& c : s.marked) jmark.push_back({c.poly, c.vert});
  doc["marked"] = std::move(jmark);
  return doc.dump(2) + "\n";
}

Surface load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IOError", "cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail("IOError", "failed while reading " + path);
  return surface_from_json(buf.str());
}

void save_surface(const Surface& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("IOError", "cannot open " + path + " for writing");
  out << surface_to_json(s);
  out.flush();
  if (!out) fail("IOError", "failed while writing " + path);
}

}  // namespace polyplane
