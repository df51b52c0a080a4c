#include "polyplane/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polyplane/errors.hpp"

namespace polyplane {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// a, b, ..., z, aa, ab, ... in gluing-index order.
std::string edge_letter(int index) {
  std::string out;
  do {
    out.insert(out.begin(), static_cast<char>('a' + index % 26));
    index = index / 26 - 1;
  } while (index >= 0);
  return out;
}

struct Placed {
  std::vector<RVec2> v;  // translated vertices
};

}  // namespace

std::string surface_svg(const Surface& s) {
  RealSurface rs = to_real(s);

  // Lay polygons out in a row, each shifted so its bounding box starts at
  // x = cursor, y = 0.
  std::vector<Placed> placed(rs.polygons.size());
  double extent = 0.0;  // max bounding-box dimension, for sizing strokes
  for (const auto& p : rs.polygons) {
    double w = 0, h = 0, lx = p.v[0].x(), ly = p.v[0].y();
    for (const auto& v : p.v) {
      lx = std::min(lx, v.x());
      ly = std::min(ly, v.y());
    }
    for (const auto& v : p.v) {
      w = std::max(w, v.x() - lx);
      h = std::max(h, v.y() - ly);
    }
    extent = std::max({extent, w, h});
  }
  double gap = 0.25 * extent;
  double cursor = 0.0, total_h = 0.0;
  for (size_t pi = 0; pi < rs.polygons.size(); ++pi) {
    const auto& p = rs.polygons[pi];
    double lx = p.v[0].x(), ly = p.v[0].y(), hx = lx, hy = ly;
    for (const auto& v : p.v) {
      lx = std::min(lx, v.x());
      ly = std::min(ly, v.y());
      hx = std::max(hx, v.x());
      hy = std::max(hy, v.y());
    }
    for (const auto& v : p.v)
      placed[pi].v.push_back(RVec2(v.x() - lx + cursor, v.y() - ly));
    cursor += (hx - lx) + gap;
    total_h = std::max(total_h, hy - ly);
  }
  double total_w = cursor - gap;
  double margin = 0.18 * extent;

  double marker = 0.05 * extent;     // marker radius
  double font = 0.11 * extent;       // label font size
  double stroke = 0.012 * extent;

  std::ostringstream svg;
  // SVG's y axis points down; flip with a transform so the flat picture is
  // upright.
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << fmt(-margin) << " " << fmt(-margin) << " "
      << fmt(total_w + 2 * margin) << " " << fmt(total_h + 2 * margin)
      << "\" width=\"800\">\n";
  svg << "<g transform=\"translate(0," << fmt(total_h) << ") scale(1,-1)\" "
      << "stroke-linecap=\"round\" font-family=\"sans-serif\">\n";

  for (size_t pi = 0; pi < placed.size(); ++pi) {
    svg << "<polygon points=\"";
    for (size_t vi = 0; vi < placed[pi].v.size(); ++vi) {
      if (vi) svg << " ";
      svg << fmt(placed[pi].v[vi].x()) << "," << fmt(placed[pi].v[vi].y());
    }
    svg << "\" fill=\"#f6f1e4\" stroke=\"#444\" stroke-width=\""
        << fmt(stroke) << "\"/>\n";
  }

  // Edge labels at midpoints, nudged toward the interior (the inward normal
  // of a CCW edge is its direction rotated by +90 degrees).
  for (size_t gi = 0; gi < s.gluings.size(); ++gi) {
    const EdgeGluing& g = s.gluings[gi];
    std::string label = edge_letter(static_cast<int>(gi));
    if (g.kind == GluingKind::PointReflection) label += "'";
    for (EdgeRef e : {g.a, g.b}) {
      const auto& poly = placed[e.poly].v;
      int n = static_cast<int>(poly.size());
      RVec2 a = poly[e.edge], b = poly[(e.edge + 1) % n];
      RVec2 mid = RVec2(0.5 * (a + b));
      RVec2 dir = RVec2(b - a);
      double len = dir.norm();
      RVec2 in = len > 0 ? RVec2(RVec2(-dir.y(), dir.x()) / len)
                         : RVec2(0, 0);
      RVec2 at = RVec2(mid + 1.6 * font * in);
      // The outer group is y-flipped, so text needs its own unflip.
      svg << "<text x=\"" << fmt(at.x()) << "\" y=\"" << fmt(-at.y())
          << "\" transform=\"scale(1,-1)\" font-size=\"" << fmt(font)
          << "\" text-anchor=\"middle\" dominant-baseline=\"middle\" "
             "fill=\"#333\">"
          << label << "</text>\n";
    }
  }

  // Vertex markers: cross = pole, dot = zero, open circle = marked regular
  // point; drawn at every corner of the class.
  for (const Singularity& sing : singularities(s)) {
    for (const CornerRef& c : sing.corners) {
      const RVec2& v = placed[c.poly].v[c.vert];
      if (sing.order < 0) {
        svg << "<g stroke=\"#b03030\" stroke-width=\"" << fmt(1.6 * stroke)
            << "\">"
            << "<line x1=\"" << fmt(v.x() - marker) << "\" y1=\""
            << fmt(v.y() - marker) << "\" x2=\"" << fmt(v.x() + marker)
            << "\" y2=\"" << fmt(v.y() + marker) << "\"/>"
            << "<line x1=\"" << fmt(v.x() - marker) << "\" y1=\""
            << fmt(v.y() + marker) << "\" x2=\"" << fmt(v.x() + marker)
            << "\" y2=\"" << fmt(v.y() - marker) << "\"/></g>\n";
      } else if (sing.order > 0) {
        svg << "<circle cx=\"" << fmt(v.x()) << "\" cy=\"" << fmt(v.y())
            << "\" r=\"" << fmt(0.8 * marker)
            << "\" fill=\"#2050b0\" stroke=\"none\"/>\n";
      } else {
        svg << "<circle cx=\"" << fmt(v.x()) << "\" cy=\"" << fmt(v.y())
            << "\" r=\"" << fmt(0.7 * marker)
            << "\" fill=\"none\" stroke=\"#207040\" stroke-width=\""
            << fmt(1.4 * stroke) << "\"/>\n";
      }
    }
  }

  svg << "</g>\n</svg>\n";
  return svg.str();
}

void save_surface_svg(const Surface& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("IOError", "cannot open " + path + " for writing");
  out << surface_svg(s);
  if (!out) fail("IOError", "failed writing " + path);
}

}  // namespace polyplane
