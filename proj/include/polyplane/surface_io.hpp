#pragma once

#include <string>

#include "polyplane/surface.hpp"

namespace polyplane {

// Textual interchange format, version 1:
//   {"version": 1,
//    "polygons": [[["x", "y"], ...], ...],
//    "gluings":  [[[pi, ei], [pj, ej], "T"|"R"], ...],
//    "marked":   [[pi, vi], ...]}
// with "T" = Translation, "R" = PointReflection and rationals written as
// strings "num/den" (or "num"). The writer emits reduced rationals; the
// reader accepts unreduced ones and bare JSON integers.
//
// surface_from_json reports malformed documents as BadFormat and otherwise
// propagates the surface builder's validation errors.
Surface surface_from_json(const std::string& text);
std::string surface_to_json(const Surface& s);

// File wrappers; unreadable or unwritable paths raise IOError.
Surface load_surface(const std::string& path);
void save_surface(const Surface& s, const std::string& path);

}  // namespace polyplane
