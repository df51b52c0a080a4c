#pragma once

#include <string>

#include "polyplane/surface.hpp"

namespace polyplane {

// Renders the polygon net of a surface as a standalone SVG document.
// Polygons are laid out side by side (they often overlap in chart
// coordinates, e.g. the two copies of a mirror double); glued edge pairs
// carry matching letter labels, with an apostrophe appended when the gluing
// is a point reflection.  Vertex markers follow the usual quadratic
// differential conventions: a cross for a simple pole (cone angle pi), a
// filled dot for a zero (cone angle > 2 pi), an open circle for a marked
// regular point.  Output is byte-deterministic for a given surface.
std::string surface_svg(const Surface& s);

// surface_svg written to a file; unwritable paths raise IOError.
void save_surface_svg(const Surface& s, const std::string& path);

}  // namespace polyplane
