#pragma once

#include <string>

#include "phs/domains.hpp"
#include "phs/unisolvence.hpp"

namespace phs {

// Contour-band rendering of a planar field: cells shaded by sign and by
// log-magnitude, the zero level set traced by marching squares, nodes dotted.
// `description` is embedded verbatim (XML-escaped) in a <desc> element.
std::string render_field_svg(const FieldGrid& field, const PointSet& nodes, const std::string& description);

}  // namespace phs
