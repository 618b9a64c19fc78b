#pragma once

#include <optional>
#include <string>

#include "dudley/geometry.hpp"
#include "dudley/packing.hpp"

namespace dudley::cli {

/// SVG of a planar body C (filled), its eps-expansion (dashed) and the
/// boundary of D (stroked), with optional packing points.
std::string render_svg(const Body& C, const HPolytope& D, double eps,
                       const std::optional<SpherePacking>& packing = std::nullopt);

}  // namespace dudley::cli
