#pragma once

#include <string>

#include "isocap/star_domain.hpp"

namespace isocap {

/// Builds a domain from a JSON shape description. The exponent p is not part of the file.
///
///   {"dimension": 2 | 3,
///    "profile_kind": "samples" | "modes" | "ellipse" | "constant",
///    "grid_size": M,                  optional, ignored for "samples"
///    "samples": [rho_0, ...],         rho at the default grid nodes for that many points
///    "modes": [{"k": 2, "i": 0, "a": 0.1}, ...],   rho = 1 + sum a Y_{k,i}
///    "semi_axes": [a, b],             "ellipse"
///    "radius": r,                     "constant"
///    "normalize_volume": false}       optional, rescale to |B_1|
StarDomain parse_shape(const std::string& json_text, double p);
StarDomain load_shape(const std::string& path, double p);

/// "samples" description of a domain.
std::string shape_to_json(const StarDomain& domain);

}  // namespace isocap
