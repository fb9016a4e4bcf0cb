#pragma once

#include <cstdint>

#include "isocap/star_domain.hpp"

namespace isocap::shapes {

/// N = 2: ellipse with semi-axes a (x) and b (y). N = 3: spheroid with axial semi-axis a and
/// equatorial semi-axis b.
StarDomain ellipsoid(const Params& params, double a, double b, int grid_size = 0);

/// Ellipse / spheroid of aspect ratio a/b at the volume of B_1. Aspect > 1 is prolate in 3D.
StarDomain unit_volume_ellipsoid(const Params& params, double aspect, int grid_size = 0);

/// 1 + t Y_{k,0}, not rescaled.
StarDomain harmonic(const Params& params, int k, double t, int grid_size = 0);

/// Random phi = sum_{1 <= k <= max_degree} c_{k,i} Y_{k,i} with sup |phi| = amplitude, profile
/// 1 + phi. Deterministic in seed.
StarDomain random_band_limited(const Params& params, int max_degree, double amplitude,
                               std::uint64_t seed, int grid_size = 0);

}  // namespace isocap::shapes
