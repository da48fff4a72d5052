#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "starhardy/geometry.hpp"
#include "starhardy/vec.hpp"

namespace starhardy::fields {

// Radially invariant boundary projection: f(x) depends on x/|x| only, lands on
// the boundary, and fixes the boundary pointwise. Evaluation at x = 0 is a
// domain error.
struct RadialField {
    int n = 0;
    geometry::StarDomain domain;
    std::function<Vec(const Vec&)> map;
    std::string note;
};

// f(x) = r(x/|x|) x/|x| for the domain's radial profile.
RadialField canonical_field(const geometry::StarDomain& d);

// Closed form for ellipsoids: f(x) = x / |x|_a.
RadialField ellipsoid_field(const std::vector<double>& axes);

struct FieldReport {
    double max_ray_deviation = 0;         // |f(lambda x) - f(x)|, lambda in {0.5, 2, 10}
    double max_boundary_deviation = 0;    // |f(y) - y| at boundary points
    double max_idempotence_deviation = 0; // |f(f(x)) - f(x)|
    double max_norm_excess = 0;           // |f(x)| - M beyond the profile tolerance
    int samples = 0;
    bool pass = false;
};

// Exact-comparison checks at seeded interior points; no differentiation.
FieldReport check_field(const RadialField& f, int samples, std::uint64_t seed);

}  // namespace starhardy::fields
