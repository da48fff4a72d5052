#include "starhardy/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starhardy/numutil.hpp"

namespace starhardy::fields {

RadialField canonical_field(const geometry::StarDomain& d) {
    RadialField f;
    f.n = d.n;
    f.domain = d;
    auto profile = d.profile;
    f.map = [profile](const Vec& x) {
        double r = norm(x);
        if (r == 0.0) throw std::domain_error("radial field is undefined at the origin");
        Vec omega = (1.0 / r) * x;
        return profile(omega) * omega;
    };
    f.note = "canonical boundary projection along rays";
    return f;
}

RadialField ellipsoid_field(const std::vector<double>& axes) {
    RadialField f;
    f.n = static_cast<int>(axes.size());
    f.domain = geometry::make_ellipsoid(axes);
    f.map = [axes](const Vec& x) {
        double na = anorm(x, axes);
        if (na == 0.0) throw std::domain_error("radial field is undefined at the origin");
        return (1.0 / na) * x;
    };
    f.note = "ellipsoid projection x / |x|_a";
    return f;
}

FieldReport check_field(const RadialField& f, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("field check needs at least one sample");
    FieldReport rep;
    rep.samples = samples;
    Rng rng(seed);
    const geometry::StarDomain& d = f.domain;
    const double lambdas[] = {0.5, 2.0, 10.0};
    for (int s = 0; s < samples; ++s) {
        Vec omega = rng.unit_vector(d.n);
        double t = 0.001 + 0.989 * rng.uniform();
        Vec x = (t * d.profile(omega)) * omega;
        Vec fx = f.map(x);
        for (double lam : lambdas)
            rep.max_ray_deviation = std::max(rep.max_ray_deviation, norm(f.map(lam * x) - fx));
        rep.max_idempotence_deviation =
            std::max(rep.max_idempotence_deviation, norm(f.map(fx) - fx));
        Vec y = geometry::boundary_point(d, omega);
        rep.max_boundary_deviation = std::max(rep.max_boundary_deviation, norm(f.map(y) - y));
        rep.max_norm_excess = std::max(rep.max_norm_excess, norm(fx) - d.M - d.m_tolerance);
    }
    rep.pass = rep.max_ray_deviation <= 1e-12 && rep.max_boundary_deviation <= 1e-12 &&
               rep.max_idempotence_deviation <= 1e-12 && rep.max_norm_excess <= 1e-12;
    return rep;
}

}  // namespace starhardy::fields
