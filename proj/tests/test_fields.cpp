#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "starhardy/fields.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/numutil.hpp"

using namespace starhardy;
namespace geo = starhardy::geometry;
namespace fld = starhardy::fields;

TEST_CASE("canonical field on a ball projects along rays") {
    geo::StarDomain d = geo::make_ball(3, 2.0);
    fld::RadialField f = fld::canonical_field(d);
    REQUIRE(f.n == 3);

    Vec y = f.map(Vec{0.1, 0, 0});
    CHECK(norm(y - Vec{2, 0, 0}) < 1e-14);

    // Ray invariance: any point on the same ray maps to the same boundary point.
    Vec a = f.map(Vec{0.3, -0.4, 0.5});
    Vec b = f.map(Vec{3.0, -4.0, 5.0});
    CHECK(norm(a - b) < 1e-13);
    CHECK(std::abs(norm(a) - 2.0) < 1e-13);

    CHECK_THROWS_AS(f.map(Vec(3)), std::domain_error);
}

TEST_CASE("ellipsoid field closed form") {
    fld::RadialField f = fld::ellipsoid_field({0.5, 1, 1});
    // |x|_a = 0.5 at x = e1, so f(e1) = 2 e1.
    Vec y = f.map(Vec{1, 0, 0});
    CHECK(norm(y - Vec{2, 0, 0}) < 1e-14);

    // Boundary points are fixed: |y|_a = 1 there.
    Vec z = f.map(y);
    CHECK(norm(z - y) < 1e-14);

    // Matches the generic construction on the same domain.
    fld::RadialField g = fld::canonical_field(geo::make_ellipsoid({0.5, 1, 1}));
    Vec p{0.2, -0.1, 0.05};
    CHECK(norm(f.map(p) - g.map(p)) < 1e-12);

    CHECK_THROWS_AS(fld::ellipsoid_field({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fld::ellipsoid_field({1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("check_field passes on all three domain kinds") {
    for (const geo::StarDomain& d :
         {geo::make_ball(3, 1.0), geo::make_ellipsoid({1, 2, 2}),
          geo::make_star(3, geo::linear_profile(3, 1.0, {0.3, 0, 0}), 0.6)}) {
        CAPTURE(d.kind);
        fld::FieldReport rep = fld::check_field(fld::canonical_field(d), 1000, 20260817);
        CHECK(rep.pass);
        CHECK(rep.samples == 1000);
        CHECK(rep.max_ray_deviation < 1e-12);
        CHECK(rep.max_boundary_deviation < 1e-12);
        CHECK(rep.max_idempotence_deviation < 1e-12);
        // On the ball |f(x)| equals M exactly, so roundoff can leave +eps.
        CHECK(rep.max_norm_excess <= 1e-12);
    }
}

TEST_CASE("check_field flags a perturbed map") {
    geo::StarDomain d = geo::make_ball(3, 1.0);
    fld::RadialField f = fld::canonical_field(d);
    fld::RadialField broken = f;
    auto base = f.map;
    broken.map = [base](const Vec& x) { return base(x) + 0.01 * x; };

    fld::FieldReport rep = fld::check_field(broken, 500, 7);
    CHECK(!rep.pass);
    // Boundary points move by 0.01 |y| = 0.01 M.
    CHECK(rep.max_boundary_deviation == doctest::Approx(0.01).epsilon(0.05));
    CHECK(rep.max_ray_deviation > 1e-4);
}
