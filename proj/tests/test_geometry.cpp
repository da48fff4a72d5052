#include <doctest.h>

#include <cmath>

#include "starhardy/geometry.hpp"
#include "starhardy/numutil.hpp"

using namespace starhardy;
namespace geo = starhardy::geometry;

TEST_CASE("ball domain") {
    geo::StarDomain d = geo::make_ball(3, 1.0);
    CHECK(d.n == 3);
    CHECK(d.kind == geo::DomainKind::Ball);
    CHECK(d.M == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.r_min == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.profile(Vec{0, 0, 1}) == doctest::Approx(1.0));
    CHECK(d.lambda.kind == geo::LambdaKind::WholeSphere);
    CHECK(d.lambda.plausibly_positive_measure);

    geo::StarDomain d2 = geo::make_ball(2, 2.5);
    CHECK(d2.M == doctest::Approx(2.5));
    CHECK(d2.radius == doctest::Approx(2.5));

    CHECK_THROWS_AS(geo::make_ball(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(geo::make_ball(3, -1.0), std::invalid_argument);
}

TEST_CASE("ellipsoid domain: profile, M, top-radius set") {
    geo::StarDomain d = geo::make_ellipsoid({1, 2, 2});
    CHECK(d.n == 3);
    CHECK(d.M == doctest::Approx(1.0).epsilon(1e-15));
    // r(omega) = 1/|omega|_a: the short axes (a = 2) halve the radius.
    CHECK(d.profile(Vec{0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.profile(Vec{1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(d.lambda.kind == geo::LambdaKind::FinitePoints);
    REQUIRE(d.lambda.points.size() == 2);
    CHECK(norm(d.lambda.points[0] - Vec{1, 0, 0}) < 1e-14);
    CHECK(norm(d.lambda.points[1] - Vec{-1, 0, 0}) < 1e-14);

    geo::StarDomain half = geo::make_ellipsoid({0.5, 1, 1});
    CHECK(half.M == doctest::Approx(2.0));
    REQUIRE(half.lambda.points.size() == 2);
    CHECK(norm(half.lambda.points[0] - Vec{2, 0, 0}) < 1e-14);

    // All axes equal: a ball in disguise, top radius on the whole sphere.
    geo::StarDomain ball = geo::make_ellipsoid({2, 2, 2});
    CHECK(ball.M == doctest::Approx(0.5));
    CHECK(ball.lambda.kind == geo::LambdaKind::WholeSphere);

    // Two minimal axes: a proper sub-sphere, reported as sampled directions.
    geo::StarDomain two = geo::make_ellipsoid({1, 1, 2});
    REQUIRE(two.lambda.kind == geo::LambdaKind::Sampled);
    CHECK(two.lambda.points.size() == 4);
    CHECK(!two.lambda.plausibly_positive_measure);

    CHECK_THROWS_AS(geo::make_ellipsoid({1.0, -2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(geo::make_ellipsoid({1.0}), std::invalid_argument);
}

TEST_CASE("star domain from a linear profile") {
    auto prof = geo::linear_profile(3, 1.0, {0.3, 0, 0});
    geo::StarDomain d = geo::make_star(3, prof, 0.6);
    CHECK(d.kind == geo::DomainKind::Star);
    // Profile max 1.3 is attained at omega = e1; the sampled estimate must
    // land on it to refinement accuracy.
    CHECK(d.M == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(d.r_min == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(d.m_tolerance < 1e-6);

    // Stored M is a true upper bound for a refined sample.
    Rng rng(99);
    double worst = 0;
    for (int k = 0; k < 5000; ++k) worst = std::max(worst, d.profile(rng.unit_vector(3)));
    CHECK(worst <= d.M + d.m_tolerance + 1e-12);
}

TEST_CASE("star domain rejects profiles that are not positive") {
    // 0.5 + 0.6*omega_1 dips to -0.1 on the negative axis.
    auto bad = geo::linear_profile(3, 0.5, {0.6, 0, 0});
    CHECK_THROWS_AS(geo::make_star(3, bad, 0.1), std::invalid_argument);
}

TEST_CASE("harmonic profile for n = 3") {
    auto prof = geo::harmonic_profile3(1.0, {{1, 1, 0.2}, {2, 0, 0.1}});
    geo::StarDomain d = geo::make_star(3, prof, 0.3);
    CHECK(d.M > 1.0);
    CHECK(d.r_min > 0.3);
    Rng rng(7);
    for (int k = 0; k < 100; ++k) CHECK(d.profile(rng.unit_vector(3)) > 0);
}

TEST_CASE("boundary points and membership") {
    geo::StarDomain d = geo::make_ellipsoid({1, 2, 2});
    Vec y = geo::boundary_point(d, Vec{0, 1, 0});
    CHECK(norm(y - Vec{0, 0.5, 0}) < 1e-14);
    CHECK_THROWS_AS(geo::boundary_point(d, Vec{0, 0.9, 0}), std::invalid_argument);

    CHECK(geo::contains(d, Vec{0, 0, 0}));  // origin inside by convention
    CHECK(geo::contains(d, Vec{0.99, 0, 0}));
    CHECK(!geo::contains(d, Vec{1.01, 0, 0}));
    CHECK(geo::contains(d, Vec{0, 0.49, 0}));
    CHECK(!geo::contains(d, Vec{0, 0.51, 0}));
}
