#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "starhardy/vec.hpp"

namespace starhardy::geometry {

enum class DomainKind { Ball, Ellipsoid, Star };

// Descriptor of the contact set {x in dOmega : |x| = M}.
enum class LambdaKind { WholeSphere, FinitePoints, Sampled };

struct LambdaSet {
    LambdaKind kind = LambdaKind::Sampled;
    std::vector<Vec> points;  // boundary points of norm M (representative for Sampled)
    bool plausibly_positive_measure = false;
};

// Bounded domain star-shaped about the origin, described by its radial
// profile r(omega) > 0 on the unit sphere.
struct StarDomain {
    int n = 0;
    DomainKind kind = DomainKind::Ball;
    std::function<double(const Vec&)> profile;  // unit direction -> boundary radius
    double r_min = 0;      // min of the profile (sampled estimate for Star)
    double M = 0;          // sup_Omega |x| (exact for Ball/Ellipsoid)
    double m_tolerance = 0;  // achieved tolerance of the M estimate
    LambdaSet lambda;
    std::vector<double> axes;  // Ellipsoid only
    double radius = 0;         // Ball only
    std::string note;          // short human-readable description for reports
};

StarDomain make_ball(int n, double R);

// E_a = {x : sum a_i^2 x_i^2 < 1}; profile 1/|omega|_a, M = 1/min(a).
StarDomain make_ellipsoid(const std::vector<double>& axes);

// Generic star domain from a positive C^1 radial profile. The profile is
// validated on a dense sample (plus the coordinate directions); M comes from
// the same sample refined by golden-section line searches on the sphere.
StarDomain make_star(int n, std::function<double(const Vec&)> profile, double r_min_hint,
                     std::uint64_t seed = 20260817);

// r(omega) = c0 + sum c_i omega_i (degree-<=1 harmonic profile, any n).
std::function<double(const Vec&)> linear_profile(int n, double c0, const std::vector<double>& c);

// n = 3 profile from real spherical-harmonic coefficients (l, m, c).
std::function<double(const Vec&)> harmonic_profile3(double c0,
                                                    const std::vector<std::tuple<int, int, double>>& lmc);

// Boundary point r(omega)·omega. Requires |omega| = 1 within 1e-12.
Vec boundary_point(const StarDomain& d, const Vec& omega);

// Open-set membership; the origin is inside by convention.
bool contains(const StarDomain& d, const Vec& x);

}  // namespace starhardy::geometry
