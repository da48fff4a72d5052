#include "starhardy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "starhardy/numutil.hpp"

namespace starhardy::geometry {

namespace {

void check_dim(int n) {
    if (n < 2) throw std::invalid_argument("domain dimension must be at least 2");
    Vec::check_dim(n);
}

// Directions used to validate a star profile and to seed the M search:
// +-coordinate axes (catches sign problems exactly) plus a seeded blue-ish
// cover of the sphere.
std::vector<Vec> validation_directions(int n, std::uint64_t seed) {
    std::vector<Vec> dirs;
    for (int i = 0; i < n; ++i) {
        dirs.push_back(basis_vector(n, i));
        dirs.push_back(-1.0 * basis_vector(n, i));
    }
    const int count = n <= 3 ? 20000 : 40000;
    if (n <= 3) {
        Rng rng(seed);
        for (int k = 0; k < count; ++k) dirs.push_back(rng.unit_vector(n));
    } else {
        auto qmc = qmc_unit_vectors(n, count, seed);
        dirs.insert(dirs.end(), qmc.begin(), qmc.end());
    }
    return dirs;
}

// Orthonormal basis of the tangent space at unit omega (Gram–Schmidt over the
// coordinate axes, skipping the one most aligned with omega).
std::vector<Vec> tangent_basis(const Vec& omega) {
    int n = omega.n;
    std::vector<Vec> basis;
    basis.push_back(omega);
    for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
        Vec v = basis_vector(n, i);
        for (const Vec& b : basis) v -= dot(v, b) * b;
        double r = norm(v);
        if (r > 1e-8) basis.push_back((1.0 / r) * v);
    }
    basis.erase(basis.begin());
    return basis;
}

// Maximize the profile near a seed direction: golden-section line searches
// along great circles through the incumbent, cycled over tangent directions
// with a shrinking bracket.
std::pair<Vec, double> refine_max(const std::function<double(const Vec&)>& profile, Vec omega,
                                  double bracket) {
    double best = profile(omega);
    for (int round = 0; round < 6; ++round) {
        for (const Vec& t : tangent_basis(omega)) {
            auto along = [&](double s) { return profile(normalized(std::cos(s) * omega + std::sin(s) * t)); };
            auto [s, val] = golden_section_max(along, -bracket, bracket, 1e-12);
            if (val > best) {
                omega = normalized(std::cos(s) * omega + std::sin(s) * t);
                best = val;
            }
        }
        bracket *= 0.25;
    }
    return {omega, best};
}

}  // namespace

StarDomain make_ball(int n, double R) {
    check_dim(n);
    if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("ball radius must be positive and finite");
    StarDomain d;
    d.n = n;
    d.kind = DomainKind::Ball;
    d.radius = R;
    d.profile = [R](const Vec&) { return R; };
    d.r_min = R;
    d.M = R;
    d.m_tolerance = 0;
    d.lambda.kind = LambdaKind::WholeSphere;
    d.lambda.plausibly_positive_measure = true;
    std::ostringstream os;
    os << "ball(n=" << n << ", R=" << R << ")";
    d.note = os.str();
    return d;
}

StarDomain make_ellipsoid(const std::vector<double>& axes) {
    int n = static_cast<int>(axes.size());
    check_dim(n);
    for (double a : axes)
        if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("ellipsoid axes must be positive and finite");

    StarDomain d;
    d.n = n;
    d.kind = DomainKind::Ellipsoid;
    d.axes = axes;
    d.profile = [axes](const Vec& omega) { return 1.0 / anorm(omega, axes); };
    double amin = *std::min_element(axes.begin(), axes.end());
    double amax = *std::max_element(axes.begin(), axes.end());
    d.M = 1.0 / amin;
    d.r_min = 1.0 / amax;
    d.m_tolerance = 0;

    // Contact set: directions where |omega|_a is minimal, i.e. the minimal
    // axes. Strict minimum -> two antipodal points; all equal -> sphere.
    int min_count = 0, min_index = -1;
    for (int i = 0; i < n; ++i) {
        if (axes[static_cast<size_t>(i)] <= amin * (1 + 1e-12)) {
            ++min_count;
            min_index = i;
        }
    }
    if (min_count == n) {
        d.lambda.kind = LambdaKind::WholeSphere;
        d.lambda.plausibly_positive_measure = true;
    } else if (min_count == 1) {
        d.lambda.kind = LambdaKind::FinitePoints;
        d.lambda.points = {d.M * basis_vector(n, min_index), -d.M * basis_vector(n, min_index)};
    } else {
        d.lambda.kind = LambdaKind::Sampled;  // a proper sub-sphere
        for (int i = 0; i < n; ++i)
            if (axes[static_cast<size_t>(i)] <= amin * (1 + 1e-12)) {
                d.lambda.points.push_back(d.M * basis_vector(n, i));
                d.lambda.points.push_back(-d.M * basis_vector(n, i));
            }
        d.lambda.plausibly_positive_measure = false;
    }
    std::ostringstream os;
    os << "ellipsoid(a=";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << axes[static_cast<size_t>(i)];
    os << ")";
    d.note = os.str();
    return d;
}

StarDomain make_star(int n, std::function<double(const Vec&)> profile, double r_min_hint,
                     std::uint64_t seed) {
    check_dim(n);
    if (!profile) throw std::invalid_argument("star profile callable is empty");

    auto dirs = validation_directions(n, seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    Vec arg_hi = dirs.front();
    for (const Vec& w : dirs) {
        double r = profile(w);
        if (!std::isfinite(r) || r <= 0) {
            std::ostringstream os;
            os << "star profile must be positive; got " << r << " at direction (";
            for (int i = 0; i < n; ++i) os << (i ? "," : "") << w[i];
            os << ")";
            throw std::invalid_argument(os.str());
        }
        if (r < lo) lo = r;
        if (r > hi) {
            hi = r;
            arg_hi = w;
        }
    }
    if (r_min_hint > 0 && lo < 0.5 * r_min_hint)
        throw std::invalid_argument("star profile drops far below r_min_hint; hint or profile is wrong");

    // Refine the max; the initial bracket is a generous multiple of the mean
    // sample spacing.
    double bracket = n <= 3 ? 0.05 : 0.2;
    auto [omega_max, M_ref] = refine_max(profile, arg_hi, bracket);
    double M = std::max(M_ref, hi);

    StarDomain d;
    d.n = n;
    d.kind = DomainKind::Star;
    d.profile = std::move(profile);
    d.r_min = lo;
    d.M = M;
    d.m_tolerance = std::max(1e-12 * M, M - hi >= 0 ? std::abs(M_ref - hi) * 1e-6 : 0.0);

    // Contact-set sketch from the sample: directions whose radius is within
    // 1e-9 of M. A non-tiny fraction suggests a positive-measure Lambda.
    int near = 0;
    for (const Vec& w : dirs)
        if (d.profile(w) >= M - 1e-9 * std::max(1.0, M)) {
            ++near;
            if (d.lambda.points.size() < 8) d.lambda.points.push_back(d.profile(w) * w);
        }
    d.lambda.kind = LambdaKind::Sampled;
    d.lambda.plausibly_positive_measure = near > static_cast<int>(dirs.size()) / 1000;
    if (d.lambda.points.empty()) d.lambda.points.push_back(M * omega_max);
    d.note = "star(n=" + std::to_string(n) + ")";
    return d;
}

std::function<double(const Vec&)> linear_profile(int n, double c0, const std::vector<double>& c) {
    if (static_cast<int>(c.size()) != n) throw std::invalid_argument("linear profile needs n coefficients");
    return [c0, c](const Vec& omega) {
        double r = c0;
        for (int i = 0; i < omega.n; ++i) r += c[static_cast<size_t>(i)] * omega[i];
        return r;
    };
}

std::function<double(const Vec&)> harmonic_profile3(double c0,
                                                    const std::vector<std::tuple<int, int, double>>& lmc) {
    for (const auto& [l, m, c] : lmc) {
        (void)c;
        if (l < 0 || std::abs(m) > l) throw std::invalid_argument("harmonic profile needs 0 <= |m| <= l");
    }
    return [c0, lmc](const Vec& omega) {
        double theta = std::acos(std::clamp(omega[0], -1.0, 1.0));
        double phi = std::atan2(omega[2], omega[1]);
        double r = c0;
        for (const auto& [l, m, c] : lmc) {
            double y = m >= 0 ? boost::math::spherical_harmonic_r(static_cast<unsigned>(l),
                                                                  static_cast<unsigned>(m), theta, phi)
                              : boost::math::spherical_harmonic_i(static_cast<unsigned>(l),
                                                                  static_cast<unsigned>(-m), theta, phi);
            r += c * y;
        }
        return r;
    };
}

Vec boundary_point(const StarDomain& d, const Vec& omega) {
    if (omega.n != d.n) throw std::invalid_argument("direction dimension does not match domain");
    double r = norm(omega);
    if (std::abs(r - 1.0) > 1e-12) throw std::invalid_argument("boundary_point needs a unit direction (|omega| = 1 within 1e-12)");
    Vec u = (1.0 / r) * omega;
    return d.profile(u) * u;
}

bool contains(const StarDomain& d, const Vec& x) {
    if (x.n != d.n) throw std::invalid_argument("point dimension does not match domain");
    double r = norm(x);
    if (r == 0.0) return true;
    return r < d.profile((1.0 / r) * x);
}

}  // namespace starhardy::geometry
