#include "starhardy/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "starhardy/numutil.hpp"

namespace starhardy::funcspace {

namespace {

double smoothstep(double s) { return ((6 * s - 15) * s + 10) * s * s * s; }
double smoothstep_deriv(double s) { return 30 * s * s * (s - 1) * (s - 1); }

double fd_step(const Vec& x) { return 1e-6 * std::max(1.0, norm(x)); }

void require_axes(const std::vector<double>& axes, int n) {
    if (static_cast<int>(axes.size()) != n)
        throw std::invalid_argument("axis count does not match the dimension");
    for (double a : axes)
        if (!(a > 0)) throw std::invalid_argument("axis coefficients must be positive");
}

std::string format_param(const char* name, double v) {
    std::ostringstream os;
    os << name << "=" << v;
    return os.str();
}

}  // namespace

Exponents make_exponents(int n, double p) {
    if (n < 2) throw std::invalid_argument("exponents need n >= 2");
    if (!(p >= 1.0) || !(p <= n))
        throw std::invalid_argument("exponent p must lie in [1, n]");
    Exponents e;
    e.n = n;
    e.p = p;
    e.kappa = (n - p) / p;
    e.c_subcritical = p < n ? std::pow(p / (n - p), p) : std::nan("");
    e.c_critical = std::pow(n / (n - 1.0), n);
    return e;
}

double eval(const ScalarField& u, const Vec& x) { return u.interior(x); }

double eval_boundary(const ScalarField& u, const Vec& y) { return u.boundary(y); }

Vec gradient(const ScalarField& u, const Vec& x) {
    if (u.gradient_fn) return u.gradient_fn(x);
    double h = fd_step(x);
    Vec g(x.n);
    for (int i = 0; i < x.n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (u.interior(xp) - u.interior(xm)) / (2 * h);
    }
    return g;
}

double radial_derivative(const ScalarField& u, const Vec& x) {
    double r = norm(x);
    if (r == 0.0) throw std::domain_error("radial derivative is undefined at the origin");
    if (u.radial_fn) return u.radial_fn(x);
    Vec omega = (1.0 / r) * x;
    if (u.gradient_fn) return dot(omega, u.gradient_fn(x));
    double h = fd_step(x);
    return (u.interior(x + h * omega) - u.interior(x - h * omega)) / (2 * h);
}

Vec pullback_sphere_gradient(const ScalarField& u, const Vec& x) {
    double r = norm(x);
    if (r == 0.0) throw std::domain_error("sphere pullback is undefined at the origin");
    Vec omega = (1.0 / r) * x;
    Vec g = gradient(u, omega);
    return (1.0 / r) * (g - dot(omega, g) * omega);
}

bool fd_safe(const ScalarField& u, const Vec& x, double margin) {
    for (const Vec& s : u.singular_points)
        if (chordal_distance(x, s) < margin) return false;
    return true;
}

ScalarField compose_with_field(const ScalarField& u, const fields::RadialField& f) {
    if (u.n != f.n) throw std::invalid_argument("field dimensions do not match");
    ScalarField c;
    c.n = u.n;
    c.tag = u.tag + ".pullback";
    c.smoothness = u.smoothness == Smoothness::Singular ? Smoothness::Singular
                                                        : Smoothness::Piecewise;
    auto ub = u.boundary;
    auto fmap = f.map;
    c.interior = [ub, fmap](const Vec& x) { return ub(fmap(x)); };
    c.boundary = u.boundary;
    c.radial_fn = [](const Vec&) { return 0.0; };
    c.singular_points = u.singular_points;
    return c;
}

double smooth_cutoff(double t) {
    if (t <= 0.5 || t >= 1.5) return 0.0;
    if (t < 0.75) return smoothstep((t - 0.5) / 0.25);
    if (t <= 1.25) return 1.0;
    return smoothstep((1.5 - t) / 0.25);
}

double smooth_cutoff_deriv(double t) {
    if (t <= 0.5 || t >= 1.5) return 0.0;
    if (t < 0.75) return smoothstep_deriv((t - 0.5) / 0.25) / 0.25;
    if (t <= 1.25) return 0.0;
    return -smoothstep_deriv((1.5 - t) / 0.25) / 0.25;
}

ScalarField prop1_function(int n, double alpha, const Vec& x0) {
    Vec::check_dim(n);
    if (!(alpha > 0)) throw std::invalid_argument("pole strength alpha must be positive");
    if (x0.n != n) throw std::invalid_argument("pole dimension does not match n");
    if (std::abs(norm(x0) - 1.0) > 1e-12)
        throw std::invalid_argument("the pole must sit on the unit sphere");

    ScalarField u;
    u.n = n;
    u.tag = "cutoff-pole(" + format_param("alpha", alpha) + ")";
    u.smoothness = Smoothness::Singular;
    u.singular_points = {x0};
    u.interior = [alpha, x0](const Vec& x) {
        double s = chordal_distance(x, x0);
        if (s == 0.0) throw std::domain_error("evaluation at the pole of the probe function");
        return smooth_cutoff(norm(x)) * std::pow(s, -alpha);
    };
    u.boundary = u.interior;
    u.gradient_fn = [alpha, x0](const Vec& x) {
        Vec d = x - x0;
        double s = norm(d);
        if (s == 0.0) throw std::domain_error("evaluation at the pole of the probe function");
        double r = norm(x);
        Vec g(x.n);
        if (r > 0.0) g = (smooth_cutoff_deriv(r) * std::pow(s, -alpha) / r) * x;
        g -= (alpha * smooth_cutoff(r) * std::pow(s, -alpha - 2)) * d;
        return g;
    };
    return u;
}

Prop1Membership prop1_membership(int n, double p, double alpha) {
    if (n < 2 || !(p >= 1.0)) throw std::invalid_argument("membership thresholds need n >= 2, p >= 1");
    if (!(alpha > 0)) throw std::invalid_argument("pole strength alpha must be positive");
    Prop1Membership m;
    m.u_in_lp = alpha < n / p;
    m.pullback_in_lp = alpha < (n - 1) / p;
    m.u_in_w1p = alpha < (n - p) / p;
    m.pullback_in_w1p = alpha < (n - p - 1) / p;
    return m;
}

ScalarField psi_ellipsoid(const std::vector<double>& axes) {
    int n = static_cast<int>(axes.size());
    Vec::check_dim(n);
    require_axes(axes, n);
    ScalarField psi;
    psi.n = n;
    psi.tag = "angular-coordinate";
    psi.smoothness = Smoothness::C1Closure;
    psi.interior = [axes](const Vec& x) {
        double na = anorm(x, axes);
        if (na == 0.0) throw std::domain_error("angular factor is undefined at the origin");
        return x[0] / na;
    };
    psi.boundary = psi.interior;
    psi.gradient_fn = [axes](const Vec& x) {
        double na = anorm(x, axes);
        if (na == 0.0) throw std::domain_error("angular factor is undefined at the origin");
        Vec g(x.n);
        g[0] = 1.0 / na;
        double c = x[0] / (na * na * na);
        for (int i = 0; i < x.n; ++i) {
            double ai = axes[static_cast<size_t>(i)];
            g[i] -= c * ai * ai * x[i];
        }
        return g;
    };
    psi.radial_fn = [](const Vec&) { return 0.0; };
    return psi;
}

ScalarField maximizer_xi(const std::vector<double>& axes, int n, double p) {
    Vec::check_dim(n);
    require_axes(axes, n);
    if (n < 3) throw std::invalid_argument("the subcritical equality case needs n >= 3");
    if (!(p >= 1.0) || !(p < n))
        throw std::invalid_argument("the subcritical equality case needs 1 <= p < n");
    double kappa = (n - p) / p;

    ScalarField xi;
    xi.n = n;
    xi.tag = "xi(" + format_param("p", p) + ")";
    xi.smoothness = Smoothness::Piecewise;
    xi.interior = [axes, kappa](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (na == 0.0) throw std::domain_error("equality-case field is undefined at the origin");
        double psi = x[0] / na;
        return (std::pow(r, kappa) + std::pow(r / na, kappa)) * psi;
    };
    xi.boundary = [axes, kappa](const Vec& y) {
        double na = anorm(y, axes);
        if (na == 0.0) throw std::domain_error("equality-case field is undefined at the origin");
        return std::pow(norm(y), kappa) * y[0] / na;
    };
    xi.gradient_fn = [axes, kappa](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (r == 0.0 || na == 0.0)
            throw std::domain_error("equality-case field is undefined at the origin");
        double psi = x[0] / na;
        double rk = std::pow(r, kappa), qk = std::pow(r / na, kappa);
        Vec ax(x.n);  // A x with A = diag(a_i^2)
        for (int i = 0; i < x.n; ++i) {
            double ai = axes[static_cast<size_t>(i)];
            ax[i] = ai * ai * x[i];
        }
        Vec grad_psi(x.n);
        grad_psi[0] = 1.0 / na;
        grad_psi -= (x[0] / (na * na * na)) * ax;
        // grad(r/na) = x/(r na) - r Ax / na^3
        Vec grad_q = (1.0 / (r * na)) * x - (r / (na * na * na)) * ax;
        Vec g = (kappa * rk / (r * r)) * (psi * x);
        g += (kappa * std::pow(r / na, kappa - 1) * psi) * grad_q;
        g += (rk + qk) * grad_psi;
        return g;
    };
    xi.radial_fn = [axes, kappa](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (r == 0.0 || na == 0.0)
            throw std::domain_error("equality-case field is undefined at the origin");
        return kappa * std::pow(r, kappa - 1) * x[0] / na;
    };
    return xi;
}

ScalarField maximizer_eta(const std::vector<double>& axes, int n, double alpha) {
    Vec::check_dim(n);
    require_axes(axes, n);
    if (n < 2) throw std::invalid_argument("the critical equality case needs n >= 2");
    double amin = *std::min_element(axes.begin(), axes.end());
    int hits = static_cast<int>(std::count_if(axes.begin(), axes.end(),
                                              [amin](double a) { return a == amin; }));
    if (hits == n)
        throw std::invalid_argument(
            "no maximizer exists on balls: the top-radius set is the whole boundary");
    if (hits != 1)
        throw std::invalid_argument(
            "the smallest axis coefficient must be attained exactly once");
    if (!(alpha >= 0.5 * n))
        throw std::invalid_argument("alpha >= n/2 is required for an integrable gradient");
    double M = 1.0 / amin;
    double beta = (n - 1.0) / n;

    ScalarField eta;
    eta.n = n;
    eta.tag = "eta(" + format_param("alpha", alpha) + ")";
    eta.smoothness = Smoothness::Piecewise;
    eta.interior = [axes, alpha, M, beta](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (r == 0.0 || na == 0.0)
            throw std::domain_error("equality-case field is undefined at the origin");
        double rho = r / na;  // boundary radius along this ray
        double L = std::log(M / r);
        return std::pow(M - rho, alpha) * std::pow(L, -beta);
    };
    eta.boundary = [](const Vec&) { return 0.0; };
    eta.gradient_fn = [axes, alpha, M, beta](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (r == 0.0 || na == 0.0)
            throw std::domain_error("equality-case field is undefined at the origin");
        double rho = r / na;
        double L = std::log(M / r);
        Vec ax(x.n);
        for (int i = 0; i < x.n; ++i) {
            double ai = axes[static_cast<size_t>(i)];
            ax[i] = ai * ai * x[i];
        }
        Vec grad_rho = (1.0 / (r * na)) * x - (r / (na * na * na)) * ax;
        double psi = std::pow(M - rho, alpha);
        Vec g = (-alpha * std::pow(M - rho, alpha - 1) * std::pow(L, -beta)) * grad_rho;
        // grad L^{-beta} = beta L^{-beta-1} x / |x|^2
        g += (psi * beta * std::pow(L, -beta - 1) / (r * r)) * x;
        return g;
    };
    eta.radial_fn = [axes, alpha, M, beta](const Vec& x) {
        double r = norm(x);
        double na = anorm(x, axes);
        if (r == 0.0 || na == 0.0)
            throw std::domain_error("equality-case field is undefined at the origin");
        double rho = r / na;
        double L = std::log(M / r);
        return std::pow(M - rho, alpha) * beta * std::pow(L, -beta - 1) / r;
    };
    return eta;
}

ScalarField beta_family(const geometry::StarDomain& d, const ScalarField& psi, double beta,
                        int n, double p) {
    if (psi.n != n || d.n != n) throw std::invalid_argument("field dimensions do not match");
    if (!(p >= 1.0) || !(p < n)) throw std::invalid_argument("the family needs 1 <= p < n");
    double kappa = (n - p) / p;
    if (beta < kappa - 1e-12)
        throw std::invalid_argument(
            "family exponent below (n-p)/p: the defining integrals diverge");

    // psi must be radially invariant; spot-check a few rays.
    Rng rng(0xbe7a);
    for (int k = 0; k < 8; ++k) {
        Vec omega = rng.unit_vector(n);
        double v1 = psi.interior(0.3 * omega), v2 = psi.interior(0.6 * omega);
        if (std::abs(v1 - v2) > 1e-10 * std::max(1.0, std::abs(v1)))
            throw std::invalid_argument("the angular factor is not radially invariant");
    }

    ScalarField u;
    u.n = n;
    u.tag = "ray-power(" + format_param("beta", beta) + ")";
    u.smoothness = Smoothness::Piecewise;
    auto profile = d.profile;
    auto psi_in = psi.interior;
    u.interior = [profile, psi_in, beta](const Vec& x) {
        double r = norm(x);
        if (r == 0.0) throw std::domain_error("family member is undefined at the origin");
        double rb = profile((1.0 / r) * x);
        return (std::pow(r, beta) + std::pow(rb, beta)) * psi_in(x);
    };
    u.boundary = [psi_in, beta](const Vec& y) {
        return std::pow(norm(y), beta) * psi_in(y);
    };
    u.radial_fn = [psi_in, beta](const Vec& x) {
        double r = norm(x);
        if (r == 0.0) throw std::domain_error("family member is undefined at the origin");
        return beta * std::pow(r, beta - 1) * psi_in(x);
    };
    u.singular_points = psi.singular_points;
    return u;
}

std::vector<ScalarField> c1_catalog(int n) {
    Vec::check_dim(n);
    std::vector<ScalarField> cat;
    auto add = [&cat, n](const std::string& tag,
                         std::function<double(const Vec&)> value,
                         std::function<Vec(const Vec&)> grad,
                         std::function<double(const Vec&)> rad) {
        ScalarField u;
        u.n = n;
        u.tag = tag;
        u.smoothness = Smoothness::C1Closure;
        u.interior = std::move(value);
        u.boundary = u.interior;
        u.gradient_fn = std::move(grad);
        u.radial_fn = std::move(rad);
        cat.push_back(std::move(u));
    };

    add("norm", [](const Vec& x) { return norm(x); },
        [](const Vec& x) { return normalized(x); },
        [](const Vec&) { return 1.0; });
    add("norm-squared", [](const Vec& x) { return dot(x, x); },
        [](const Vec& x) { return 2.0 * x; },
        [](const Vec& x) { return 2.0 * norm(x); });
    add("norm-3/2", [](const Vec& x) { return std::pow(norm(x), 1.5); },
        [](const Vec& x) { return 1.5 * std::pow(norm(x), 0.5) * normalized(x); },
        [](const Vec& x) { return 1.5 * std::pow(norm(x), 0.5); });
    add("coordinate", [](const Vec& x) { return x[0]; },
        [](const Vec& x) { return basis_vector(x.n, 0); },
        [](const Vec& x) { return x[0] / norm(x); });
    add("coordinate-squared", [](const Vec& x) { return x[0] * x[0]; },
        [](const Vec& x) { return (2.0 * x[0]) * basis_vector(x.n, 0); },
        [](const Vec& x) { return 2.0 * x[0] * x[0] / norm(x); });
    add("coordinate-cubed", [](const Vec& x) { return x[0] * x[0] * x[0]; },
        [](const Vec& x) { return (3.0 * x[0] * x[0]) * basis_vector(x.n, 0); },
        [](const Vec& x) { return 3.0 * x[0] * x[0] * x[0] / norm(x); });
    add("norm2-coordinate", [](const Vec& x) { return dot(x, x) * x[0]; },
        [](const Vec& x) { return (2.0 * x[0]) * x + dot(x, x) * basis_vector(x.n, 0); },
        [](const Vec& x) { return 3.0 * norm(x) * x[0]; });
    add("gaussian", [](const Vec& x) { return std::exp(-dot(x, x)); },
        [](const Vec& x) { return (-2.0 * std::exp(-dot(x, x))) * x; },
        [](const Vec& x) { return -2.0 * norm(x) * std::exp(-dot(x, x)); });
    add("lorentz", [](const Vec& x) { return 1.0 / (1.0 + dot(x, x)); },
        [](const Vec& x) {
            double d = 1.0 + dot(x, x);
            return (-2.0 / (d * d)) * x;
        },
        [](const Vec& x) {
            double d = 1.0 + dot(x, x);
            return -2.0 * norm(x) / (d * d);
        });
    add("cos-coordinate", [](const Vec& x) { return std::cos(x[0]); },
        [](const Vec& x) { return -std::sin(x[0]) * basis_vector(x.n, 0); },
        [](const Vec& x) { return -std::sin(x[0]) * x[0] / norm(x); });
    add("exp-coordinate", [](const Vec& x) { return std::exp(0.5 * x[0]); },
        [](const Vec& x) { return 0.5 * std::exp(0.5 * x[0]) * basis_vector(x.n, 0); },
        [](const Vec& x) { return 0.5 * std::exp(0.5 * x[0]) * x[0] / norm(x); });
    add("log-shell", [](const Vec& x) { return std::log1p(dot(x, x)); },
        [](const Vec& x) { return (2.0 / (1.0 + dot(x, x))) * x; },
        [](const Vec& x) { return 2.0 * norm(x) / (1.0 + dot(x, x)); });
    // Smooth compactly supported bump; the support radius 2 exceeds every
    // domain the suites use, so no support boundary lies inside the closure.
    add("bump", [](const Vec& x) { return std::exp(-1.0 / (4.0 - dot(x, x))); },
        [](const Vec& x) {
            double d = 4.0 - dot(x, x);
            return (-2.0 * std::exp(-1.0 / d) / (d * d)) * x;
        },
        [](const Vec& x) {
            double d = 4.0 - dot(x, x);
            return -2.0 * norm(x) * std::exp(-1.0 / d) / (d * d);
        });
    return cat;
}

}  // namespace starhardy::funcspace
