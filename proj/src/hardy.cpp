#include "starhardy/hardy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "starhardy/numutil.hpp"

namespace starhardy::hardy {

namespace {

using funcspace::ScalarField;
using geometry::StarDomain;
using quadrature::Gauss1D;
using quadrature::QuadratureRule;
using quadrature::SphereRule;

// |.|^p is smooth only for even integer p; everything else needs panel
// splitting at sign changes of the base.
bool needs_kink_split(double p) {
    double r = std::round(p);
    return !(std::abs(p - r) < 1e-12 && static_cast<long long>(r) % 2 == 0);
}

void require_subcritical(const ScalarField& u, const StarDomain& d, double p) {
    if (u.n != d.n) throw std::invalid_argument("field and domain dimensions do not match");
    if (d.n < 3) throw std::invalid_argument("the subcritical inequality needs n >= 3");
    if (!(p >= 1.0) || !(p < d.n))
        throw std::invalid_argument("the subcritical inequality needs 1 <= p < n");
}

void require_critical(const ScalarField& u, const StarDomain& d) {
    if (u.n != d.n) throw std::invalid_argument("field and domain dimensions do not match");
    if (d.n < 2) throw std::invalid_argument("the critical inequality needs n >= 2");
}

// Left integrals share one shape: sum_omega w * int |G_omega(t)|^p W(t) dt
// over graded panels, with an optional analytic head for the truncated
// (0, t*) piece. G_omega folds in the ray-constant composition value.
struct RayIntegrand {
    std::function<double(double)> base;    // t -> G(t)
    std::function<double(double)> weight;  // t -> W(t)
    double head = 0;                       // analytic correction below t*
};

double sphere_radial_sum(const StarDomain& d, const SphereRule& ang,
                         const quadrature::RadialSpec& rspec, double p, bool split,
                         const std::function<RayIntegrand(const Vec&, double, double)>& make) {
    Gauss1D gauss = quadrature::gauss_legendre(rspec.order);
    std::vector<double> contrib;
    contrib.reserve(ang.nodes.size());
    for (size_t i = 0; i < ang.nodes.size(); ++i) {
        const Vec& omega = ang.nodes[i];
        double rb = d.profile(omega);
        auto panels = quadrature::graded_panels(rb, rspec);
        double tstar = panels.front().first;
        RayIntegrand ri = make(omega, rb, tstar);
        double v = quadrature::radial_abs_pow(ri.base, ri.weight, p, panels, gauss, split);
        contrib.push_back(ang.weights[i] * (v + ri.head));
    }
    return pairwise_sum(contrib);
}

double sub_lhs_on(const ScalarField& u, const fields::RadialField& f, const StarDomain& d,
                  double p, const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    auto make = [&u, &f, n, p](const Vec& omega, double rb, double) {
        RayIntegrand ri;
        double ub = u.boundary(f.map(rb * omega));
        ri.base = [&u, omega, ub](double t) { return u.interior(t * omega) - ub; };
        ri.weight = [n, p](double t) { return std::pow(t, n - 1 - p); };
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, p, needs_kink_split(p), make);
}

double sub_rhs_on(const ScalarField& u, const StarDomain& d, double p,
                  const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    auto make = [&u, n](const Vec& omega, double, double) {
        RayIntegrand ri;
        ri.base = [&u, omega](double t) { return funcspace::radial_derivative(u, t * omega); };
        ri.weight = [n](double t) { return std::pow(t, n - 1); };
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, p, needs_kink_split(p), make);
}

double crit_lhs_on(const ScalarField& u, const fields::RadialField& f, const StarDomain& d,
                   const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    double M = d.M;
    auto make = [&u, &f, n, M](const Vec& omega, double rb, double tstar) {
        RayIntegrand ri;
        double ub = u.boundary(f.map(rb * omega));
        ri.base = [&u, omega, ub](double t) { return u.interior(t * omega) - ub; };
        ri.weight = [n, M](double t) { return std::pow(std::log(M / t), -n) / t; };
        double g = std::abs(u.interior(tstar * omega) - ub);
        ri.head = std::pow(g, n) * std::pow(std::log(M / tstar), 1 - n) / (n - 1);
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, n, needs_kink_split(n), make);
}

double crit_rhs_on(const ScalarField& u, const StarDomain& d, const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    auto make = [&u, n](const Vec& omega, double, double) {
        RayIntegrand ri;
        ri.base = [&u, omega](double t) { return funcspace::radial_derivative(u, t * omega); };
        ri.weight = [n](double t) { return std::pow(t, n - 1); };
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, n, needs_kink_split(n), make);
}

// Classical modes: no composition. Subcritical uses the full gradient.
double classical_lhs_on(const ScalarField& u, const StarDomain& d, double p, bool critical,
                        const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    double M = d.M;
    auto make = [&u, n, p, M, critical](const Vec& omega, double, double tstar) {
        RayIntegrand ri;
        ri.base = [&u, omega](double t) { return u.interior(t * omega); };
        if (critical) {
            ri.weight = [n, M](double t) { return std::pow(std::log(M / t), -n) / t; };
            double g = std::abs(u.interior(tstar * omega));
            ri.head = std::pow(g, n) * std::pow(std::log(M / tstar), 1 - n) / (n - 1);
        } else {
            ri.weight = [n, p](double t) { return std::pow(t, n - 1 - p); };
        }
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, p, needs_kink_split(p), make);
}

double classical_grad_rhs_on(const ScalarField& u, const StarDomain& d, double p,
                             const QuadratureRule& rule) {
    // |grad u| is nonnegative: no sign splitting regardless of p.
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    int n = d.n;
    auto make = [&u, n](const Vec& omega, double, double) {
        RayIntegrand ri;
        ri.base = [&u, omega](double t) { return norm(funcspace::gradient(u, t * omega)); };
        ri.weight = [n](double t) { return std::pow(t, n - 1); };
        return ri;
    };
    return sphere_radial_sum(d, ang, rule.radial, p, false, make);
}

void require_boundary_vanishing(const ScalarField& u, const StarDomain& d,
                                const QuadratureRule& rule) {
    SphereRule ang = quadrature::build_sphere_rule(d, rule);
    for (const Vec& omega : ang.nodes) {
        Vec y = geometry::boundary_point(d, omega);
        if (std::abs(u.boundary(y)) > 1e-9)
            throw std::invalid_argument(
                "classical baselines need boundary-vanishing fields: |u| > 1e-9 at a boundary node");
    }
}

}  // namespace

double lhs_subcritical(const ScalarField& u, const fields::RadialField& f, const StarDomain& d,
                       double p, const QuadratureRule& rule) {
    require_subcritical(u, d, p);
    return sub_lhs_on(u, f, d, p, rule);
}

double rhs_subcritical_integral(const ScalarField& u, const StarDomain& d, double p,
                                const QuadratureRule& rule) {
    require_subcritical(u, d, p);
    return sub_rhs_on(u, d, p, rule);
}

double lhs_critical(const ScalarField& u, const fields::RadialField& f, const StarDomain& d,
                    const QuadratureRule& rule) {
    require_critical(u, d);
    return crit_lhs_on(u, f, d, rule);
}

double rhs_critical_integral(const ScalarField& u, const StarDomain& d,
                             const QuadratureRule& rule) {
    require_critical(u, d);
    return crit_rhs_on(u, d, rule);
}

InequalityReport verify(const ScalarField& u, const fields::RadialField& f, const StarDomain& d,
                        const funcspace::Exponents& e, Mode mode, const QuadratureRule& rule) {
    if (e.n != d.n) throw std::invalid_argument("exponents and domain dimensions do not match");
    InequalityReport rep;
    rep.mode = mode;
    rep.n = e.n;
    rep.p = e.p;

    QuadratureRule coarse = rule.coarsened();
    double lf = 0, lc = 0, rf = 0, rc = 0;
    switch (mode) {
        case Mode::Subcritical:
            require_subcritical(u, d, e.p);
            rep.constant = e.c_subcritical;
            lf = sub_lhs_on(u, f, d, e.p, rule);
            lc = sub_lhs_on(u, f, d, e.p, coarse);
            rf = sub_rhs_on(u, d, e.p, rule);
            rc = sub_rhs_on(u, d, e.p, coarse);
            break;
        case Mode::Critical:
            require_critical(u, d);
            if (std::abs(e.p - e.n) > 1e-12)
                throw std::invalid_argument("the critical inequality needs p = n");
            rep.constant = e.c_critical;
            lf = crit_lhs_on(u, f, d, rule);
            lc = crit_lhs_on(u, f, d, coarse);
            rf = crit_rhs_on(u, d, rule);
            rc = crit_rhs_on(u, d, coarse);
            break;
        case Mode::ClassicalSubcritical:
            require_subcritical(u, d, e.p);
            require_boundary_vanishing(u, d, rule);
            rep.constant = e.c_subcritical;
            lf = classical_lhs_on(u, d, e.p, false, rule);
            lc = classical_lhs_on(u, d, e.p, false, coarse);
            rf = classical_grad_rhs_on(u, d, e.p, rule);
            rc = classical_grad_rhs_on(u, d, e.p, coarse);
            break;
        case Mode::ClassicalCritical:
            require_critical(u, d);
            if (std::abs(e.p - e.n) > 1e-12)
                throw std::invalid_argument("the critical inequality needs p = n");
            require_boundary_vanishing(u, d, rule);
            rep.constant = e.c_critical;
            lf = classical_lhs_on(u, d, e.p, true, rule);
            lc = classical_lhs_on(u, d, e.p, true, coarse);
            rf = crit_rhs_on(u, d, rule);
            rc = crit_rhs_on(u, d, coarse);
            break;
    }

    rep.lhs = lf;
    rep.lhs_error = std::abs(lf - lc);
    rep.rhs_integral = rf;
    rep.rhs_error = std::abs(rf - rc);
    rep.rhs = rep.constant * rf;
    rep.defect = rep.rhs - rep.lhs;
    auto quotient = [&rep](double l, double r) {
        double denom = rep.constant * r;
        if (std::abs(l) < 1e-14 && std::abs(denom) < 1e-14) return 0.0;
        return l / denom;
    };
    rep.q = quotient(lf, rf);
    rep.q_error = std::abs(rep.q - quotient(lc, rc));
    return rep;
}

Lemma2Report lemma2_check(const ScalarField& g, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("lemma check needs at least one sample");
    Lemma2Report rep;
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        Vec x = (0.1 + 0.85 * rng.uniform()) * rng.unit_vector(g.n);
        if (std::abs(g.interior(x)) <= 1e-6 || !funcspace::fd_safe(g, x)) {
            ++rep.skipped;
            continue;
        }
        double r = norm(x);
        Vec omega = (1.0 / r) * x;
        double h = 1e-6 * std::max(1.0, r);
        double gp = g.interior(x + h * omega), gm = g.interior(x - h * omega);
        double dg = r * (gp - gm) / (2 * h);
        double dabs = r * (std::abs(gp) - std::abs(gm)) / (2 * h);
        rep.max_violation = std::max(rep.max_violation, std::abs(dabs) - std::abs(dg));
        ++rep.samples;
    }
    return rep;
}

}  // namespace starhardy::hardy
