#include "starhardy/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starhardy/numutil.hpp"

namespace starhardy::probes {

namespace {

using funcspace::ScalarField;

constexpr int kFitRungs = 4;

}  // namespace

std::vector<double> default_ladder() {
    std::vector<double> d;
    for (int k = 3; k <= 10; ++k) d.push_back(std::ldexp(1.0, -k));
    return d;
}

DivergenceFit fit_ladder(const std::vector<double>& deltas, const std::vector<double>& values) {
    if (deltas.size() != values.size())
        throw std::invalid_argument("ladder radii and values must match in length");
    if (static_cast<int>(deltas.size()) < kFitRungs)
        throw std::invalid_argument("divergence fits need at least four ladder rungs");
    DivergenceFit fit;
    fit.deltas = deltas;
    fit.values = values;
    // Keep rungs sorted by shrinking radius; the tail is the last four.
    std::vector<size_t> idx(deltas.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&deltas](size_t a, size_t b) { return deltas[a] > deltas[b]; });

    std::vector<double> tail_deltas, tail_values;
    for (int k = 0; k < kFitRungs; ++k) {
        size_t i = idx[idx.size() - kFitRungs + static_cast<size_t>(k)];
        if (!(values[i] > 0))
            throw std::invalid_argument("ladder values must be positive for a log-log fit");
        tail_deltas.push_back(deltas[i]);
        tail_values.push_back(values[i]);
    }

    auto least_squares = [](const std::vector<double>& xs, const std::vector<double>& ys,
                            double* slope, double* r2) {
        double m = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        double cov = sxy - sx * sy / m;
        double varx = sxx - sx * sx / m;
        double vary = syy - sy * sy / m;
        *slope = cov / varx;
        *r2 = vary > 0 ? (cov * cov) / (varx * vary) : 1.0;
    };

    std::vector<double> lx, ly, ix, iy;
    for (int k = 0; k < kFitRungs; ++k) {
        lx.push_back(std::log(tail_deltas[static_cast<size_t>(k)]));
        ly.push_back(std::log(tail_values[static_cast<size_t>(k)]));
        ix.push_back(std::log(1.0 / tail_deltas[static_cast<size_t>(k)]));
        iy.push_back(tail_values[static_cast<size_t>(k)]);
    }
    double r2_power = 0, r2_log = 0, slope_log = 0;
    least_squares(lx, ly, &fit.fitted_exponent, &r2_power);
    least_squares(ix, iy, &slope_log, &r2_log);
    fit.r_squared = r2_power;

    // A logarithmic blow-up looks like v = a + b*log(1/delta): the linear model
    // in log(1/delta) fits better than the power model, the per-e-fold
    // increments stay flat (a power law scales them geometrically, a convergent
    // tail shrinks them), and the apparent power slope is shallow.
    double b_first = (tail_values[1] - tail_values[0]) / (ix[1] - ix[0]);
    double b_last = (tail_values[kFitRungs - 1] - tail_values[kFitRungs - 2]) /
                    (ix[kFitRungs - 1] - ix[kFitRungs - 2]);
    double growth = tail_values.back() - tail_values.front();
    bool growing = growth > 0.05 * std::abs(tail_values.back());
    bool flat_increments = b_first > 0 && b_last >= 0.9 * b_first;
    fit.log_flag = growing && flat_increments && r2_log > r2_power &&
                   std::abs(fit.fitted_exponent) < 0.5;
    return fit;
}

Prop1Report prop1_probe(int n, double p, double alpha, const Vec& x0,
                        const std::vector<double>& deltas, int order, int azimuth) {
    if (static_cast<int>(deltas.size()) < kFitRungs)
        throw std::invalid_argument("divergence fits need at least four ladder rungs");
    if (!(p >= 1.0)) throw std::invalid_argument("the probe needs p >= 1");
    ScalarField u = funcspace::prop1_function(n, alpha, x0);

    quadrature::SphereRule ang = quadrature::cap_graded_sphere_rule(n, x0, deltas, order, azimuth);
    std::vector<double> sphere_vals, grad_vals;
    std::vector<double> su(ang.nodes.size()), sg(ang.nodes.size());
    for (size_t i = 0; i < ang.nodes.size(); ++i) {
        const Vec& omega = ang.nodes[i];
        su[i] = std::pow(std::abs(u.boundary(omega)), p);
        sg[i] = std::pow(norm(funcspace::pullback_sphere_gradient(u, omega)), p);
    }
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (double delta : sorted) {
        double vs = 0, vg = 0;
        for (size_t i = 0; i < ang.nodes.size(); ++i) {
            if (chordal_distance(ang.nodes[i], x0) <= delta) continue;
            vs += ang.weights[i] * su[i];
            vg += ang.weights[i] * sg[i];
        }
        sphere_vals.push_back(vs);
        grad_vals.push_back(vg);
    }

    Prop1Report rep;
    rep.n = n;
    rep.p = p;
    rep.alpha = alpha;
    rep.membership = funcspace::prop1_membership(n, p, alpha);
    rep.sphere = fit_ladder(sorted, sphere_vals);
    rep.gradient = fit_ladder(sorted, grad_vals);
    rep.expected_sphere_exponent = (n - 1) - p * alpha;
    rep.expected_gradient_exponent = (n - 1) - p * (alpha + 1);
    return rep;
}

SharpnessScan sharpness_scan(const geometry::StarDomain& d, const fields::RadialField& f,
                             const ScalarField& psi, double p, int n,
                             const std::vector<double>& beta_grid,
                             const quadrature::QuadratureRule& rule) {
    if (beta_grid.empty()) throw std::invalid_argument("sharpness scans need a nonempty grid");
    funcspace::Exponents e = funcspace::make_exponents(n, p);
    SharpnessScan scan;
    scan.beta_grid = beta_grid;
    for (double beta : beta_grid) {
        ScalarField u = funcspace::beta_family(d, psi, beta, n, p);
        hardy::InequalityReport rep = hardy::verify(u, f, d, e, hardy::Mode::Subcritical, rule);
        double cf = std::pow(e.kappa / beta, p);
        scan.q_values.push_back(rep.q);
        scan.q_closed_form.push_back(cf);
        scan.max_closed_form_residual =
            std::max(scan.max_closed_form_residual, std::abs(rep.q - cf));
        if (rep.q > scan.q_at_argmax) {
            scan.q_at_argmax = rep.q;
            scan.argmax_beta = beta;
        }
    }
    return scan;
}

MaximizerReport maximizer_check_xi(const std::vector<double>& axes, int n, double p,
                                   const quadrature::QuadratureRule& rule) {
    ScalarField xi = funcspace::maximizer_xi(axes, n, p);
    geometry::StarDomain d = geometry::make_ellipsoid(axes);
    fields::RadialField f = fields::ellipsoid_field(axes);
    funcspace::Exponents e = funcspace::make_exponents(n, p);

    MaximizerReport rep;
    rep.kind = "xi";
    rep.inequality = hardy::verify(xi, f, d, e, hardy::Mode::Subcritical, rule);
    rep.i_volume = rep.inequality.lhs;
    // int |psi|^p |x|^{n-2p} reduces per ray to r^{2(n-p)} / (2(n-p)).
    quadrature::SphereRule ang = quadrature::build_sphere_rule(d, rule);
    std::vector<double> contrib(ang.nodes.size());
    for (size_t i = 0; i < ang.nodes.size(); ++i) {
        const Vec& omega = ang.nodes[i];
        double rb = d.profile(omega);
        double psi = omega[0] / anorm(omega, axes);
        contrib[i] = ang.weights[i] * std::pow(std::abs(psi), p) *
                     std::pow(rb, 2 * (n - p)) / (2 * (n - p));
    }
    rep.i_sphere = pairwise_sum(contrib);
    rep.rel_gap = std::abs(rep.i_volume - rep.i_sphere) / std::abs(rep.i_sphere);
    return rep;
}

MaximizerReport maximizer_check_eta(const std::vector<double>& axes, int n, double alpha,
                                    const quadrature::QuadratureRule& rule) {
    ScalarField eta = funcspace::maximizer_eta(axes, n, alpha);
    geometry::StarDomain d = geometry::make_ellipsoid(axes);
    fields::RadialField f = fields::ellipsoid_field(axes);
    funcspace::Exponents e = funcspace::make_exponents(n, n);

    MaximizerReport rep;
    rep.kind = "eta";
    rep.inequality = hardy::verify(eta, f, d, e, hardy::Mode::Critical, rule);
    rep.i_volume = rep.inequality.lhs;
    // int |psi|^n / (|x|^n log^{2n-1}(M/|x|)) reduces per ray to
    // (M - r)^{n alpha} log^{-(2n-2)}(M/r) / (2n-2).
    double M = d.M;
    quadrature::SphereRule ang = quadrature::build_sphere_rule(d, rule);
    std::vector<double> contrib(ang.nodes.size());
    for (size_t i = 0; i < ang.nodes.size(); ++i) {
        const Vec& omega = ang.nodes[i];
        double rb = d.profile(omega);
        contrib[i] = ang.weights[i] * std::pow(M - rb, n * alpha) *
                     std::pow(std::log(M / rb), -(2 * n - 2)) / (2 * n - 2);
    }
    rep.i_sphere = pairwise_sum(contrib);
    rep.rel_gap = std::abs(rep.i_volume - rep.i_sphere) / std::abs(rep.i_sphere);
    return rep;
}

}  // namespace starhardy::probes
