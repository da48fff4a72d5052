#include "starhardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "starhardy/numutil.hpp"

namespace starhardy::quadrature {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_point(const Vec& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.n; ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

// Tangent frame at a unit vector: Gram–Schmidt over coordinate axes.
std::vector<Vec> tangent_frame(const Vec& omega) {
    int n = omega.n;
    std::vector<Vec> basis{omega};
    for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
        Vec v = basis_vector(n, i);
        for (const Vec& b : basis) v -= dot(v, b) * b;
        double r = norm(v);
        if (r > 1e-8) basis.push_back((1.0 / r) * v);
    }
    basis.erase(basis.begin());
    return basis;
}

std::vector<int> resolved_counts(int n, const QuadratureRule& rule) {
    if (rule.kind == AngularKind::Qmc || (rule.kind == AngularKind::Auto && n >= 6)) {
        int c = rule.angular_counts.empty() ? 8192 : rule.angular_counts[0];
        return {c};
    }
    std::vector<int> counts = rule.angular_counts;
    const int needed = n - 1;  // n-2 polar angles + azimuth
    if (counts.empty()) {
        int c0 = n == 2 ? 256 : n == 3 ? 32 : n == 4 ? 24 : 16;
        counts.push_back(c0);
    }
    if (n == 2) return {counts[0]};
    while (static_cast<int>(counts.size()) < needed - 1)
        counts.push_back(std::max(6, counts[0] / 3));
    if (static_cast<int>(counts.size()) < needed)
        counts.push_back(std::max(12, 2 * counts[static_cast<size_t>(needed) - 2]));
    counts.resize(static_cast<size_t>(needed));
    for (int& c : counts) c = std::max(2, c);
    return counts;
}

SphereRule circle_rule(int azimuth) {
    SphereRule r;
    r.n = 2;
    double w = 2.0 * kPi / azimuth;
    for (int j = 0; j < azimuth; ++j) {
        double phi = 2.0 * kPi * j / azimuth;
        r.nodes.push_back(Vec{std::cos(phi), std::sin(phi)});
        r.weights.push_back(w);
    }
    return r;
}

SphereRule tensor_sphere_rule(int n, const std::vector<int>& counts) {
    SphereRule cur = circle_rule(counts.back());
    for (int dim = 3; dim <= n; ++dim) {
        // First coordinate of the dim-sphere carries weight (1-c^2)^((dim-3)/2).
        // The outermost angle (the x1 cosine) uses the equator-split composite:
        // fields built from x1 put |.|^p kinks exactly at c = 0.
        Gauss1D polar =
            dim == n ? polar_split_rule(std::max(2, counts[0] / 2), 0.5 * (dim - 3))
                     : gauss_jacobi_symmetric(counts[static_cast<size_t>(n - dim)], 0.5 * (dim - 3));
        SphereRule next;
        next.n = dim;
        next.nodes.reserve(polar.nodes.size() * cur.nodes.size());
        for (size_t i = 0; i < polar.nodes.size(); ++i) {
            double c = polar.nodes[i];
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (size_t j = 0; j < cur.nodes.size(); ++j) {
                Vec v(dim);
                v[0] = c;
                for (int k = 0; k < dim - 1; ++k) v[k + 1] = s * cur.nodes[j][k];
                next.nodes.push_back(v);
                next.weights.push_back(polar.weights[i] * cur.weights[j]);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

Gauss1D gauss_jacobi_symmetric(int npts, double a) {
    if (npts < 1) throw std::invalid_argument("gauss rule needs at least one node");
    if (a <= -1.0) throw std::invalid_argument("jacobi exponent must exceed -1");
    // mu0 = int_{-1}^{1} (1-x^2)^a dx
    double mu0 = std::exp((2 * a + 1) * std::log(2.0) + 2 * std::lgamma(a + 1) - std::lgamma(2 * a + 2));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npts, npts);
    for (int k = 1; k < npts; ++k) {
        // Monic symmetric-Jacobi recurrence: b_k = k(k+2a)/((2k+2a+1)(2k+2a-1)).
        double bk = k * (k + 2 * a) / ((2 * k + 2 * a + 1) * (2 * k + 2 * a - 1));
        double off = std::sqrt(bk);
        J(k - 1, k) = off;
        J(k, k - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss rule eigen-solve failed");
    Gauss1D g;
    g.nodes.resize(static_cast<size_t>(npts));
    g.weights.resize(static_cast<size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        g.nodes[static_cast<size_t>(i)] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        g.weights[static_cast<size_t>(i)] = mu0 * v0 * v0;
    }
    // Enforce exact symmetry so odd monomials cancel to roundoff.  Keeps the
    // eigensolver's ascending node order.
    for (int i = 0, j = npts - 1; i < j; ++i, --j) {
        double x = 0.5 * (g.nodes[static_cast<size_t>(j)] - g.nodes[static_cast<size_t>(i)]);
        g.nodes[static_cast<size_t>(i)] = -x;
        g.nodes[static_cast<size_t>(j)] = x;
        double w = 0.5 * (g.weights[static_cast<size_t>(i)] + g.weights[static_cast<size_t>(j)]);
        g.weights[static_cast<size_t>(i)] = w;
        g.weights[static_cast<size_t>(j)] = w;
    }
    if (npts % 2 == 1) g.nodes[static_cast<size_t>(npts / 2)] = 0.0;
    return g;
}

Gauss1D gauss_legendre(int npts) { return gauss_jacobi_symmetric(npts, 0.0); }

Gauss1D gauss_jacobi_general(int npts, double alpha, double beta) {
    if (npts < 1) throw std::invalid_argument("gauss rule needs at least one node");
    if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("jacobi exponents must exceed -1");
    double mu0 = std::exp((alpha + beta + 1) * std::log(2.0) + std::lgamma(alpha + 1) +
                          std::lgamma(beta + 1) - std::lgamma(alpha + beta + 2));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npts, npts);
    J(0, 0) = (beta - alpha) / (alpha + beta + 2);
    for (int k = 1; k < npts; ++k) {
        double s = 2 * k + alpha + beta;
        J(k, k) = (beta * beta - alpha * alpha) / (s * (s + 2));
        double bk = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) /
                    (s * s * (s + 1) * (s - 1));
        double off = std::sqrt(bk);
        J(k - 1, k) = off;
        J(k, k - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss rule eigen-solve failed");
    Gauss1D g;
    g.nodes.resize(static_cast<size_t>(npts));
    g.weights.resize(static_cast<size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        g.nodes[static_cast<size_t>(i)] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        g.weights[static_cast<size_t>(i)] = mu0 * v0 * v0;
    }
    return g;
}

Gauss1D polar_split_rule(int per_half, double a) {
    if (per_half < 1) throw std::invalid_argument("polar split rule needs at least one node per side");
    // Right panel c in (0, 1): substitute c = (1+x)/2, so the (1-c)^a endpoint
    // factor becomes the Gauss weight and the smooth (1+c)^a remainder is
    // folded into the node weights.
    Gauss1D half = gauss_jacobi_general(per_half, a, 0.0);
    std::vector<double> c(half.nodes.size()), w(half.nodes.size());
    double scale = std::pow(0.5, a + 1.0);
    for (size_t i = 0; i < half.nodes.size(); ++i) {
        c[i] = 0.5 * (1.0 + half.nodes[i]);
        w[i] = half.weights[i] * std::pow(1.0 + c[i], a) * scale;
    }
    Gauss1D g;
    g.nodes.reserve(2 * c.size());
    g.weights.reserve(2 * c.size());
    for (size_t i = c.size(); i-- > 0;) {
        g.nodes.push_back(-c[i]);
        g.weights.push_back(w[i]);
    }
    for (size_t i = 0; i < c.size(); ++i) {
        g.nodes.push_back(c[i]);
        g.weights.push_back(w[i]);
    }
    return g;
}

double sphere_surface_measure(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

QuadratureRule QuadratureRule::coarsened() const {
    QuadratureRule c = *this;
    for (int& k : c.angular_counts) k = std::max(2, k / 2);
    c.radial.order = std::max(2, radial.order / 2);
    return c;
}

SphereRule build_sphere_rule(int n, const QuadratureRule& rule) {
    Vec::check_dim(n);
    if (n < 2) throw std::invalid_argument("sphere rules need n >= 2");
    auto counts = resolved_counts(n, rule);
    if (rule.kind == AngularKind::Qmc || (rule.kind == AngularKind::Auto && n >= 6)) {
        SphereRule r;
        r.n = n;
        r.nodes = qmc_unit_vectors(n, counts[0], rule.seed);
        r.weights.assign(r.nodes.size(), sphere_surface_measure(n) / counts[0]);
        return r;
    }
    return tensor_sphere_rule(n, counts);
}

SphereRule build_sphere_rule(const geometry::StarDomain& d, const QuadratureRule& rule) {
    SphereRule r = build_sphere_rule(d.n, rule);
    if (d.lambda.kind != geometry::LambdaKind::FinitePoints) return r;
    std::vector<Vec> lam;
    for (const Vec& p : d.lambda.points) lam.push_back(normalized(p));
    for (Vec& node : r.nodes) {
        for (const Vec& l : lam) {
            if (chordal_distance(node, l) < 1e-12) {
                // Deterministic nudge off the contact direction (documented bias
                // O(1e-9 * Lip)): push along the least-aligned coordinate axis.
                int j = 0;
                double best = std::abs(node[0]);
                for (int i = 1; i < node.n; ++i)
                    if (std::abs(node[i]) < best) {
                        best = std::abs(node[i]);
                        j = i;
                    }
                Vec t = basis_vector(node.n, j) - dot(basis_vector(node.n, j), node) * node;
                node = normalized(node + 1e-9 * normalized(t));
                break;
            }
        }
    }
    return r;
}

SphereRule cap_graded_sphere_rule(int n, const Vec& x0, const std::vector<double>& deltas,
                                  int order, int azimuth) {
    if (n != 2 && n != 3) throw std::invalid_argument("cap-graded rules are built for n in {2, 3}");
    if (x0.n != n) throw std::invalid_argument("pole dimension does not match n");
    if (std::abs(norm(x0) - 1.0) > 1e-12) throw std::invalid_argument("cap pole must be a unit vector");
    if (deltas.empty()) throw std::invalid_argument("cap-graded rule needs at least one chordal radius");

    std::vector<double> s = deltas;
    std::sort(s.begin(), s.end());
    if (s.front() <= 0 || s.back() >= 2.0)
        throw std::invalid_argument("chordal radii must lie in (0, 2)");
    // Refine below the smallest delta (nodes there are inside every ladder cap
    // but keep delta -> 0 queries honest) and grow geometrically above the
    // largest one up to the antipode.
    std::vector<double> brk{0.0};
    for (double t = s.front() / 64.0; t < s.front(); t *= 2.0) brk.push_back(t);
    brk.insert(brk.end(), s.begin(), s.end());
    for (double t = s.back() * 2.0; t < 2.0; t *= 2.0) brk.push_back(t);
    brk.push_back(2.0);
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    Gauss1D g = gauss_legendre(order);
    std::vector<Vec> frame = tangent_frame(x0);

    SphereRule r;
    r.n = n;
    for (size_t k = 0; k + 1 < brk.size(); ++k) {
        double th_a = 2.0 * std::asin(0.5 * brk[k]);
        double th_b = 2.0 * std::asin(0.5 * std::min(brk[k + 1], 2.0));
        // Two subpanels per chordal interval keep the per-panel Gauss error
        // far below the ladder-fit tolerance.
        for (int half = 0; half < 2; ++half) {
            double a = th_a + 0.5 * half * (th_b - th_a);
            double b = th_a + 0.5 * (half + 1) * (th_b - th_a);
            double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
            for (size_t i = 0; i < g.nodes.size(); ++i) {
                double th = mid + hw * g.nodes[i];
                double wth = hw * g.weights[i];
                if (n == 2) {
                    for (int side : {-1, +1}) {
                        r.nodes.push_back(std::cos(th) * x0 + (side * std::sin(th)) * frame[0]);
                        r.weights.push_back(wth);
                    }
                } else {
                    double ws = wth * std::sin(th) * (2.0 * kPi / azimuth);
                    for (int j = 0; j < azimuth; ++j) {
                        double phi = 2.0 * kPi * (j + 0.5) / azimuth;
                        Vec v = std::cos(th) * x0 + (std::sin(th) * std::cos(phi)) * frame[0] +
                                (std::sin(th) * std::sin(phi)) * frame[1];
                        r.nodes.push_back(v);
                        r.weights.push_back(ws);
                    }
                }
            }
        }
    }
    return r;
}

std::vector<std::pair<double, double>> graded_panels(double r, const RadialSpec& spec, double lo_clip) {
    if (!(r > 0)) throw std::invalid_argument("radial panels need a positive outer radius");
    std::vector<std::pair<double, double>> panels;
    for (int lev = spec.levels - 1; lev >= 0; --lev) {
        double lo = r * std::ldexp(1.0, -(lev + 1));
        double hi = r * std::ldexp(1.0, -lev);
        if (hi <= lo_clip) continue;
        double a = std::max(lo, lo_clip);
        for (int j = 0; j < spec.panels_per_level; ++j) {
            double pa = a + (hi - a) * j / spec.panels_per_level;
            double pb = a + (hi - a) * (j + 1) / spec.panels_per_level;
            panels.emplace_back(pa, pb);
        }
    }
    return panels;
}

namespace {

double panel_sum(const std::function<double(double)>& G, const std::function<double(double)>& W,
                 double p, double a, double b, const Gauss1D& g) {
    double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        double t = mid + hw * g.nodes[i];
        s += g.weights[i] * std::pow(std::abs(G(t)), p) * W(t);
    }
    return hw * s;
}

double bisect_root(const std::function<double(double)>& G, double a, double b, double ga) {
    for (int it = 0; it < 90 && (b - a) > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
        double m = 0.5 * (a + b);
        double gm = G(m);
        if ((ga < 0) == (gm < 0) && gm != 0.0)
            a = m, ga = gm;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

double radial_abs_pow(const std::function<double(double)>& G, const std::function<double(double)>& W,
                      double p, const std::vector<std::pair<double, double>>& panels,
                      const Gauss1D& gauss, bool split_at_sign_changes) {
    std::vector<double> acc;
    acc.reserve(panels.size());
    std::vector<double> ts, gs;
    for (auto [a, b] : panels) {
        if (!split_at_sign_changes) {
            acc.push_back(panel_sum(G, W, p, a, b, gauss));
            continue;
        }
        // Probe the panel (endpoints + Gauss abscissae) for sign changes of G.
        ts.clear();
        gs.clear();
        ts.push_back(a);
        double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
        for (double x : gauss.nodes) ts.push_back(mid + hw * x);
        ts.push_back(b);
        std::sort(ts.begin(), ts.end());
        for (double t : ts) gs.push_back(G(t));

        std::vector<double> cuts{a};
        int last_sign = 0;
        size_t last_idx = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            int sgn = gs[i] > 0 ? 1 : gs[i] < 0 ? -1 : 0;
            if (sgn == 0) continue;
            if (last_sign != 0 && sgn != last_sign && cuts.size() < 9)
                cuts.push_back(bisect_root(G, ts[last_idx], ts[i], gs[last_idx]));
            last_sign = sgn;
            last_idx = i;
        }
        cuts.push_back(b);
        double s = 0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) s += panel_sum(G, W, p, cuts[i], cuts[i + 1], gauss);
        acc.push_back(s);
    }
    return pairwise_sum(acc);
}

namespace {

double integrate_with_rule(const geometry::StarDomain& d, const std::function<double(const Vec&)>& g,
                           const QuadratureRule& rule, double eps_clip) {
    SphereRule sphere = build_sphere_rule(d, rule);
    Gauss1D gauss = gauss_legendre(rule.radial.order);
    std::vector<double> ray(sphere.nodes.size());
    for (size_t i = 0; i < sphere.nodes.size(); ++i) {
        const Vec& w = sphere.nodes[i];
        double r = d.profile(w);
        auto panels = graded_panels(r, rule.radial, eps_clip);
        std::vector<double> pv;
        pv.reserve(panels.size());
        for (auto [a, b] : panels) {
            double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
            double s = 0;
            for (size_t k = 0; k < gauss.nodes.size(); ++k) {
                double t = mid + hw * gauss.nodes[k];
                Vec x = t * w;
                double gv = g(x);
                if (!std::isfinite(gv))
                    throw std::runtime_error("non-finite integrand value at node x = " + format_point(x));
                s += gauss.weights[k] * gv * std::pow(t, d.n - 1);
            }
            pv.push_back(hw * s);
        }
        ray[i] = sphere.weights[i] * pairwise_sum(pv);
    }
    return pairwise_sum(ray);
}

}  // namespace

IntegralResult integrate(const geometry::StarDomain& d, const std::function<double(const Vec&)>& g,
                         const QuadratureRule& rule) {
    QuadratureRule fine = rule;
    fine.angular_counts = resolved_counts(d.n, rule);
    double v = integrate_with_rule(d, g, fine, 0.0);
    double vc = integrate_with_rule(d, g, fine.coarsened(), 0.0);
    return {v, std::abs(v - vc)};
}

IntegralResult integrate_annulus(const geometry::StarDomain& d,
                                 const std::function<double(const Vec&)>& g, double eps,
                                 const QuadratureRule& rule) {
    if (!(eps > 0)) throw std::invalid_argument("annulus cut must be positive");
    if (eps >= d.r_min)
        throw std::invalid_argument("annulus cut must stay below the domain's minimal boundary radius");
    QuadratureRule fine = rule;
    fine.angular_counts = resolved_counts(d.n, rule);
    double v = integrate_with_rule(d, g, fine, eps);
    double vc = integrate_with_rule(d, g, fine.coarsened(), eps);
    return {v, std::abs(v - vc)};
}

double integrate_sphere_cap_complement(const std::function<double(const Vec&)>& g, const Vec& x0,
                                       double delta, const SphereRule& angular) {
    if (x0.n != angular.n) throw std::invalid_argument("cap pole dimension does not match the rule");
    std::vector<double> acc;
    acc.reserve(angular.nodes.size());
    for (size_t i = 0; i < angular.nodes.size(); ++i) {
        if (chordal_distance(angular.nodes[i], x0) <= delta) continue;
        double gv = g(angular.nodes[i]);
        if (!std::isfinite(gv))
            throw std::runtime_error("non-finite integrand value at node omega = " +
                                     format_point(angular.nodes[i]));
        acc.push_back(angular.weights[i] * gv);
    }
    return pairwise_sum(acc);
}

}  // namespace starhardy::quadrature
