#include "starhardy/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "starhardy/config.hpp"
#include "starhardy/fields.hpp"
#include "starhardy/funcspace.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/hardy.hpp"
#include "starhardy/probes.hpp"
#include "starhardy/quadrature.hpp"

namespace starhardy::cli {
namespace {

using config::Config;
using config::ConfigError;
using ordered_json = nlohmann::ordered_json;

// Shortest decimal form that round-trips exactly.
std::string fmt(double v) {
    char buf[40];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string iso_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Reading a key writes the resolved value back, so the config echoed into
// every report is the complete manifest, defaults included.
int resolve_int(Config& cfg, const std::string& key, int dflt) {
    int v = cfg.get_int(key, dflt);
    cfg.set(key, std::to_string(v));
    return v;
}

double resolve_double(Config& cfg, const std::string& key, double dflt) {
    double v = cfg.get_double(key, dflt);
    cfg.set(key, fmt(v));
    return v;
}

std::string resolve_str(Config& cfg, const std::string& key, const std::string& dflt) {
    std::string v = cfg.get(key, dflt);
    cfg.set(key, v);
    return v;
}

std::vector<double> resolve_list(Config& cfg, const std::string& key,
                                 const std::vector<double>& dflt) {
    std::vector<double> v = cfg.get_list(key, dflt);
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    cfg.set(key, s);
    return v;
}

geometry::StarDomain domain_from(Config& cfg, int n_hint, std::uint64_t seed) {
    std::string kind = resolve_str(cfg, "domain.kind", "ball");
    if (kind == "ball") {
        int n = resolve_int(cfg, "domain.n", n_hint);
        double R = resolve_double(cfg, "domain.radius", 1.0);
        return geometry::make_ball(n, R);
    }
    if (kind == "ellipsoid") {
        std::vector<double> axes = resolve_list(cfg, "domain.axes", {});
        if (axes.empty()) throw ConfigError("domain.kind = ellipsoid needs domain.axes");
        return geometry::make_ellipsoid(axes);
    }
    if (kind == "star") {
        int n = resolve_int(cfg, "domain.n", n_hint);
        std::string profile = resolve_str(cfg, "domain.profile", "linear");
        double c0 = resolve_double(cfg, "domain.profile_base", 1.0);
        if (profile == "linear") {
            std::vector<double> c =
                resolve_list(cfg, "domain.profile_coeffs", std::vector<double>(static_cast<size_t>(n), 0.0));
            if (static_cast<int>(c.size()) != n)
                throw ConfigError("domain.profile_coeffs needs one entry per dimension");
            double spread = 0;
            for (double ci : c) spread += std::abs(ci);
            double hint = resolve_double(cfg, "domain.r_min_hint", std::max(0.05, c0 - spread));
            return geometry::make_star(n, geometry::linear_profile(n, c0, c), hint, seed);
        }
        if (profile == "harmonic3") {
            if (n != 3) throw ConfigError("domain.profile = harmonic3 needs n = 3");
            std::vector<double> flat = cfg.get_list("domain.profile_lmc");
            if (flat.size() % 3 != 0)
                throw ConfigError("domain.profile_lmc expects (l, m, c) triples");
            std::vector<std::tuple<int, int, double>> lmc;
            for (size_t i = 0; i + 2 < flat.size(); i += 3) {
                int l = static_cast<int>(flat[i]), m = static_cast<int>(flat[i + 1]);
                if (l != flat[i] || m != flat[i + 1])
                    throw ConfigError("domain.profile_lmc degrees and orders must be integers");
                lmc.emplace_back(l, m, flat[i + 2]);
            }
            double hint = resolve_double(cfg, "domain.r_min_hint", 0.5 * c0);
            return geometry::make_star(3, geometry::harmonic_profile3(c0, lmc), hint, seed);
        }
        throw ConfigError("unknown domain.profile '" + profile + "' (linear | harmonic3)");
    }
    throw ConfigError("unknown domain.kind '" + kind + "' (ball | ellipsoid | star)");
}

fields::RadialField field_from(Config& cfg, const geometry::StarDomain& d) {
    std::string kind = resolve_str(cfg, "field.kind", "canonical");
    if (kind == "canonical") return fields::canonical_field(d);
    if (kind == "ellipsoid") {
        if (d.kind != geometry::DomainKind::Ellipsoid)
            throw ConfigError("field.kind = ellipsoid needs an ellipsoid domain");
        return fields::ellipsoid_field(d.axes);
    }
    throw ConfigError("unknown field.kind '" + kind + "' (canonical | ellipsoid)");
}

std::vector<int> default_counts(int n) {
    if (n == 2) return {256};
    std::vector<int> c{40};
    for (int k = 0; k < n - 3; ++k) c.push_back(4);
    c.push_back(8);
    return c;
}

quadrature::QuadratureRule rule_from(Config& cfg, int n, std::uint64_t seed) {
    std::vector<double> dflt;
    for (int c : default_counts(n)) dflt.push_back(c);
    std::vector<double> counts = resolve_list(cfg, "rule.angular_count", dflt);
    quadrature::QuadratureRule rule;
    for (double c : counts) {
        int ci = static_cast<int>(c);
        if (static_cast<double>(ci) != c || ci < 2)
            throw ConfigError("rule.angular_count entries must be integers >= 2");
        rule.angular_counts.push_back(ci);
    }
    rule.radial.levels = resolve_int(cfg, "rule.radial_levels", 40);
    if (rule.radial.levels < 4 || rule.radial.levels > 64)
        throw ConfigError("rule.radial_levels must lie in 4..64");
    rule.radial.order = resolve_int(cfg, "rule.panel_order", 10);
    if (rule.radial.order < 2 || rule.radial.order > 32)
        throw ConfigError("rule.panel_order must lie in 2..32");
    rule.seed = seed;
    return rule;
}

// Maximizer families are parameterized by the ellipsoid norm; a ball of
// radius R is the all-equal case 1/R.
std::vector<double> domain_axes(const geometry::StarDomain& d, const char* who) {
    if (d.kind == geometry::DomainKind::Ball)
        return std::vector<double>(static_cast<size_t>(d.n), 1.0 / d.radius);
    if (d.kind == geometry::DomainKind::Ellipsoid) return d.axes;
    throw ConfigError(std::string(who) + " needs a ball or ellipsoid domain");
}

funcspace::ScalarField polynomial_from(const std::string& terms, int n) {
    std::vector<std::pair<double, std::vector<int>>> poly;
    std::istringstream ts(terms);
    std::string term;
    while (std::getline(ts, term, ';')) {
        std::istringstream ws(term);
        std::vector<double> nums;
        double v;
        while (ws >> v) nums.push_back(v);
        if (nums.empty()) continue;
        if (static_cast<int>(nums.size()) != n + 1)
            throw ConfigError(
                "function.terms: each ';'-separated term is a coefficient followed by n exponents");
        std::vector<int> e(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            e[static_cast<size_t>(i)] = static_cast<int>(nums[static_cast<size_t>(i) + 1]);
            if (e[static_cast<size_t>(i)] < 0 || e[static_cast<size_t>(i)] != nums[static_cast<size_t>(i) + 1])
                throw ConfigError("function.terms: exponents must be integers >= 0");
        }
        poly.emplace_back(nums[0], e);
    }
    if (poly.empty()) throw ConfigError("function.terms: no terms given");

    auto value = [poly, n](const Vec& x) {
        double s = 0;
        for (const auto& [c, e] : poly) {
            double t = c;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) t *= x[i];
            s += t;
        }
        return s;
    };
    funcspace::ScalarField u;
    u.n = n;
    u.tag = "polynomial";
    u.interior = value;
    u.boundary = value;
    u.gradient_fn = [poly, n](const Vec& x) {
        Vec g(n);
        for (const auto& [c, e] : poly)
            for (int j = 0; j < n; ++j) {
                int ej = e[static_cast<size_t>(j)];
                if (ej == 0) continue;
                double t = c * ej;
                for (int i = 0; i < n; ++i) {
                    int m = e[static_cast<size_t>(i)] - (i == j ? 1 : 0);
                    for (int k = 0; k < m; ++k) t *= x[i];
                }
                g[j] += t;
            }
        return g;
    };
    return u;
}

funcspace::ScalarField function_from(Config& cfg, const geometry::StarDomain& d, int n, double p) {
    std::string kind = resolve_str(cfg, "function.kind", "radial_power");
    if (kind == "constant") {
        double v = resolve_double(cfg, "function.value", 1.0);
        funcspace::ScalarField u;
        u.n = n;
        u.tag = "constant(" + fmt(v) + ")";
        u.interior = [v](const Vec&) { return v; };
        u.boundary = u.interior;
        u.gradient_fn = [n](const Vec&) { return Vec(n); };
        u.radial_fn = [](const Vec&) { return 0.0; };
        return u;
    }
    if (kind == "radial_power") {
        double b = resolve_double(cfg, "function.exponent", 1.0);
        if (!(b > 0)) throw ConfigError("function.exponent must be positive");
        funcspace::ScalarField u;
        u.n = n;
        u.tag = "radial-power(" + fmt(b) + ")";
        u.interior = [b](const Vec& x) { return std::pow(norm(x), b); };
        u.boundary = u.interior;
        u.gradient_fn = [b](const Vec& x) {
            double r = norm(x);
            return (b * std::pow(r, b - 2)) * x;
        };
        u.radial_fn = [b](const Vec& x) { return b * std::pow(norm(x), b - 1); };
        return u;
    }
    if (kind == "coordinate") {
        int idx = resolve_int(cfg, "function.index", 1);
        if (idx < 1 || idx > n) throw ConfigError("function.index must lie in 1..n");
        int j = idx - 1;
        funcspace::ScalarField u;
        u.n = n;
        u.tag = "coordinate(" + std::to_string(idx) + ")";
        u.interior = [j](const Vec& x) { return x[j]; };
        u.boundary = u.interior;
        u.gradient_fn = [n, j](const Vec&) { return basis_vector(n, j); };
        u.radial_fn = [j](const Vec& x) { return x[j] / norm(x); };
        return u;
    }
    if (kind == "prop1") {
        double alpha = resolve_double(cfg, "function.alpha", 1.25);
        std::vector<double> e1(static_cast<size_t>(n), 0.0);
        e1[0] = 1.0;
        std::vector<double> x0 = resolve_list(cfg, "function.x0", e1);
        if (static_cast<int>(x0.size()) != n) throw ConfigError("function.x0 needs n entries");
        return funcspace::prop1_function(n, alpha, Vec::from(x0));
    }
    if (kind == "xi") return funcspace::maximizer_xi(domain_axes(d, "function.kind = xi"), n, p);
    if (kind == "eta") {
        double alpha = resolve_double(cfg, "function.alpha", std::max(2.0, 0.5 * n));
        return funcspace::maximizer_eta(domain_axes(d, "function.kind = eta"), n, alpha);
    }
    if (kind == "beta_family") {
        double beta = cfg.get_double("function.beta");
        std::vector<double> axes = d.kind == geometry::DomainKind::Ellipsoid
                                       ? d.axes
                                       : std::vector<double>(static_cast<size_t>(n), 1.0);
        return funcspace::beta_family(d, funcspace::psi_ellipsoid(axes), beta, n, p);
    }
    if (kind == "custom-polynomial") return polynomial_from(cfg.get("function.terms"), n);
    throw ConfigError("unknown function.kind '" + kind +
                      "' (constant | radial_power | coordinate | prop1 | xi | eta | beta_family | "
                      "custom-polynomial)");
}

hardy::Mode mode_from(Config& cfg) {
    std::string m = resolve_str(cfg, "verify.mode", "subcritical");
    if (m == "subcritical") return hardy::Mode::Subcritical;
    if (m == "critical") return hardy::Mode::Critical;
    if (m == "classical-subcritical") return hardy::Mode::ClassicalSubcritical;
    if (m == "classical-critical") return hardy::Mode::ClassicalCritical;
    throw ConfigError("unknown verify.mode '" + m +
                      "' (subcritical | critical | classical-subcritical | classical-critical)");
}

const char* mode_name(hardy::Mode m) {
    switch (m) {
        case hardy::Mode::Subcritical: return "subcritical";
        case hardy::Mode::Critical: return "critical";
        case hardy::Mode::ClassicalSubcritical: return "classical-subcritical";
        case hardy::Mode::ClassicalCritical: return "classical-critical";
    }
    return "?";
}

bool is_critical(hardy::Mode m) {
    return m == hardy::Mode::Critical || m == hardy::Mode::ClassicalCritical;
}

ordered_json inequality_json(const hardy::InequalityReport& r) {
    ordered_json j;
    j["mode"] = mode_name(r.mode);
    j["n"] = r.n;
    j["p"] = r.p;
    j["lhs"] = r.lhs;
    j["lhs_error"] = r.lhs_error;
    j["rhs_integral"] = r.rhs_integral;
    j["rhs_error"] = r.rhs_error;
    j["constant"] = r.constant;
    j["rhs"] = r.rhs;
    j["q"] = r.q;
    j["q_error"] = r.q_error;
    j["defect"] = r.defect;
    return j;
}

ordered_json base_report(const std::string& command, const Config& cfg, std::uint64_t seed) {
    ordered_json j;
    j["command"] = command;
    j["timestamp"] = iso_timestamp();
    j["seed"] = seed;
    ordered_json echo = ordered_json::object();
    for (const auto& [k, v] : cfg.entries()) echo[k] = v;
    j["config"] = echo;
    return j;
}

void write_json(const std::filesystem::path& p, const ordered_json& j) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << j.dump(2) << "\n";
}

void write_csv(const std::filesystem::path& p, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
        out << "\n";
    }
}

std::uint64_t seed_from(Config& cfg) {
    int s = resolve_int(cfg, "rule.seed", 20260817);
    if (s < 0) throw ConfigError("rule.seed must be >= 0");
    return static_cast<std::uint64_t>(s);
}

// --- subcommands ---

int cmd_verify(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    hardy::Mode mode = mode_from(cfg);
    bool crit = is_critical(mode);
    int n = resolve_int(cfg, "exponents.n", 3);
    double p = crit ? static_cast<double>(n) : resolve_double(cfg, "exponents.p", 2.0);
    if (crit) cfg.set("exponents.p", fmt(p));
    double tol = resolve_double(cfg, "verify.tolerance", crit ? 1e-4 : 1e-6);
    geometry::StarDomain d = domain_from(cfg, n, seed);
    if (d.n != n)
        throw ConfigError("dimension mismatch: exponents.n = " + std::to_string(n) +
                          " but the domain has n = " + std::to_string(d.n));
    quadrature::QuadratureRule rule = rule_from(cfg, n, seed);
    fields::RadialField f = field_from(cfg, d);
    std::vector<double> p_list = resolve_list(cfg, "verify.p_list", {p});

    hardy::InequalityReport head;
    std::string head_tag;
    std::vector<std::vector<double>> rows;
    ordered_json sweep = ordered_json::array();
    bool ok = true;
    for (size_t i = 0; i < p_list.size(); ++i) {
        double pi = p_list[i];
        funcspace::ScalarField u = function_from(cfg, d, n, pi);
        funcspace::Exponents e = funcspace::make_exponents(n, pi);
        hardy::InequalityReport rep = hardy::verify(u, f, d, e, mode, rule);
        if (i == 0) {
            head = rep;
            head_tag = u.tag;
        }
        rows.push_back({static_cast<double>(n), pi, rep.q, rep.q_error});
        sweep.push_back(inequality_json(rep));
        ok = ok && rep.q <= 1.0 + tol;
    }

    ordered_json j = base_report("verify", cfg, seed);
    j["domain"] = d.note;
    j["function"] = head_tag;
    j["report"] = inequality_json(head);
    if (p_list.size() > 1) j["sweep"] = sweep;
    j["tolerance"] = tol;
    j["pass"] = ok;
    write_json(out / "verify.json", j);
    write_csv(out / "verify.csv", "n,p,Q,Q_err", rows);
    std::cout << "verify: " << head_tag << " on " << d.note << ": Q = " << head.q
              << " (+/- " << head.q_error << ") " << (ok ? "[ok]" : "[FAIL]") << "\n";
    return ok ? 0 : 2;
}

int cmd_field_check(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    int n = resolve_int(cfg, "exponents.n", 3);
    geometry::StarDomain d = domain_from(cfg, n, seed);
    fields::RadialField f = field_from(cfg, d);
    int samples = resolve_int(cfg, "field.samples", 1000);
    fields::FieldReport rep = fields::check_field(f, samples, seed);

    ordered_json j = base_report("field-check", cfg, seed);
    j["domain"] = d.note;
    ordered_json r;
    r["max_ray_deviation"] = rep.max_ray_deviation;
    r["max_boundary_deviation"] = rep.max_boundary_deviation;
    r["max_idempotence_deviation"] = rep.max_idempotence_deviation;
    r["max_norm_excess"] = rep.max_norm_excess;
    r["samples"] = rep.samples;
    r["pass"] = rep.pass;
    j["report"] = r;
    j["pass"] = rep.pass;
    write_json(out / "field-check.json", j);
    std::cout << "field-check: " << d.note << ": worst deviation "
              << std::max({rep.max_ray_deviation, rep.max_boundary_deviation,
                           rep.max_idempotence_deviation})
              << " over " << rep.samples << " samples " << (rep.pass ? "[ok]" : "[FAIL]") << "\n";
    return rep.pass ? 0 : 2;
}

int cmd_maximizer(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    std::string kind = resolve_str(cfg, "maximizer.kind", "xi");
    int n = resolve_int(cfg, "exponents.n", 3);
    geometry::StarDomain d = domain_from(cfg, n, seed);
    quadrature::QuadratureRule rule = rule_from(cfg, n, seed);

    probes::MaximizerReport rep;
    double tol = 0;
    if (kind == "xi") {
        double p = resolve_double(cfg, "exponents.p", 2.0);
        tol = resolve_double(cfg, "maximizer.tolerance", 1e-6);
        rep = probes::maximizer_check_xi(domain_axes(d, "maximizer xi"), n, p, rule);
    } else if (kind == "eta") {
        double alpha = resolve_double(cfg, "function.alpha", std::max(2.0, 0.5 * n));
        tol = resolve_double(cfg, "maximizer.tolerance", 1e-4);
        rep = probes::maximizer_check_eta(domain_axes(d, "maximizer eta"), n, alpha, rule);
    } else {
        throw ConfigError("unknown maximizer.kind '" + kind + "' (xi | eta)");
    }
    bool ok = std::abs(rep.inequality.q - 1.0) <= tol;

    ordered_json j = base_report("maximizer", cfg, seed);
    j["kind"] = rep.kind;
    j["domain"] = d.note;
    j["report"] = inequality_json(rep.inequality);
    j["i_volume"] = rep.i_volume;
    j["i_sphere"] = rep.i_sphere;
    j["rel_gap"] = rep.rel_gap;
    j["tolerance"] = tol;
    j["pass"] = ok;
    write_json(out / "maximizer.json", j);
    std::cout << "maximizer " << rep.kind << ": Q - 1 = " << rep.inequality.q - 1.0
              << " (tolerance " << tol << ") " << (ok ? "[ok]" : "[FAIL]") << "\n";
    return ok ? 0 : 2;
}

int cmd_sharpness(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    int n = resolve_int(cfg, "exponents.n", 3);
    double p = resolve_double(cfg, "exponents.p", 2.0);
    double kappa = (n - p) / p;
    double bmin = resolve_double(cfg, "sharpness.beta_min", kappa);
    double bmax = resolve_double(cfg, "sharpness.beta_max", 3 * kappa);
    int points = resolve_int(cfg, "sharpness.points", 9);
    if (points < 2 || !(bmax > bmin)) throw ConfigError("sharpness grid needs beta_max > beta_min and points >= 2");
    double tol = resolve_double(cfg, "sharpness.tolerance", 1e-4);
    geometry::StarDomain d = domain_from(cfg, n, seed);
    quadrature::QuadratureRule rule = rule_from(cfg, n, seed);
    fields::RadialField f = field_from(cfg, d);
    std::vector<double> axes = d.kind == geometry::DomainKind::Ellipsoid
                                   ? d.axes
                                   : std::vector<double>(static_cast<size_t>(n), 1.0);
    funcspace::ScalarField psi = funcspace::psi_ellipsoid(axes);

    std::vector<double> grid;
    for (int k = 0; k < points; ++k)
        grid.push_back(bmin + (bmax - bmin) * k / (points - 1));
    probes::SharpnessScan scan = probes::sharpness_scan(d, f, psi, p, n, grid, rule);
    bool ok = scan.max_closed_form_residual <= tol;

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < grid.size(); ++i)
        rows.push_back({scan.beta_grid[i], scan.q_values[i], scan.q_closed_form[i]});
    ordered_json j = base_report("sharpness", cfg, seed);
    j["domain"] = d.note;
    j["kappa"] = kappa;
    j["beta_grid"] = scan.beta_grid;
    j["q_values"] = scan.q_values;
    j["q_closed_form"] = scan.q_closed_form;
    j["argmax_beta"] = scan.argmax_beta;
    j["q_at_argmax"] = scan.q_at_argmax;
    j["max_closed_form_residual"] = scan.max_closed_form_residual;
    j["tolerance"] = tol;
    j["pass"] = ok;
    write_json(out / "sharpness.json", j);
    write_csv(out / "sharpness.csv", "beta,Q,Q_closed_form", rows);
    std::cout << "sharpness: residual " << scan.max_closed_form_residual << ", argmax beta = "
              << scan.argmax_beta << " " << (ok ? "[ok]" : "[FAIL]") << "\n";
    return ok ? 0 : 2;
}

// Classifies one divergence ladder against its analytic exponent. Exponent 0
// must be flagged logarithmic; steep exponents must be matched within the
// relative tolerance; clearly positive exponents mean a convergent integral.
bool judge_ladder(const probes::DivergenceFit& fit, double expected, double rtol,
                  std::string* verdict) {
    if (std::abs(expected) <= 1e-12) {
        *verdict = fit.log_flag ? "log-divergent" : "expected log divergence not detected";
        return fit.log_flag;
    }
    if (expected <= -0.25) {
        double rel = std::abs(fit.fitted_exponent - expected) / std::abs(expected);
        bool ok = rel <= rtol;
        *verdict = ok ? "power divergence matched" : "fitted exponent off by more than tolerance";
        return ok;
    }
    if (expected >= 0.25) {
        bool ok = !fit.log_flag && fit.fitted_exponent > -0.1;
        *verdict = ok ? "convergent" : "unexpected divergence";
        return ok;
    }
    *verdict = "shallow exponent, not asserted";
    return true;
}

ordered_json ladder_json(const probes::DivergenceFit& fit, double expected,
                         const std::string& verdict) {
    ordered_json j;
    j["expected_exponent"] = expected;
    j["fitted_exponent"] = fit.fitted_exponent;
    j["r_squared"] = fit.r_squared;
    j["log_flag"] = fit.log_flag;
    j["verdict"] = verdict;
    return j;
}

int cmd_counterexample(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    int n = resolve_int(cfg, "exponents.n", 3);
    double p = resolve_double(cfg, "exponents.p", 2.0);
    double alpha = resolve_double(cfg, "counterexample.alpha", 1.25);
    std::vector<double> e1(static_cast<size_t>(n), 0.0);
    e1[0] = 1.0;
    std::vector<double> x0v = resolve_list(cfg, "counterexample.x0", e1);
    if (static_cast<int>(x0v.size()) != n) throw ConfigError("counterexample.x0 needs n entries");
    std::vector<double> ladder = resolve_list(cfg, "counterexample.ladder", probes::default_ladder());
    int order = resolve_int(cfg, "counterexample.order", 12);
    int azimuth = resolve_int(cfg, "counterexample.azimuth", 48);
    double rtol = resolve_double(cfg, "counterexample.tolerance", 0.05);

    probes::Prop1Report rep = probes::prop1_probe(n, p, alpha, Vec::from(x0v), ladder, order, azimuth);
    std::string sv, gv;
    bool ok_s = judge_ladder(rep.sphere, rep.expected_sphere_exponent, rtol, &sv);
    bool ok_g = judge_ladder(rep.gradient, rep.expected_gradient_exponent, rtol, &gv);
    bool ok = ok_s && ok_g;

    ordered_json j = base_report("counterexample", cfg, seed);
    j["n"] = rep.n;
    j["p"] = rep.p;
    j["alpha"] = rep.alpha;
    ordered_json mem;
    mem["u_in_lp"] = rep.membership.u_in_lp;
    mem["pullback_in_lp"] = rep.membership.pullback_in_lp;
    mem["u_in_w1p"] = rep.membership.u_in_w1p;
    mem["pullback_in_w1p"] = rep.membership.pullback_in_w1p;
    j["membership"] = mem;
    j["sphere"] = ladder_json(rep.sphere, rep.expected_sphere_exponent, sv);
    j["gradient"] = ladder_json(rep.gradient, rep.expected_gradient_exponent, gv);
    j["tolerance"] = rtol;
    j["pass"] = ok;
    write_json(out / "counterexample.json", j);

    std::vector<std::vector<double>> srows, grows;
    for (size_t i = 0; i < rep.sphere.deltas.size(); ++i)
        srows.push_back({rep.sphere.deltas[i], rep.sphere.values[i]});
    for (size_t i = 0; i < rep.gradient.deltas.size(); ++i)
        grows.push_back({rep.gradient.deltas[i], rep.gradient.values[i]});
    write_csv(out / "counterexample_sphere.csv", "delta,value", srows);
    write_csv(out / "counterexample_gradient.csv", "delta,value", grows);
    std::cout << "counterexample: sphere " << sv << " (" << rep.sphere.fitted_exponent
              << "), gradient " << gv << " (" << rep.gradient.fitted_exponent << ") "
              << (ok ? "[ok]" : "[FAIL]") << "\n";
    return ok ? 0 : 2;
}

// --- the deterministic battery ---

quadrature::QuadratureRule suite_rule(int n, int levels, int order, std::uint64_t seed) {
    quadrature::QuadratureRule r;
    r.angular_counts = default_counts(n);
    r.radial.levels = levels;
    r.radial.order = order;
    r.seed = seed;
    return r;
}

int cmd_suite(Config cfg, const std::filesystem::path& out) {
    std::uint64_t seed = seed_from(cfg);
    int levels = resolve_int(cfg, "rule.radial_levels", 40);
    int order = resolve_int(cfg, "rule.panel_order", 10);
    ordered_json checks = ordered_json::array();
    bool all_ok = true;

    auto push = [&](const std::string& name, bool ok, const ordered_json& detail) {
        ordered_json entry;
        entry["name"] = name;
        for (auto it = detail.begin(); it != detail.end(); ++it) entry[it.key()] = it.value();
        entry["pass"] = ok;
        checks.push_back(entry);
        all_ok = all_ok && ok;
        std::cout << "  " << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    };
    auto scalar_check = [&](const std::string& name, double value, double target, double tol) {
        ordered_json d;
        d["value"] = value;
        d["target"] = target;
        d["tolerance"] = tol;
        push(name, std::abs(value - target) <= tol, d);
    };

    const double pi = 3.14159265358979323846;
    quadrature::QuadratureRule r2 = suite_rule(2, levels, order, seed);
    quadrature::QuadratureRule r3 = suite_rule(3, levels, order, seed);

    geometry::StarDomain ball2 = geometry::make_ball(2, 1.0);
    geometry::StarDomain ball3 = geometry::make_ball(3, 1.0);
    geometry::StarDomain ell = geometry::make_ellipsoid({1, 2, 2});
    geometry::StarDomain star =
        geometry::make_star(3, geometry::linear_profile(3, 1.0, {0.3, 0, 0}), 0.6, seed);
    auto one = [](const Vec&) { return 1.0; };

    scalar_check("ball-volume-2d", quadrature::integrate(ball2, one, r2).value, pi, 1e-10);
    scalar_check("ball-volume-3d", quadrature::integrate(ball3, one, r3).value, 4 * pi / 3, 1e-10);
    scalar_check("inverse-square-3d",
                 quadrature::integrate(ball3, [](const Vec& x) { return 1.0 / dot(x, x); }, r3).value,
                 4 * pi, 1e-8);
    scalar_check("ellipsoid-volume", quadrature::integrate(ell, one, r3).value, pi / 3, 1e-8);
    scalar_check("odd-symmetry",
                 quadrature::integrate(ball3, [](const Vec& x) { return x[0] * norm(x); }, r3).value,
                 0.0, 1e-10);

    for (const auto* dptr : {&ball3, &ell, &star}) {
        fields::FieldReport fr = fields::check_field(fields::canonical_field(*dptr), 1000, seed);
        ordered_json d;
        d["domain"] = dptr->note;
        d["max_ray_deviation"] = fr.max_ray_deviation;
        d["max_boundary_deviation"] = fr.max_boundary_deviation;
        d["max_idempotence_deviation"] = fr.max_idempotence_deviation;
        push("field-" + std::string(dptr->kind == geometry::DomainKind::Ball
                                        ? "ball"
                                        : (dptr->kind == geometry::DomainKind::Ellipsoid ? "ellipsoid"
                                                                                         : "star")),
             fr.pass, d);
    }

    funcspace::ScalarField radial;
    radial.n = 3;
    radial.tag = "radial-power(1)";
    radial.interior = [](const Vec& x) { return norm(x); };
    radial.boundary = radial.interior;
    radial.gradient_fn = [](const Vec& x) { return (1.0 / norm(x)) * x; };
    radial.radial_fn = [](const Vec&) { return 1.0; };

    {
        fields::RadialField f3 = fields::canonical_field(ball3);
        hardy::InequalityReport rep = hardy::verify(radial, f3, ball3,
                                                    funcspace::make_exponents(3, 2),
                                                    hardy::Mode::Subcritical, r3);
        ordered_json d;
        d["q"] = rep.q;
        d["q_error"] = rep.q_error;
        push("verify-subcritical-radial", std::abs(rep.q - 0.25) <= 1e-6, d);

        hardy::InequalityReport repc = hardy::verify(radial, f3, ball3,
                                                     funcspace::make_exponents(3, 3),
                                                     hardy::Mode::Critical, r3);
        ordered_json dc;
        dc["q"] = repc.q;
        dc["target"] = 4 * std::log(3.0) - 16.0 / 3.0 * std::log(2.0);
        push("verify-critical-3d",
             std::abs(repc.q - (4 * std::log(3.0) - 16.0 / 3.0 * std::log(2.0))) <= 1e-8, dc);
    }
    {
        funcspace::ScalarField radial2 = radial;
        radial2.n = 2;
        geometry::StarDomain b2 = ball2;
        fields::RadialField f2 = fields::canonical_field(b2);
        hardy::InequalityReport rep = hardy::verify(radial2, f2, b2,
                                                    funcspace::make_exponents(2, 2),
                                                    hardy::Mode::Critical, r2);
        ordered_json d;
        d["q"] = rep.q;
        d["target"] = std::log(2.0);
        d["constant"] = rep.constant;
        push("verify-critical-2d",
             std::abs(rep.q - std::log(2.0)) <= 1e-8 && rep.constant == 4.0, d);
    }

    {
        probes::MaximizerReport mb = probes::maximizer_check_xi({1, 1, 1}, 3, 2, r3);
        ordered_json d;
        d["q"] = mb.inequality.q;
        d["lhs"] = mb.inequality.lhs;
        d["target_lhs"] = 2 * pi / 3;
        push("maximizer-xi-ball",
             std::abs(mb.inequality.q - 1.0) <= 1e-6 &&
                 std::abs(mb.inequality.lhs - 2 * pi / 3) <= 1e-6,
             d);
        probes::MaximizerReport me = probes::maximizer_check_xi({1, 2, 2}, 3, 2, r3);
        ordered_json de;
        de["q"] = me.inequality.q;
        de["rel_gap"] = me.rel_gap;
        push("maximizer-xi-ellipsoid", std::abs(me.inequality.q - 1.0) <= 1e-6, de);
        probes::MaximizerReport mh = probes::maximizer_check_eta({0.5, 1, 1}, 3, 2.0, r3);
        ordered_json dh;
        dh["q"] = mh.inequality.q;
        dh["rel_gap"] = mh.rel_gap;
        push("maximizer-eta", std::abs(mh.inequality.q - 1.0) <= 1e-4, dh);

        bool rejected = false;
        std::string msg;
        try {
            funcspace::maximizer_eta({1, 1, 1}, 3, 2.0);
        } catch (const std::invalid_argument& e) {
            rejected = true;
            msg = e.what();
        }
        ordered_json dr;
        dr["message"] = msg;
        push("eta-ball-rejected", rejected, dr);
    }

    {
        fields::RadialField fe = fields::ellipsoid_field({1, 2, 2});
        funcspace::ScalarField psi = funcspace::psi_ellipsoid({1, 2, 2});
        std::vector<double> grid;
        for (int k = 0; k < 5; ++k) grid.push_back(0.5 + 1.0 * k / 4.0);
        probes::SharpnessScan scan = probes::sharpness_scan(ell, fe, psi, 2, 3, grid, r3);
        ordered_json d;
        d["max_closed_form_residual"] = scan.max_closed_form_residual;
        d["argmax_beta"] = scan.argmax_beta;
        d["q_at_argmax"] = scan.q_at_argmax;
        push("sharpness",
             scan.max_closed_form_residual <= 1e-4 && std::abs(scan.argmax_beta - 0.5) <= 1e-12 &&
                 std::abs(scan.q_at_argmax - 1.0) <= 1e-6,
             d);
    }

    {
        probes::Prop1Report rep =
            probes::prop1_probe(3, 2, 1.25, Vec{1, 0, 0}, probes::default_ladder());
        bool mem_ok = rep.membership.u_in_lp && !rep.membership.pullback_in_lp &&
                      !rep.membership.u_in_w1p && !rep.membership.pullback_in_w1p;
        double es = rep.expected_sphere_exponent, eg = rep.expected_gradient_exponent;
        bool fit_ok = std::abs(rep.sphere.fitted_exponent - es) <= 0.05 * std::abs(es) &&
                      std::abs(rep.gradient.fitted_exponent - eg) <= 0.05 * std::abs(eg);
        ordered_json d;
        d["sphere_fitted"] = rep.sphere.fitted_exponent;
        d["gradient_fitted"] = rep.gradient.fitted_exponent;
        push("counterexample", mem_ok && fit_ok, d);

        probes::Prop1Report rl =
            probes::prop1_probe(3, 2, 1.0, Vec{1, 0, 0}, probes::default_ladder());
        ordered_json dl;
        dl["sphere_fitted"] = rl.sphere.fitted_exponent;
        dl["log_flag"] = rl.sphere.log_flag;
        push("counterexample-log-boundary", rl.sphere.log_flag, dl);
    }

    {
        double worst = 0;
        for (const auto& g : funcspace::c1_catalog(3)) {
            if (g.tag != "norm" && g.tag != "coordinate" && g.tag != "gaussian") continue;
            hardy::Lemma2Report lr = hardy::lemma2_check(g, 200, seed);
            worst = std::max(worst, lr.max_violation);
        }
        ordered_json d;
        d["max_violation"] = worst;
        push("radial-derivative-contraction", worst <= 1e-10, d);
    }

    ordered_json j = base_report("suite", cfg, seed);
    j["checks"] = checks;
    j["pass"] = all_ok;
    write_json(out / "suite.json", j);
    std::cout << "suite: " << checks.size() << " checks " << (all_ok ? "[ok]" : "[FAIL]") << "\n";
    return all_ok ? 0 : 2;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Hardy-type inequalities without boundary terms: a numerical laboratory"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    long long seed = -1;
    auto add = [&](const char* name, const char* desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--config", config_path, "experiment config file (key = value lines)");
        s->add_option("--out", out_dir, "output directory for JSON/CSV reports");
        s->add_option("--seed", seed, "override rule.seed");
        return s;
    };
    CLI::App* sv = add("verify", "check one inequality and report the quotient Q = lhs/rhs");
    CLI::App* sf = add("field-check", "validate the radially invariant boundary-value field");
    CLI::App* sm = add("maximizer", "evaluate an explicit maximizer family (xi or eta)");
    CLI::App* ss = add("sharpness", "scan the beta family against its closed-form quotient");
    CLI::App* sc = add("counterexample", "divergence ladders for the singular pullback probe");
    CLI::App* su = add("suite", "deterministic battery across all checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Config cfg = config_path.empty() ? Config() : Config::parse_file(config_path);
        if (seed >= 0) cfg.set("rule.seed", std::to_string(seed));
        std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);
        if (sv->parsed()) return cmd_verify(std::move(cfg), out);
        if (sf->parsed()) return cmd_field_check(std::move(cfg), out);
        if (sm->parsed()) return cmd_maximizer(std::move(cfg), out);
        if (ss->parsed()) return cmd_sharpness(std::move(cfg), out);
        if (sc->parsed()) return cmd_counterexample(std::move(cfg), out);
        if (su->parsed()) return cmd_suite(std::move(cfg), out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("starhardy");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(full.size());
    for (auto& s : full) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace starhardy::cli
