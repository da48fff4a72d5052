// Acceptance battery: one line per criterion, pinned tolerances, exit 1 on any
// failure. Everything here runs on the library's public interfaces; the CLI is
// exercised only where determinism of the shipped reports is the claim itself.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "starhardy/cli.hpp"
#include "starhardy/fields.hpp"
#include "starhardy/funcspace.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/hardy.hpp"
#include "starhardy/numutil.hpp"
#include "starhardy/probes.hpp"
#include "starhardy/quadrature.hpp"

using namespace starhardy;
namespace geo = starhardy::geometry;
namespace fld = starhardy::fields;
namespace fn = starhardy::funcspace;
namespace quad = starhardy::quadrature;
namespace prb = starhardy::probes;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260817;

// Fixed tolerances. These gate the build: do not loosen them to make a run
// pass; investigate the regression instead.
constexpr double kSubcriticalSlack = 1e-6;   // Q <= 1 + slack
constexpr double kSubcriticalQErr = 1e-6;    // two-grid quotient error
constexpr double kCriticalSlack = 1e-4;
constexpr double kXiTol = 1e-6;              // |Q - 1| for xi
constexpr double kXiSideTol = 1e-6;          // |side - 2 pi / 3| on the ball
constexpr double kEtaTol = 1e-4;             // |Q - 1| for eta
constexpr double kSharpResidual = 1e-4;      // |Q(beta) - (kappa/beta)^p|
constexpr double kSharpPeakTol = 1e-6;       // |Q(kappa) - 1|
constexpr double kLadderRel = 0.05;          // fitted vs expected exponent
constexpr double kPullbackRel = 1e-5;        // FD vs analytic sphere gradient
constexpr double kTangencyTol = 1e-12;
constexpr double kComposedRadial = 1e-8;     // ray derivative of u o f
constexpr double kContractionTol = 1e-10;    // |x.grad|g|| - |x.grad g|
constexpr int kFieldSamples = 1000;
constexpr double kVolumeRel = 1e-10;
constexpr double kSingularRel = 1e-8;
constexpr double kOddAbs = 1e-10;

std::string fmtd(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

quad::QuadratureRule acc_rule(int n) {
    quad::QuadratureRule rule;
    rule.kind = quad::AngularKind::Tensor;
    // The bump member composed with the ellipsoid profile is analytic in the
    // polar cosine but with an essential singularity close to the interval,
    // so the polar count converges at ratio ~1.34 per point pair: 20 points
    // per half leaves ~7e-6, 28 reach ~6e-8. The error bar HALVES the count,
    // so 56 keeps the coarse companion under the criterion-1 gate.
    switch (n) {
        case 2: rule.angular_counts = {256}; break;
        case 3: rule.angular_counts = {56, 8}; break;
        case 4: rule.angular_counts = {56, 4, 8}; break;
        default: rule.angular_counts = {56, 4, 4, 8}; break;
    }
    rule.radial.levels = 40;
    rule.radial.order = 10;
    rule.seed = kSeed;
    return rule;
}

std::vector<double> ellipsoid_axes(int n) {
    std::vector<double> axes(static_cast<size_t>(n), 2.0);
    axes[0] = 1.0;
    return axes;
}

std::vector<geo::StarDomain> domains_for(int n) {
    std::vector<double> coeffs(static_cast<size_t>(n), 0.0);
    coeffs[0] = 0.3;
    return {geo::make_ball(n, 1.0), geo::make_ellipsoid(ellipsoid_axes(n)),
            geo::make_star(n, geo::linear_profile(n, 1.0, coeffs), 0.6)};
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

// ---- criterion 1: subcritical inequality across the catalog ----------------

Outcome criterion_subcritical() {
    Outcome out;
    int count = 0;
    double worst_excess = -1e300, worst_qerr = 0;
    std::string worst_at = "-", worst_err_at = "-";
    for (int n : {3, 4, 5}) {
        quad::QuadratureRule rule = acc_rule(n);
        std::vector<fn::ScalarField> cat = fn::c1_catalog(n);
        for (const geo::StarDomain& d : domains_for(n)) {
            fld::RadialField f = fld::canonical_field(d);
            for (int pi = 1; pi < n; ++pi) {
                fn::Exponents e = fn::make_exponents(n, pi);
                for (const fn::ScalarField& u : cat) {
                    hardy::InequalityReport rep =
                        hardy::verify(u, f, d, e, hardy::Mode::Subcritical, rule);
                    ++count;
                    double excess = rep.q - 1.0;
                    if (excess > worst_excess) {
                        worst_excess = excess;
                        worst_at = fmtd("%s, %s, n=%d, p=%d", u.tag.c_str(), d.note.c_str(), n, pi);
                    }
                    if (rep.q_error > worst_qerr) {
                        worst_qerr = rep.q_error;
                        worst_err_at =
                            fmtd("%s, %s, n=%d, p=%d", u.tag.c_str(), d.note.c_str(), n, pi);
                    }
                    if (excess > kSubcriticalSlack || rep.q_error > kSubcriticalQErr)
                        out.ok = false;
                }
            }
        }
    }
    out.detail = fmtd("%d reports; worst Q-1 = %.3g (%s); worst Q_err = %.3g (%s)", count,
                      worst_excess, worst_at.c_str(), worst_qerr, worst_err_at.c_str());
    return out;
}

// ---- criterion 2: critical inequality across the catalog -------------------

Outcome criterion_critical() {
    Outcome out;
    int count = 0;
    double worst_excess = -1e300;
    std::string worst_at = "-";
    bool constant_exact = true;
    for (int n : {2, 3}) {
        quad::QuadratureRule rule = acc_rule(n);
        std::vector<fn::ScalarField> cat = fn::c1_catalog(n);
        fn::Exponents e = fn::make_exponents(n, n);
        for (const geo::StarDomain& d : domains_for(n)) {
            fld::RadialField f = fld::canonical_field(d);
            for (const fn::ScalarField& u : cat) {
                hardy::InequalityReport rep =
                    hardy::verify(u, f, d, e, hardy::Mode::Critical, rule);
                ++count;
                double excess = rep.q - 1.0;
                if (excess > worst_excess) {
                    worst_excess = excess;
                    worst_at = fmtd("%s, %s, n=%d", u.tag.c_str(), d.note.c_str(), n);
                }
                if (excess > kCriticalSlack) out.ok = false;
                if (n == 2 && rep.constant != 4.0) constant_exact = false;
            }
        }
    }
    if (!constant_exact) out.ok = false;
    out.detail = fmtd("%d reports; worst Q-1 = %.3g (%s); plane constant %s", count, worst_excess,
                      worst_at.c_str(), constant_exact ? "exactly 4" : "NOT 4");
    return out;
}

// ---- criterion 3: equality cases ------------------------------------------

Outcome criterion_maximizers() {
    Outcome out;
    double worst_xi = 0, ball_side_err = 0;
    struct Case {
        int n;
        double p;
    };
    for (const Case& c : {Case{3, 1.0}, Case{3, 2.0}, Case{4, 2.0}}) {
        quad::QuadratureRule rule = acc_rule(c.n);
        for (bool ball : {true, false}) {
            std::vector<double> axes =
                ball ? std::vector<double>(static_cast<size_t>(c.n), 1.0) : ellipsoid_axes(c.n);
            prb::MaximizerReport rep = prb::maximizer_check_xi(axes, c.n, c.p, rule);
            worst_xi = std::max(worst_xi, std::abs(rep.inequality.q - 1.0));
            if (std::abs(rep.inequality.q - 1.0) > kXiTol) out.ok = false;
            if (ball && c.n == 3 && c.p == 2.0) {
                ball_side_err = std::max(std::abs(rep.inequality.lhs - 2 * M_PI / 3),
                                         std::abs(rep.inequality.rhs - 2 * M_PI / 3));
                if (ball_side_err > kXiSideTol) out.ok = false;
            }
        }
    }

    prb::MaximizerReport eta = prb::maximizer_check_eta({0.5, 1, 1}, 3, 2.0, acc_rule(3));
    double eta_gap = std::abs(eta.inequality.q - 1.0);
    if (eta_gap > kEtaTol) out.ok = false;

    bool rejected = false;
    try {
        fn::maximizer_eta({1, 1, 1}, 3, 2.0);
    } catch (const std::invalid_argument& e) {
        rejected = std::string(e.what()).find("no maximizer") != std::string::npos;
    }
    if (!rejected) out.ok = false;

    out.detail = fmtd("xi worst |Q-1| = %.3g; ball sides within %.3g of 2pi/3; "
                      "eta |Q-1| = %.3g; ball eta rejected: %s",
                      worst_xi, ball_side_err, eta_gap, rejected ? "yes" : "NO");
    return out;
}

// ---- criterion 4: sharpness of the constant --------------------------------

Outcome criterion_sharpness() {
    Outcome out;
    geo::StarDomain d = geo::make_ellipsoid({1, 2, 2});
    fld::RadialField f = fld::canonical_field(d);
    fn::ScalarField psi = fn::psi_ellipsoid({1, 2, 2});
    double worst_resid = 0, worst_peak = 0;
    for (double p : {1.0, 2.0}) {
        double kappa = (3.0 - p) / p;
        std::vector<double> grid;
        for (int k = 0; k < 9; ++k) grid.push_back(kappa * (1.0 + 0.25 * k));
        prb::SharpnessScan scan = prb::sharpness_scan(d, f, psi, p, 3, grid, acc_rule(3));
        worst_resid = std::max(worst_resid, scan.max_closed_form_residual);
        worst_peak = std::max(worst_peak, std::abs(scan.q_at_argmax - 1.0));
        if (scan.max_closed_form_residual > kSharpResidual) out.ok = false;
        if (scan.argmax_beta != kappa) out.ok = false;
        if (std::abs(scan.q_at_argmax - 1.0) > kSharpPeakTol) out.ok = false;
    }
    out.detail = fmtd("9-point grids, p in {1, 2}: worst residual %.3g, peak |Q-1| = %.3g",
                      worst_resid, worst_peak);
    return out;
}

// ---- criterion 5: divergence ladders ---------------------------------------

Outcome criterion_divergence() {
    Outcome out;
    prb::Prop1Report rep = prb::prop1_probe(3, 2.0, 1.25, Vec{1, 0, 0}, prb::default_ladder());
    bool memb = rep.membership.u_in_lp && !rep.membership.pullback_in_lp &&
                !rep.membership.u_in_w1p && !rep.membership.pullback_in_w1p;
    double sph_rel = std::abs(rep.sphere.fitted_exponent - rep.expected_sphere_exponent) /
                     std::abs(rep.expected_sphere_exponent);
    double grad_rel = std::abs(rep.gradient.fitted_exponent - rep.expected_gradient_exponent) /
                      std::abs(rep.expected_gradient_exponent);
    if (!memb || sph_rel > kLadderRel || grad_rel > kLadderRel) out.ok = false;
    if (rep.sphere.log_flag || rep.gradient.log_flag) out.ok = false;

    prb::Prop1Report edge = prb::prop1_probe(3, 2.0, 1.0, Vec{1, 0, 0}, prb::default_ladder());
    if (!edge.sphere.log_flag) out.ok = false;

    out.detail = fmtd("memberships %s; exponents %.4f (want -0.5), %.4f (want -2.5); "
                      "alpha=1 log detector: %s",
                      memb ? "(in, out, out, out)" : "WRONG", rep.sphere.fitted_exponent,
                      rep.gradient.fitted_exponent, edge.sphere.log_flag ? "fires" : "SILENT");
    return out;
}

// ---- criterion 6: derivative identities ------------------------------------

Outcome criterion_derivatives() {
    Outcome out;
    geo::StarDomain d = geo::make_ellipsoid({1, 2, 2});
    fld::RadialField f = fld::canonical_field(d);
    double worst_pull = 0, worst_tan = 0, worst_ray = 0, worst_contract = 0;

    for (const fn::ScalarField& u : fn::c1_catalog(3)) {
        fn::ScalarField stripped = u;
        stripped.gradient_fn = nullptr;
        fn::ScalarField composed = fn::compose_with_field(u, f);
        Rng rng(kSeed);
        for (int k = 0; k < 1000; ++k) {
            Vec omega = rng.unit_vector(3);
            double t = (0.05 + 0.9 * rng.uniform()) * d.profile(omega);
            Vec x = t * omega;

            Vec ga = fn::pullback_sphere_gradient(u, x);
            Vec gf = fn::pullback_sphere_gradient(stripped, x);
            worst_pull = std::max(worst_pull, norm(ga - gf) / std::max(1.0, norm(ga)));
            worst_tan = std::max(worst_tan, std::abs(dot(ga, x)) / std::max(1.0, norm(x)));

            double h = 1e-5;
            double ray = std::abs(composed.interior((t + h) * omega) -
                                  composed.interior((t - h) * omega)) /
                         (2 * h);
            worst_ray = std::max(worst_ray, ray);
        }
    }
    if (worst_pull > kPullbackRel || worst_tan > kTangencyTol || worst_ray > kComposedRadial)
        out.ok = false;

    for (const fn::ScalarField& u : fn::c1_catalog(3)) {
        if (u.tag != "norm" && u.tag != "coordinate" && u.tag != "gaussian") continue;
        hardy::Lemma2Report rep = hardy::lemma2_check(u, 1000, kSeed);
        worst_contract = std::max(worst_contract, rep.max_violation);
        if (rep.max_violation > kContractionTol) out.ok = false;
    }

    out.detail = fmtd("pullback FD gap %.3g; tangency %.3g; composed ray derivative %.3g; "
                      "contraction defect %.3g",
                      worst_pull, worst_tan, worst_ray, worst_contract);
    return out;
}

// ---- criterion 7: boundary-projection fields --------------------------------

Outcome criterion_fields() {
    Outcome out;
    double worst = 0;
    for (const geo::StarDomain& d : domains_for(3)) {
        fld::FieldReport rep = fld::check_field(fld::canonical_field(d), kFieldSamples, kSeed);
        worst = std::max({worst, rep.max_ray_deviation, rep.max_boundary_deviation,
                          rep.max_idempotence_deviation});
        if (!rep.pass) out.ok = false;
    }
    out.detail = fmtd("ball/ellipsoid/star, %d samples each: worst deviation %.3g",
                      kFieldSamples, worst);
    return out;
}

// ---- criterion 8: quadrature oracles ----------------------------------------

Outcome criterion_quadrature() {
    Outcome out;
    auto one = [](const Vec&) { return 1.0; };

    geo::StarDomain b2 = geo::make_ball(2, 1.0);
    geo::StarDomain b3 = geo::make_ball(3, 1.0);
    geo::StarDomain e3 = geo::make_ellipsoid({1, 2, 2});

    double v2 = quad::integrate(b2, one, acc_rule(2)).value;
    double v3 = quad::integrate(b3, one, acc_rule(3)).value;
    double inv = quad::integrate(b3, [](const Vec& x) { return 1.0 / dot(x, x); },
                                 acc_rule(3)).value;
    double ve = quad::integrate(e3, one, acc_rule(3)).value;
    double odd = quad::integrate(b3, [](const Vec& x) { return x[0]; }, acc_rule(3)).value;

    double r2 = std::abs(v2 - M_PI) / M_PI;
    double r3 = std::abs(v3 - 4 * M_PI / 3) / (4 * M_PI / 3);
    double ri = std::abs(inv - 4 * M_PI) / (4 * M_PI);
    double re = std::abs(ve - M_PI / 3) / (M_PI / 3);

    if (r2 > kVolumeRel || r3 > kVolumeRel) out.ok = false;
    if (ri > kSingularRel || re > kSingularRel) out.ok = false;
    if (std::abs(odd) > kOddAbs) out.ok = false;

    out.detail = fmtd("volumes %.2g/%.2g rel; |x|^-2 %.2g rel; ellipsoid %.2g rel; odd %.2g",
                      r2, r3, ri, re, std::abs(odd));
    return out;
}

// ---- criterion 9: deterministic reports -------------------------------------

std::string strip_timestamp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream kept;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) kept << line << '\n';
    return kept.str();
}

Outcome criterion_determinism() {
    Outcome out;
    fs::path root = fs::temp_directory_path() / "starhardy_acceptance";
    fs::remove_all(root);
    fs::path a = root / "a", b = root / "b";
    fs::create_directories(a);
    fs::create_directories(b);

    int ra = cli::run({"suite", "--out", a.string(), "--seed", std::to_string(kSeed)});
    int rb = cli::run({"suite", "--out", b.string(), "--seed", std::to_string(kSeed)});
    if (ra != 0 || rb != 0) {
        out.ok = false;
        out.detail = fmtd("suite exit codes %d, %d", ra, rb);
        return out;
    }
    std::string ja = strip_timestamp(a / "suite.json");
    std::string jb = strip_timestamp(b / "suite.json");
    bool identical = !ja.empty() && ja == jb;
    if (!identical) out.ok = false;
    out.detail = fmtd("two suite runs, seed %llu: reports %s (%zu bytes compared)",
                      static_cast<unsigned long long>(kSeed),
                      identical ? "byte-identical" : "DIFFER", ja.size());
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"subcritical inequality across the field catalog", criterion_subcritical},
        {"critical inequality across the field catalog", criterion_critical},
        {"equality cases xi and eta", criterion_maximizers},
        {"sharpness of the subcritical constant", criterion_sharpness},
        {"divergence ladders for the singular probe", criterion_divergence},
        {"derivative identities and radial contraction", criterion_derivatives},
        {"boundary-projection field checks", criterion_fields},
        {"quadrature closed-form oracles", criterion_quadrature},
        {"deterministic reports", criterion_determinism},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = fmtd("unexpected exception: %s", e.what());
        }
        if (!o.ok) ++failures;
        std::printf("[%s] criterion %zu: %s — %s\n", o.ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, o.detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures ? 1 : 0;
}
