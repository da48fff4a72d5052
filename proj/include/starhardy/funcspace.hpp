#pragma once

#include <functional>
#include <string>
#include <vector>

#include "starhardy/fields.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/vec.hpp"

namespace starhardy::funcspace {

enum class Smoothness { C1Closure, Piecewise, Singular };

// Scalar test function with separate interior and boundary evaluators. The
// split is load-bearing: several constructions below assign boundary values
// that differ from the interior limit (they are continuous along rays but not
// up to the boundary), and compositions with a radial field always read the
// boundary evaluator.
struct ScalarField {
    int n = 0;
    std::string tag;
    Smoothness smoothness = Smoothness::C1Closure;
    std::function<double(const Vec&)> interior;
    std::function<double(const Vec&)> boundary;
    std::function<Vec(const Vec&)> gradient_fn;   // optional analytic gradient
    std::function<double(const Vec&)> radial_fn;  // optional analytic (x/|x|).grad
    std::vector<Vec> singular_points;             // finite-difference keep-out
};

struct Exponents {
    int n = 0;
    double p = 0;
    double kappa = 0;          // (n - p) / p
    double c_subcritical = 0;  // (p / (n - p))^p; NaN when p = n
    double c_critical = 0;     // (n / (n - 1))^n
};

// Requires n >= 2 and 1 <= p <= n.
Exponents make_exponents(int n, double p);

double eval(const ScalarField& u, const Vec& x);
double eval_boundary(const ScalarField& u, const Vec& y);

// Analytic gradient when present, otherwise coordinatewise central differences
// with step 1e-6 * max(1, |x|).
Vec gradient(const ScalarField& u, const Vec& x);

// (x/|x|) . grad u: analytic radial evaluator, else the analytic gradient,
// else a central difference along the ray. x = 0 is a domain error.
double radial_derivative(const ScalarField& u, const Vec& x);

// Gradient of the sphere restriction u|_{S^{n-1}} transported to x:
// (1/|x|) P_perp grad u (x/|x|), the tangential part evaluated on the unit
// sphere. x = 0 is a domain error.
Vec pullback_sphere_gradient(const ScalarField& u, const Vec& x);

// True when coordinatewise finite differences at x stay `margin` away from
// every recorded singular point.
bool fd_safe(const ScalarField& u, const Vec& x, double margin = 1e-3);

// u(f(x)): reads u's boundary evaluator at f(x). The result is radially
// invariant, so its radial evaluator is identically zero (no differencing).
ScalarField compose_with_field(const ScalarField& u, const fields::RadialField& f);

// Radial plateau profile: 0 on [0, 1/2], quintic rise to 1 on [3/4, 5/4],
// quintic fall back to 0 at 3/2. C^2 on the line.
double smooth_cutoff(double t);
double smooth_cutoff_deriv(double t);

// u(x) = cutoff(|x|) |x - x0|^{-alpha} with |x0| = 1, alpha > 0. The pole x0
// is recorded as a singular point.
ScalarField prop1_function(int n, double alpha, const Vec& x0);

struct Prop1Membership {
    bool u_in_lp = false;            // alpha < n/p
    bool pullback_in_lp = false;     // alpha < (n-1)/p
    bool u_in_w1p = false;           // alpha < (n-p)/p
    bool pullback_in_w1p = false;    // alpha < (n-p-1)/p
};

Prop1Membership prop1_membership(int n, double p, double alpha);

// psi(x) = x_1 / |x|_a: zero-homogeneous, smooth away from 0, exact zero
// radial derivative.
ScalarField psi_ellipsoid(const std::vector<double>& axes);

// Equality case of the subcritical inequality on the ellipsoid E_a
// (1 <= p < n, n >= 3):
//   xi = |x|^kappa psi + phi,  phi = (|x|/|x|_a)^kappa psi interior, 0 on the
// boundary. xi - xi o f_a = |x|^kappa psi exactly, and the radial derivative
// is kappa |x|^{kappa-1} psi exactly.
ScalarField maximizer_xi(const std::vector<double>& axes, int n, double p);

// Equality case of the critical inequality on E_a (n >= 2, alpha >= n/2):
//   eta = (M_a - r(x/|x|))^alpha (log(M_a/|x|))^{-(n-1)/n} interior, 0 on the
// boundary. The smallest axis coefficient must be attained exactly once so the
// top-radius set is two antipodal points; all-equal axes are rejected, since
// no maximizer exists on balls.
ScalarField maximizer_eta(const std::vector<double>& axes, int n, double alpha);

// Near-equality family on a general star domain: u = |x|^beta psi + phi_beta
// with phi_beta = r(x/|x|)^beta psi interior, 0 on the boundary. Requires
// beta >= kappa = (n-p)/p: below kappa the defining integrals diverge.
// psi must be radially invariant (spot-checked).
ScalarField beta_family(const geometry::StarDomain& d, const ScalarField& psi, double beta,
                        int n, double p);

// Fixed battery of C^1-closure fields used by the verification suites. All
// members are functions of (|x|, x_1) with analytic gradients; none vanish
// identically.
std::vector<ScalarField> c1_catalog(int n);

}  // namespace starhardy::funcspace
