#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "starhardy/geometry.hpp"
#include "starhardy/vec.hpp"

namespace starhardy::quadrature {

// One-dimensional Gauss rule on [-1, 1].
struct Gauss1D {
    std::vector<double> nodes, weights;
};

// Gauss rule for the weight (1 - x^2)^a on [-1, 1] (a = 0 is Legendre),
// via Golub–Welsch on the symmetric Jacobi recurrence.
Gauss1D gauss_jacobi_symmetric(int npts, double a);
Gauss1D gauss_legendre(int npts);

// Gauss rule for the weight (1 - x)^alpha (1 + x)^beta on [-1, 1].
Gauss1D gauss_jacobi_general(int npts, double alpha, double beta);

// Composite rule for (1 - c^2)^a dc on [-1, 1], split at c = 0 with `per_half`
// nodes per side. Each side is a Gauss rule whose weight carries the (1 -+ c)^a
// endpoint factor, so integrands of the form |c|^k * smooth stay high-order:
// coordinate-like fields have |.|^p kinks exactly on the equator c = 0.
Gauss1D polar_split_rule(int per_half, double a);

// Node/weight set on S^{n-1}; weights sum to the sphere measure.
struct SphereRule {
    int n = 0;
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

enum class AngularKind { Auto, Tensor, Qmc };

// Radial discretization of (0, r]: `levels` geometric levels of ratio 1/2
// toward 0, each split into `panels_per_level` Gauss panels of `order` points.
struct RadialSpec {
    int levels = 40;
    int panels_per_level = 1;
    int order = 8;
};

struct QuadratureRule {
    AngularKind kind = AngularKind::Auto;
    // Per-angle node counts (n-2 polar angles then azimuth); empty -> defaults.
    // For Qmc a single entry is the direction count.
    std::vector<int> angular_counts;
    RadialSpec radial;
    std::uint64_t seed = 0x5eed;

    // Next-coarser companion: angular counts halved (min 2), radial panel
    // order halved (min 2). Two-grid error estimates are |fine - coarse|.
    QuadratureRule coarsened() const;
};

double sphere_surface_measure(int n);

// Angular rule for dimension n. The domain-aware overload nudges any node that
// lands within 1e-12 (chordal) of a finite-Lambda direction by 1e-9, so
// critical-case integrands never see log(M/r(omega)) = 0 at a node.
SphereRule build_sphere_rule(int n, const QuadratureRule& rule);
SphereRule build_sphere_rule(const geometry::StarDomain& d, const QuadratureRule& rule);

// Angular rule aligned to pole x0 whose polar panels have breakpoints exactly
// at the chordal radii in `deltas` (plus geometric refinement above and
// below), so cap-complement sums are genuine composite-Gauss integrals for
// every delta in the ladder. n in {2, 3}.
SphereRule cap_graded_sphere_rule(int n, const Vec& x0, const std::vector<double>& deltas,
                                  int order, int azimuth);

struct IntegralResult {
    double value = 0;
    double error_estimate = 0;  // |value - value on coarsened rule|
};

// Integral of g over the domain (product angular x graded radial, r^{n-1}
// Jacobian). Throws runtime_error naming the node on a non-finite value.
IntegralResult integrate(const geometry::StarDomain& d, const std::function<double(const Vec&)>& g,
                         const QuadratureRule& rule);

// Same, over {eps < |x|} ∩ Omega. Requires eps < r_min.
IntegralResult integrate_annulus(const geometry::StarDomain& d,
                                 const std::function<double(const Vec&)>& g, double eps,
                                 const QuadratureRule& rule);

// Sum of w·g over angular nodes with |omega - x0| > delta.
double integrate_sphere_cap_complement(const std::function<double(const Vec&)>& g, const Vec& x0,
                                       double delta, const SphereRule& angular);

// --- shared radial machinery (hardy and probes build on these) ---

// Graded panels of (lo_clip, r]; panels fully below lo_clip are dropped and
// the straddling panel is cut at lo_clip.
std::vector<std::pair<double, double>> graded_panels(double r, const RadialSpec& spec,
                                                     double lo_clip = 0.0);

// Integral over the panels of |G(t)|^p · W(t). When split_at_sign_changes,
// panels are probed for sign changes of G, the crossing is bisected and the
// panel split there, keeping |·|^p piecewise-smooth for odd/fractional p.
double radial_abs_pow(const std::function<double(double)>& G, const std::function<double(double)>& W,
                      double p, const std::vector<std::pair<double, double>>& panels,
                      const Gauss1D& gauss, bool split_at_sign_changes);

}  // namespace starhardy::quadrature
