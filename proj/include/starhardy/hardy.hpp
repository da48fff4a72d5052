#pragma once

#include <cstdint>

#include "starhardy/fields.hpp"
#include "starhardy/funcspace.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/quadrature.hpp"

namespace starhardy::hardy {

// Subcritical:          int |u - u o f|^p / |x|^p  <=  (p/(n-p))^p int |x^.grad u|^p
// Critical (p = n):     int |u - u o f|^n / (|x|^n log^n(M/|x|))
//                                            <=  (n/(n-1))^n int |x^.grad u|^n
// The classical modes drop the composition: they require u to vanish on the
// boundary, use the full gradient in the subcritical case, and keep the radial
// derivative in the critical case.
enum class Mode { Subcritical, Critical, ClassicalSubcritical, ClassicalCritical };

struct InequalityReport {
    Mode mode = Mode::Subcritical;
    int n = 0;
    double p = 0;
    double lhs = 0;
    double lhs_error = 0;       // |fine - coarse| for the left integral
    double rhs_integral = 0;    // gradient integral before the constant
    double rhs_error = 0;
    double constant = 0;
    double rhs = 0;             // constant * rhs_integral
    double q = 0;               // lhs / rhs; 0 when both sides are below 1e-14
    double q_error = 0;         // |q_fine - q_coarse|
    double defect = 0;          // rhs - lhs (negative means the bound failed)
};

// Left side of the subcritical inequality. Requires n >= 3, 1 <= p < n.
// The composition u o f is constant along each ray, so it is evaluated once
// per direction; odd and fractional p get sign-change panel splitting.
double lhs_subcritical(const funcspace::ScalarField& u, const fields::RadialField& f,
                       const geometry::StarDomain& d, double p,
                       const quadrature::QuadratureRule& rule);

// int |x^ . grad u|^p over the domain.
double rhs_subcritical_integral(const funcspace::ScalarField& u, const geometry::StarDomain& d,
                                double p, const quadrature::QuadratureRule& rule);

// Left side of the critical inequality (p = n >= 2). The graded radial mesh
// truncates at t* = r 2^{-levels}; the omitted head int_0^{t*} t^{-1}
// log^{-n}(M/t) dt = log^{1-n}(M/t*)/(n-1) is added back per direction with
// the integrand's numerator frozen at t*.
double lhs_critical(const funcspace::ScalarField& u, const fields::RadialField& f,
                    const geometry::StarDomain& d, const quadrature::QuadratureRule& rule);

double rhs_critical_integral(const funcspace::ScalarField& u, const geometry::StarDomain& d,
                             const quadrature::QuadratureRule& rule);

// Full verification: both sides on the rule and on its coarsened companion.
// For the classical modes, u must vanish on the boundary: |u| <= 1e-9 at every
// angular node of the rule, otherwise invalid_argument.
InequalityReport verify(const funcspace::ScalarField& u, const fields::RadialField& f,
                        const geometry::StarDomain& d, const funcspace::Exponents& e, Mode mode,
                        const quadrature::QuadratureRule& rule);

struct Lemma2Report {
    double max_violation = 0;  // max over samples of |x.grad|g|| - |x.grad g|
    int samples = 0;           // samples actually used
    int skipped = 0;           // samples dropped for |g| <= 1e-6 (kink of |.|)
};

// Finite-difference check of |x . grad |g|| <= |x . grad g| at seeded points
// of the unit ball.
Lemma2Report lemma2_check(const funcspace::ScalarField& g, int samples, std::uint64_t seed);

}  // namespace starhardy::hardy
