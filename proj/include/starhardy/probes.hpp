#pragma once

#include <string>
#include <vector>

#include "starhardy/fields.hpp"
#include "starhardy/funcspace.hpp"
#include "starhardy/geometry.hpp"
#include "starhardy/hardy.hpp"
#include "starhardy/quadrature.hpp"

namespace starhardy::probes {

// Cap-complement ladder with a log-log least-squares fit on its tail.
struct DivergenceFit {
    std::vector<double> deltas;  // descending cap radii
    std::vector<double> values;  // complement integrals, one per delta
    double fitted_exponent = 0;  // slope over the last four rungs
    double r_squared = 0;
    bool log_flag = false;       // flat slope but still growing: log divergence
};

// deltas and values must match in size, with at least four rungs.
DivergenceFit fit_ladder(const std::vector<double>& deltas, const std::vector<double>& values);

// delta_k = 2^{-k}, k = 3..10.
std::vector<double> default_ladder();

// Probes how int_{S^{n-1}} |u|^p and the matching pullback-gradient integral
// diverge near the pole x0 for u = cutoff(|x|) |x - x0|^{-alpha}. The sphere
// rung integrand scales like delta^{(n-1) - p alpha}, the gradient rung like
// delta^{(n-1) - p(alpha+1)}; exponent zero shows up as log_flag instead.
struct Prop1Report {
    int n = 0;
    double p = 0, alpha = 0;
    funcspace::Prop1Membership membership;
    DivergenceFit sphere;
    DivergenceFit gradient;
    double expected_sphere_exponent = 0;
    double expected_gradient_exponent = 0;
};

Prop1Report prop1_probe(int n, double p, double alpha, const Vec& x0,
                        const std::vector<double>& deltas, int order = 12, int azimuth = 48);

// Q along the near-equality family u_beta; Q should track (kappa/beta)^p with
// the maximum at beta = kappa.
struct SharpnessScan {
    std::vector<double> beta_grid;
    std::vector<double> q_values;
    std::vector<double> q_closed_form;
    double argmax_beta = 0;
    double q_at_argmax = 0;
    double max_closed_form_residual = 0;
};

SharpnessScan sharpness_scan(const geometry::StarDomain& d, const fields::RadialField& f,
                             const funcspace::ScalarField& psi, double p, int n,
                             const std::vector<double>& beta_grid,
                             const quadrature::QuadratureRule& rule);

// Equality-case check: the defining integral computed in volume form (the
// inequality's left side) against its exact sphere reduction. The two must
// agree to 1e-4 relative.
struct MaximizerReport {
    std::string kind;  // "xi" or "eta"
    hardy::InequalityReport inequality;
    double i_volume = 0;
    double i_sphere = 0;
    double rel_gap = 0;
};

MaximizerReport maximizer_check_xi(const std::vector<double>& axes, int n, double p,
                                   const quadrature::QuadratureRule& rule);
MaximizerReport maximizer_check_eta(const std::vector<double>& axes, int n, double alpha,
                                    const quadrature::QuadratureRule& rule);

}  // namespace starhardy::probes
