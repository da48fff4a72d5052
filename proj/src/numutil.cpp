#include "starhardy/numutil.hpp"

#include <stdexcept>

namespace starhardy {

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf requires p in (0,1)");
    // Acklam's coefficients.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

std::vector<Vec> qmc_unit_vectors(int n, int count, std::uint64_t seed) {
    static const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    Vec::check_dim(n);
    Rng rng(seed);
    std::vector<double> shift(static_cast<size_t>(n));
    for (double& s : shift) s = rng.uniform();
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        Vec v(n);
        double r2 = 0;
        for (int j = 0; j < n; ++j) {
            double u = halton(static_cast<std::uint64_t>(k) + 1, primes[j]) + shift[static_cast<size_t>(j)];
            u -= std::floor(u);  // Cranley–Patterson rotation
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            v[j] = inverse_normal_cdf(u);
            r2 += v[j] * v[j];
        }
        if (r2 < 1e-12) {
            v[0] = 1.0;  // essentially unreachable; keeps the map total
            r2 = 1.0;
        }
        out.push_back((1.0 / std::sqrt(r2)) * v);
    }
    return out;
}

}  // namespace starhardy
