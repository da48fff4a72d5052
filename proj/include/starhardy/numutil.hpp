#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "starhardy/vec.hpp"

namespace starhardy {

// Pairwise (cascade) summation: deterministic reduction order and O(log N)
// rounding growth. Used for every quadrature accumulation.
inline double pairwise_sum(const double* v, size_t count) {
    if (count <= 32) {
        double s = 0;
        for (size_t i = 0; i < count; ++i) s += v[i];
        return s;
    }
    size_t half = count / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// Seeded RNG used by every sampling routine. Gaussians come from Box–Muller so
// the stream does not depend on library-specific distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // (0,1): never returns an exact endpoint, safe inside logs.
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
        spare_ = r * s;
        has_spare_ = true;
        return r * c;
    }

    Vec unit_vector(int n) {
        Vec v(n);
        double r2;
        do {
            for (int i = 0; i < n; ++i) v[i] = normal();
            r2 = dot(v, v);
        } while (r2 < 1e-12);
        return (1.0 / std::sqrt(r2)) * v;
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0;
    bool has_spare_ = false;
};

// Golden-section search for the maximum of a unimodal f on [a, b].
// Returns (argmax, max). Tolerance is on the bracket width.
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double tol = 1e-13) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// Halton sequence (first point skipped by the +1 offset below).
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    for (std::uint64_t i = index; i > 0; i /= base) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
    }
    return r;
}

// Acklam's rational approximation of the standard normal quantile (~1e-9
// absolute): plenty for mapping low-discrepancy points to directions.
double inverse_normal_cdf(double p);

// Seeded low-discrepancy directions on S^{n-1}: Halton points, Cranley–
// Patterson rotated by the seed, pushed through the normal quantile and
// normalized.
std::vector<Vec> qmc_unit_vectors(int n, int count, std::uint64_t seed);

}  // namespace starhardy
