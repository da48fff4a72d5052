#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace starhardy {

// Dense vector with inline storage. All experiments live in n <= 5; the cap
// keeps hot loops allocation-free. Raising it is a one-line change.
inline constexpr int kMaxDim = 8;

struct Vec {
    std::array<double, kMaxDim> a{};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) { check_dim(dim); }
    Vec(std::initializer_list<double> v) : n(static_cast<int>(v.size())) {
        check_dim(n);
        int i = 0;
        for (double x : v) a[i++] = x;
    }
    static Vec from(const std::vector<double>& v) {
        Vec r(static_cast<int>(v.size()));
        for (int i = 0; i < r.n; ++i) r.a[i] = v[i];
        return r;
    }

    static void check_dim(int dim) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("vector dimension " + std::to_string(dim) +
                                        " outside supported range [1, " + std::to_string(kMaxDim) + "]");
    }

    double& operator[](int i) { return a[static_cast<size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<size_t>(i)]; }
    int size() const { return n; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) a[i] *= s;
        return *this;
    }
};

inline Vec operator+(Vec x, const Vec& y) { return x += y; }
inline Vec operator-(Vec x, const Vec& y) { return x -= y; }
inline Vec operator*(double s, Vec x) { return x *= s; }
inline Vec operator*(Vec x, double s) { return x *= s; }

inline double dot(const Vec& x, const Vec& y) {
    double s = 0;
    for (int i = 0; i < x.n; ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec normalized(const Vec& x) {
    double r = norm(x);
    if (r == 0.0) throw std::domain_error("cannot normalize the zero vector");
    Vec u = x;
    u *= 1.0 / r;
    return u;
}

// Anisotropic norm |x|_a = sqrt(sum a_i^2 x_i^2).
inline double anorm(const Vec& x, const std::vector<double>& axes) {
    double s = 0;
    for (int i = 0; i < x.n; ++i) {
        double t = axes[static_cast<size_t>(i)] * x[i];
        s += t * t;
    }
    return std::sqrt(s);
}

inline Vec basis_vector(int n, int i) {
    Vec e(n);
    e[i] = 1.0;
    return e;
}

inline double chordal_distance(const Vec& x, const Vec& y) {
    double s = 0;
    for (int i = 0; i < x.n; ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace starhardy
