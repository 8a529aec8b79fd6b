#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace slc {

/// Dense 3x3 complex matrix, row-major. Only the small fixed-size operations
/// the diagnostics need; everything is closed-form at this dimension.
struct Mat3c {
    std::array<std::complex<double>, 9> a{};

    std::complex<double>& operator()(int i, int j) { return a[3 * i + j]; }
    const std::complex<double>& operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3c zero() { return {}; }
    static Mat3c identity() {
        Mat3c m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3c diag(std::complex<double> d0, std::complex<double> d1,
                      std::complex<double> d2) {
        Mat3c m;
        m(0, 0) = d0;
        m(1, 1) = d1;
        m(2, 2) = d2;
        return m;
    }

    friend Mat3c operator+(const Mat3c& x, const Mat3c& y) {
        Mat3c r;
        for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
        return r;
    }
    friend Mat3c operator-(const Mat3c& x, const Mat3c& y) {
        Mat3c r;
        for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }
    friend Mat3c operator*(std::complex<double> c, const Mat3c& x) {
        Mat3c r;
        for (int i = 0; i < 9; ++i) r.a[i] = c * x.a[i];
        return r;
    }
    friend Mat3c operator*(const Mat3c& x, const Mat3c& y) {
        Mat3c r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::complex<double> s = 0;
                for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
                r(i, j) = s;
            }
        return r;
    }
};

inline Mat3c commutator(const Mat3c& x, const Mat3c& y) { return x * y - y * x; }

inline Mat3c dagger(const Mat3c& x) {
    Mat3c r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = std::conj(x(j, i));
    return r;
}

inline std::complex<double> trace(const Mat3c& x) { return x(0, 0) + x(1, 1) + x(2, 2); }

inline std::complex<double> det(const Mat3c& x) {
    return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1))
         - x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0))
         + x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
}

/// Max absolute entry. Basis-stable and cheap at this size.
inline double max_abs(const Mat3c& x) {
    double m = 0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

/// Coefficients (c2, c1, c0) of det(mu I - X) = mu^3 + c2 mu^2 + c1 mu + c0.
struct CharPoly {
    std::complex<double> c2, c1, c0;
};

inline CharPoly char_poly(const Mat3c& x) {
    const std::complex<double> tr = trace(x);
    const std::complex<double> tr2 = trace(x * x);
    return {-tr, 0.5 * (tr * tr - tr2), -det(x)};
}

/// Real symmetric 3x3 matrix (used for the quadric form of the three-variable
/// family).
struct Mat3d {
    std::array<double, 9> a{};
    double& operator()(int i, int j) { return a[3 * i + j]; }
    const double& operator()(int i, int j) const { return a[3 * i + j]; }
};

inline double det(const Mat3d& x) {
    return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1))
         - x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0))
         + x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
}

inline double quad_eval(const Mat3d& q, const std::array<double, 3>& x) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += x[i] * q(i, j) * x[j];
    return s;
}

} // namespace slc
