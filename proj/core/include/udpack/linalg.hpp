#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "udpack/errors.hpp"

namespace udpack {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist2(a, b));
}

inline Point add(std::span<const double> a, std::span<const double> b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point sub(std::span<const double> a, std::span<const double> b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point scale(std::span<const double> a, double s) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

inline bool lex_less(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

/// Determinant of a dense n x n matrix (row-major), by LU with partial pivoting.
double determinant(std::vector<double> m, int n);

/// Inverse of a dense n x n matrix (row-major), Gauss-Jordan with partial pivoting.
/// Throws DomainError if the matrix is numerically singular.
std::vector<double> inverse(std::vector<double> m, int n);

/// y = M x for a row-major n x n matrix.
void mat_apply(std::span<const double> m, int n, std::span<const double> x, std::span<double> y);

inline double frobenius_norm(std::span<const double> m) {
    return std::sqrt(norm2(m));
}

}  // namespace udpack
