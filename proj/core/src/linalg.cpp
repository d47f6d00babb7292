#include "udpack/linalg.hpp"

#include <cmath>

namespace udpack {

double determinant(std::vector<double> m, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::fabs(m[row * n + col]) > std::fabs(m[pivot * n + col])) pivot = row;
        }
        if (m[pivot * n + col] == 0.0) return 0.0;
        if (pivot != col) {
            for (int k = 0; k < n; ++k) std::swap(m[pivot * n + k], m[col * n + k]);
            det = -det;
        }
        det *= m[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            const double f = m[row * n + col] / m[col * n + col];
            for (int k = col; k < n; ++k) m[row * n + k] -= f * m[col * n + k];
        }
    }
    return det;
}

std::vector<double> inverse(std::vector<double> m, int n) {
    std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::fabs(m[row * n + col]) > std::fabs(m[pivot * n + col])) pivot = row;
        }
        if (std::fabs(m[pivot * n + col]) < 1e-300) {
            throw DomainError("inverse: singular matrix");
        }
        if (pivot != col) {
            for (int k = 0; k < n; ++k) {
                std::swap(m[pivot * n + k], m[col * n + k]);
                std::swap(inv[pivot * n + k], inv[col * n + k]);
            }
        }
        const double p = m[col * n + col];
        for (int k = 0; k < n; ++k) {
            m[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            const double f = m[row * n + col];
            if (f == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                m[row * n + k] -= f * m[col * n + k];
                inv[row * n + k] -= f * inv[col * n + k];
            }
        }
    }
    return inv;
}

void mat_apply(std::span<const double> m, int n, std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += m[i * n + j] * x[j];
        y[i] = s;
    }
}

}  // namespace udpack
