#include "udpack/geometry.hpp"

#include <cmath>
#include <string>

namespace udpack {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int max_iter = 512;
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - bt * beta_cont_frac(b, a, 1.0 - x) / b;
}

double ball_volume(int n, double r) {
    if (n < 1) throw DomainError("ball_volume: dimension must be >= 1");
    if (n > kMaxDim) throw DomainError("ball_volume: dimension > " + std::to_string(kMaxDim));
    if (r < 0.0) throw DomainError("ball_volume: negative radius");
    // v_k = v_{k-2} * 2 pi / k, v_0 = 1, v_1 = 2.
    double v_even = 1.0;  // v_0
    double v_odd = 2.0;   // v_1
    double vn = (n % 2 == 0) ? v_even : v_odd;
    for (int k = 2; k <= n; ++k) {
        if (k % 2 == 0) {
            v_even *= 2.0 * kPi / k;
            if (k == n) vn = v_even;
        } else {
            v_odd *= 2.0 * kPi / k;
            if (k == n) vn = v_odd;
        }
    }
    if (n == 1) vn = v_odd;
    double rn = 1.0;
    for (int k = 0; k < n; ++k) rn *= r;
    return vn * rn;
}

double cap_volume(int n, double r, double h) {
    if (n < 1 || n > kMaxDim) throw DomainError("cap_volume: dimension out of range");
    if (r < 0.0) throw DomainError("cap_volume: negative radius");
    if (h < -kGeomTol || h > 2.0 * r + kGeomTol) {
        throw DomainError("cap_volume: height must lie in [0, 2r]");
    }
    if (r == 0.0) return 0.0;
    if (h <= 0.0) return 0.0;
    if (h >= 2.0 * r) return ball_volume(n, r);
    if (h > r) return ball_volume(n, r) - cap_volume(n, r, 2.0 * r - h);
    const double x = h * (2.0 * r - h) / (r * r);
    return 0.5 * ball_volume(n, r) * regularized_incomplete_beta((n + 1) / 2.0, 0.5, x);
}

double lens_volume(int n, double r1, double r2, double d) {
    if (n < 1 || n > kMaxDim) throw DomainError("lens_volume: dimension out of range");
    if (r1 < 0.0 || r2 < 0.0 || d < 0.0) throw DomainError("lens_volume: negative input");
    if (r1 == 0.0 || r2 == 0.0) return 0.0;
    if (d >= r1 + r2) return 0.0;
    if (d <= std::fabs(r1 - r2)) return ball_volume(n, std::min(r1, r2));
    // Cap heights from the radical hyperplane, in cancellation-free factored form:
    // h1 = (r2 - (d - r1)) (r2 + (d - r1)) / (2d), and symmetrically for h2.
    const double h1 = (r2 - d + r1) * (r2 + d - r1) / (2.0 * d);
    const double h2 = (r1 - d + r2) * (r1 + d - r2) / (2.0 * d);
    return cap_volume(n, r1, h1) + cap_volume(n, r2, h2);
}

}  // namespace udpack
