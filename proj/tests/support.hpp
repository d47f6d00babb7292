#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "udpack/geometry.hpp"
#include "udpack/linalg.hpp"
#include "udpack/rng.hpp"
#include "udpack/udset.hpp"

namespace testutil {

using udpack::Point;
using udpack::Xoshiro256pp;

inline double gaussian(Xoshiro256pp& rng) {
    // Box-Muller; test-only (platform determinism not required here).
    double u1 = rng.uniform();
    while (u1 <= 0.0) u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * udpack::kPi * u2);
}

/// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
inline udpack::RotationMatrix random_rotation(int n, Xoshiro256pp& rng) {
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (;;) {
        for (auto& e : m) e = gaussian(rng);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = 0; j < i; ++j) {
                double d = 0.0;
                for (int k = 0; k < n; ++k) d += m[i * n + k] * m[j * n + k];
                for (int k = 0; k < n; ++k) m[i * n + k] -= d * m[j * n + k];
            }
            double nrm = 0.0;
            for (int k = 0; k < n; ++k) nrm += m[i * n + k] * m[i * n + k];
            nrm = std::sqrt(nrm);
            if (nrm < 1e-6) {
                ok = false;
                break;
            }
            for (int k = 0; k < n; ++k) m[i * n + k] /= nrm;
        }
        if (ok) break;
    }
    udpack::RotationMatrix r;
    r.dim = n;
    r.entries = std::move(m);
    return r;
}

inline Point random_in_ball(int n, double radius, Xoshiro256pp& rng) {
    Point p(n);
    rng.in_ball(radius, p);
    return p;
}

/// O(N^2)-free brute-force neighbor oracle: indices with distance <= rho.
inline std::vector<int> brute_neighbors(std::span<const double> flat, int dim,
                                        std::span<const double> x, double rho) {
    std::vector<int> out;
    const double r2 = rho * rho;
    const std::size_t count = flat.size() / dim;
    for (std::size_t i = 0; i < count; ++i) {
        if (udpack::dist2(flat.subspan(i * dim, dim), x) <= r2) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

/// Brute-force enumeration oracle: number of points of the lattice spanned by
/// `basis` (rows) with norm <= window after rescaling the shortest nonzero
/// vector to length 1 (same convention as gen_lattice, independent plain box
/// loops). K must generously bound the coefficients of both searches.
inline std::size_t lattice_count_oracle(const std::vector<double>& basis, int dim, double window,
                                        long K) {
    std::vector<long> k(dim, -K);
    std::vector<double> v(dim);
    auto fill = [&]() {
        for (int i = 0; i < dim; ++i) v[i] = 0.0;
        for (int j = 0; j < dim; ++j) {
            for (int i = 0; i < dim; ++i) v[i] += static_cast<double>(k[j]) * basis[j * dim + i];
        }
    };
    auto sweep = [&](auto&& body) {
        std::fill(k.begin(), k.end(), -K);
        for (;;) {
            fill();
            body();
            int axis = 0;
            while (axis < dim) {
                if (++k[axis] <= K) break;
                k[axis] = -K;
                ++axis;
            }
            if (axis == dim) break;
        }
    };
    double shortest2 = 1e300;
    sweep([&]() {
        const double n2 = udpack::norm2(v);
        if (n2 > 0.0 && n2 < shortest2) shortest2 = n2;
    });
    const double unit = 1.0 / std::sqrt(shortest2);
    std::size_t count = 0;
    const double w2 = window * window;
    sweep([&]() {
        for (auto& c : v) c *= unit;
        if (udpack::norm2(v) <= w2) ++count;
    });
    return count;
}

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Monte Carlo volume oracle over the box [lo, hi]^n for an arbitrary
/// predicate; independent of the library's analytic volume path.
template <typename Pred>
McEstimate mc_box_volume(int n, const Point& lo, const Point& hi, std::int64_t samples,
                         std::uint64_t seed, Pred&& inside) {
    Xoshiro256pp rng(udpack::derive_seed(seed, 99));
    double box = 1.0;
    for (int i = 0; i < n; ++i) box *= hi[i] - lo[i];
    Point x(n);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        if (inside(x)) ++hits;
    }
    const double f = static_cast<double>(hits) / static_cast<double>(samples);
    McEstimate e;
    e.value = f * box;
    e.se = box * std::sqrt(std::max(f * (1.0 - f), 0.0) / static_cast<double>(samples));
    return e;
}

/// Scales every coordinate (used to build sparse copies like 2Z^2, which
/// gen_lattice cannot produce directly since it normalizes the min distance).
inline udpack::UDSet scaled_copy(const udpack::UDSet& set, double factor) {
    std::vector<double> flat(set.flat().begin(), set.flat().end());
    for (auto& c : flat) c *= factor;
    return udpack::UDSet::validate_flat(std::move(flat), set.dim(),
                                        set.window_radius() * factor);
}

inline udpack::UDSet translated_copy(const udpack::UDSet& set, const Point& t) {
    return udpack::transform(set, udpack::RigidMotion::pure_translation(t));
}

/// Closed 2-D lens area: two circles of radius r at center distance d.
inline double lens_area_2d(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    if (d <= 0.0) return udpack::kPi * r * r;
    return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
}

/// Classical 3-D spherical cap volume pi h^2 (3r - h) / 3.
inline double cap_volume_3d(double r, double h) {
    return udpack::kPi * h * h * (3.0 * r - h) / 3.0;
}

/// 2-D circular segment area for cap height h.
inline double cap_area_2d(double r, double h) {
    return r * r * std::acos((r - h) / r) - (r - h) * std::sqrt(2.0 * r * h - h * h);
}

}  // namespace testutil
