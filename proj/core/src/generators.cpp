#include "udpack/generators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "udpack/linalg.hpp"
#include "udpack/rng.hpp"

namespace udpack {

namespace {

// Iterates k over the integer box [-K, K]^n, calling fn(span k).
template <typename Fn>
void for_each_in_box(int n, long K, Fn&& fn) {
    std::vector<long> k(n, -K);
    for (;;) {
        fn(std::span<const long>(k));
        int axis = 0;
        while (axis < n) {
            if (++k[axis] <= K) break;
            k[axis] = -K;
            ++axis;
        }
        if (axis == n) break;
    }
}

double box_count(int n, long K) {
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= static_cast<double>(2 * K + 1);
    return c;
}

void lattice_point(const std::vector<double>& basis, int n, std::span<const long> k,
                   std::span<double> out) {
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    for (int j = 0; j < n; ++j) {
        const double c = static_cast<double>(k[j]);
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) out[i] += c * basis[j * n + i];
    }
}

}  // namespace

UDSet gen_lattice(const std::vector<double>& basis, int dim, double window_radius, double scale,
                  std::uint64_t enum_budget) {
    if (dim < 1) throw DomainError("gen_lattice: dimension must be >= 1");
    if (basis.size() != static_cast<std::size_t>(dim) * dim) {
        throw DomainError("gen_lattice: basis must be dim x dim");
    }
    if (window_radius < 0.0) throw DomainError("gen_lattice: negative window radius");
    if (scale < 1.0) throw DomainError("gen_lattice: scale must be >= 1");

    const double det = determinant(basis, dim);
    if (std::fabs(det) < 1e-12) throw DomainError("gen_lattice: singular basis");

    // sigma_min(B) >= 1 / ||B^{-1}||_F bounds the coefficient box for both phases.
    const std::vector<double> inv = inverse(basis, dim);
    const double sigma_min_lb = 1.0 / frobenius_norm(inv);

    double min_row = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        min_row = std::min(min_row, norm(std::span<const double>(basis.data() + i * dim,
                                                                 static_cast<std::size_t>(dim))));
    }

    // Phase 1: shortest nonzero vector by exhaustive search.
    const long K1 = static_cast<long>(std::ceil(min_row / sigma_min_lb)) + 1;
    if (box_count(dim, K1) > static_cast<double>(enum_budget)) {
        throw BudgetExceeded("gen_lattice: shortest-vector search budget exceeded (box " +
                             std::to_string(K1) + ")");
    }
    double shortest2 = std::numeric_limits<double>::infinity();
    std::vector<double> v(dim);
    for_each_in_box(dim, K1, [&](std::span<const long> k) {
        bool zero = true;
        for (long c : k) {
            if (c != 0) { zero = false; break; }
        }
        if (zero) return;
        lattice_point(basis, dim, k, v);
        shortest2 = std::min(shortest2, norm2(v));
    });
    const double shortest = std::sqrt(shortest2);

    // Phase 2: enumerate the rescaled lattice inside the window.
    const double unit = scale / shortest;  // multiply raw basis by this
    const long K2 = static_cast<long>(std::ceil(window_radius / (sigma_min_lb * unit))) + 1;
    if (box_count(dim, K2) > static_cast<double>(enum_budget)) {
        throw BudgetExceeded("gen_lattice: window enumeration budget exceeded (box " +
                             std::to_string(K2) + ")");
    }
    const double w2 = window_radius * window_radius;
    std::vector<double> flat;
    for_each_in_box(dim, K2, [&](std::span<const long> k) {
        lattice_point(basis, dim, k, v);
        for (auto& c : v) c *= unit;
        if (norm2(v) <= w2) flat.insert(flat.end(), v.begin(), v.end());
    });

    UDSet out = UDSet::validate_flat(std::move(flat), dim, window_radius);
    out.set_generator_tag("lattice");
    return out;
}

UDSet gen_named_lattice(std::string_view name, double window_radius, double scale) {
    auto make = [&](std::vector<double> basis, int n, const char* tag) {
        UDSet s = gen_lattice(basis, n, window_radius, scale);
        s.set_generator_tag(tag);
        return s;
    };
    if (name.size() == 2 && name[0] == 'Z' && name[1] >= '1' && name[1] <= '8') {
        const int n = name[1] - '0';
        std::vector<double> id(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) id[i * n + i] = 1.0;
        return make(std::move(id), n, "Z");
    }
    if (name == "hex") {
        const double s3 = std::sqrt(3.0);
        return make({1.0, 0.0, 0.5, s3 / 2.0}, 2, "hex");
    }
    if (name == "fcc") {
        return make({1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0}, 3, "fcc");
    }
    if (name == "d4") {
        return make({1, 1, 0, 0, 1, -1, 0, 0, 0, 1, -1, 0, 0, 0, 1, -1}, 4, "d4");
    }
    throw DomainError("gen_named_lattice: unknown lattice '" + std::string(name) +
                      "' (expected Z1..Z8, hex, fcc, d4)");
}

UDSet gen_rsa(int dim, double window_radius, std::uint64_t seed, std::uint64_t max_failures) {
    if (dim < 1) throw DomainError("gen_rsa: dimension must be >= 1");
    if (window_radius < 0.0) throw DomainError("gen_rsa: negative window radius");
    if (max_failures < 1) throw DomainError("gen_rsa: max_failures must be >= 1");

    Xoshiro256pp rng(derive_seed(seed, 0));
    detail::DynamicGrid grid(dim, 1.0);
    std::vector<double> candidate(dim);
    std::vector<int> hits;
    std::uint64_t failures = 0;
    while (failures < max_failures) {
        rng.in_ball(window_radius, candidate);
        hits.clear();
        grid.neighbors_within(candidate, 1.0 - kDefaultTolMin, hits);
        bool ok = true;
        for (int idx : hits) {
            if (dist2(grid.point(idx), candidate) < (1.0 - kDefaultTolMin) * (1.0 - kDefaultTolMin)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            grid.insert(candidate);
            failures = 0;
        } else {
            ++failures;
        }
    }
    std::vector<double> flat;
    flat.reserve(grid.size() * dim);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto p = grid.point(static_cast<int>(i));
        flat.insert(flat.end(), p.begin(), p.end());
    }
    UDSet out = UDSet::validate_flat(std::move(flat), dim, window_radius);
    out.set_generator_tag("rsa");
    return out;
}

}  // namespace udpack
