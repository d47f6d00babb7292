#include "udpack/marcin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "udpack/geometry.hpp"
#include "udpack/linalg.hpp"
#include "udpack/rng.hpp"

namespace udpack {

std::string to_string(SymdiffMethod m) {
    switch (m) {
        case SymdiffMethod::exact_pairing: return "exact-pairing";
        case SymdiffMethod::planar_exact: return "planar-exact";
        case SymdiffMethod::montecarlo: return "montecarlo";
    }
    return "?";
}

std::string to_string(EquivalenceVerdict v) {
    switch (v) {
        case EquivalenceVerdict::equivalent: return "equivalent";
        case EquivalenceVerdict::distinct: return "distinct";
        case EquivalenceVerdict::indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

constexpr double kCoincident = 1e-12;
constexpr double kOverlapSlack = 1e-9;  // ignore tangencies closer than this to distance 1

std::string coords_str(std::span<const double> p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

void check_common_dim(const UDSet& a, const UDSet& b) {
    if (a.dim() != b.dim()) throw DomainError("symdiff: dimension mismatch");
}

double safe_radius(const UDSet& a, const UDSet& b) {
    return std::min(a.window_radius(), b.window_radius()) - 0.5;
}

// ---- exact pairing --------------------------------------------------------

struct PairingData {
    std::vector<double> midpoint_norms;  // sorted ascending
    std::vector<double> prefix;          // prefix sums of per-pair contributions
};

// Matches every point of either packing (inside the safe radius) with its
// unique partner at distance < 1/2 and precomputes per-pair contributions
// 2 (v_ball - lens(d)) keyed by the pair midpoint norm.
PairingData build_pairing(const UDSet& a, const UDSet& b) {
    const int n = a.dim();
    const double r_safe = safe_radius(a, b);
    const double vb = ball_volume(n, 0.5);

    std::vector<std::pair<double, double>> pairs;  // (midpoint norm, contribution)
    std::vector<bool> b_matched(b.size(), false);
    std::vector<int> hits;
    Point mid(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = a.point(i);
        const double pn = norm(p);
        hits.clear();
        if (!b.is_empty()) b.grid().neighbors_within(p, 1.0 - kOverlapSlack, hits);
        int partner = -1;
        for (int j : hits) {
            const double d = dist(p, b.point(j));
            if (d <= 0.5) {
                if (partner >= 0) {
                    // only possible with both partners at distance exactly 1/2
                    throw MethodInapplicable("exact-pairing: ambiguous pairing at " +
                                             coords_str(p) + " (two candidates at distance 1/2)");
                }
                partner = j;
            }
        }
        if (partner < 0) {
            if (pn <= r_safe) {
                throw MethodInapplicable("exact-pairing: unmatched point " + coords_str(p) +
                                         " of the first packing (no partner within 1/2)");
            }
            continue;
        }
        // Foreign overlaps: any other hit is a ball overlapping a non-partner.
        for (int j : hits) {
            if (j == partner) continue;
            if (pn <= r_safe || norm(b.point(j)) <= r_safe) {
                throw MethodInapplicable("exact-pairing: ball at " + coords_str(p) +
                                         " overlaps non-partner ball at " +
                                         coords_str(b.point(j)));
            }
        }
        b_matched[partner] = true;
        const double d = dist(p, b.point(partner));
        for (int k = 0; k < n; ++k) mid[k] = 0.5 * (p[k] + b.point(partner)[k]);
        pairs.emplace_back(norm(mid), 2.0 * (vb - lens_volume(n, 0.5, 0.5, d)));
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!b_matched[j] && norm(b.point(j)) <= r_safe) {
            throw MethodInapplicable("exact-pairing: unmatched point " + coords_str(b.point(j)) +
                                     " of the second packing (no partner within 1/2)");
        }
    }

    std::sort(pairs.begin(), pairs.end());
    PairingData data;
    data.midpoint_norms.reserve(pairs.size());
    data.prefix.reserve(pairs.size());
    double acc = 0.0;
    for (const auto& [mn, c] : pairs) {
        data.midpoint_norms.push_back(mn);
        acc += c;
        data.prefix.push_back(acc);
    }
    return data;
}

double pairing_symdiff_at(const PairingData& d, double t) {
    const auto it = std::upper_bound(d.midpoint_norms.begin(), d.midpoint_norms.end(), t);
    const auto k = it - d.midpoint_norms.begin();
    return k == 0 ? 0.0 : d.prefix[k - 1];
}

// ---- planar exact ---------------------------------------------------------

struct CrossEdge {
    double lens;        // full lens volume (non-coincident)
    double min_norm;    // smaller of the two center norms
    double max_norm;
    bool coincident;    // d < kCoincident: edge term is vol(ball ∩ tB)
};

struct PlanarData {
    std::vector<double> norms_a;  // sorted
    std::vector<double> norms_b;  // sorted
    std::vector<CrossEdge> edges;
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int x, int y) { parent[find(x)] = find(y); }
};

PlanarData build_planar(const UDSet& a, const UDSet& b) {
    if (a.dim() != 2) throw MethodInapplicable("planar-exact: only available in dimension 2");
    const int n = 2;
    PlanarData data;
    data.norms_a.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) data.norms_a[i] = norm(a.point(i));
    data.norms_b.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) data.norms_b[j] = norm(b.point(j));

    UnionFind uf(a.size() + b.size());
    std::vector<int> comp_size;
    std::vector<int> hits;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = a.point(i);
        hits.clear();
        if (!b.is_empty()) b.grid().neighbors_within(p, 1.0 - kOverlapSlack, hits);
        for (int j : hits) {
            const double d = dist(p, b.point(j));
            CrossEdge e;
            e.coincident = d < kCoincident;
            e.lens = e.coincident ? 0.0 : lens_volume(n, 0.5, 0.5, d);
            e.min_norm = std::min(data.norms_a[i], data.norms_b[j]);
            e.max_norm = std::max(data.norms_a[i], data.norms_b[j]);
            data.edges.push_back(e);
            uf.unite(static_cast<int>(i), static_cast<int>(a.size() + j));
        }
    }
    // Component size check: same-set balls never overlap, so intersection
    // terms never stack, but the exact regime is contractually limited to
    // small overlap components.
    std::vector<int> size_of(a.size() + b.size(), 0);
    for (std::size_t v = 0; v < a.size() + b.size(); ++v) ++size_of[uf.find(static_cast<int>(v))];
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (size_of[uf.find(static_cast<int>(i))] > 3) {
            throw MethodInapplicable("planar-exact: overlap component with more than 3 balls near " +
                                     coords_str(a.point(i)));
        }
    }
    std::sort(data.norms_a.begin(), data.norms_a.end());
    std::sort(data.norms_b.begin(), data.norms_b.end());
    return data;
}

double vertex_mass_at(const std::vector<double>& norms, double t) {
    const double vb = ball_volume(2, 0.5);
    const auto full_end = std::upper_bound(norms.begin(), norms.end(), t - 0.5);
    double mass = static_cast<double>(full_end - norms.begin()) * vb;
    const auto band_end = std::lower_bound(full_end, norms.end(), t + 0.5);
    for (auto it = full_end; it != band_end; ++it) mass += lens_volume(2, 0.5, t, *it);
    return mass;
}

double planar_symdiff_at(const PlanarData& data, double t) {
    double mass = vertex_mass_at(data.norms_a, t) + vertex_mass_at(data.norms_b, t);
    for (const auto& e : data.edges) {
        double cross;
        if (e.coincident) {
            cross = ball_in_sphere_volume(2, e.min_norm, t);
        } else if (e.min_norm + 0.5 <= t) {
            cross = e.lens;  // lens lies inside tB (it is contained in the inner ball)
        } else if (e.max_norm - 0.5 >= t) {
            cross = 0.0;  // lens lies outside tB
        } else {
            throw MethodInapplicable(
                "planar-exact: cross lens straddles the sphere of radius " + std::to_string(t));
        }
        mass -= 2.0 * cross;
    }
    return std::max(mass, 0.0);
}

// ---- monte carlo ----------------------------------------------------------

SymdiffValue mc_symdiff_at(const UDSet& a, const UDSet& b, double t, std::int64_t samples,
                           std::uint64_t stream_seed) {
    const int n = a.dim();
    Xoshiro256pp rng(stream_seed);
    std::vector<double> x(n);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        rng.in_ball(t, x);
        if (a.indicator(x) != b.indicator(x)) ++hits;
    }
    const double f = static_cast<double>(hits) / static_cast<double>(samples);
    const double vol = ball_volume(n, t);
    SymdiffValue v;
    v.volume = f * vol;
    v.stderr_value = vol * std::sqrt(std::max(f * (1.0 - f), 0.0) / static_cast<double>(samples));
    return v;
}

}  // namespace

SymdiffValue symdiff_volume(const UDSet& a, const UDSet& b, double t, const MarcinOptions& opts) {
    check_common_dim(a, b);
    if (!(t > 0.0)) throw DomainError("symdiff_volume: t must be positive");
    if (t > safe_radius(a, b) + 1e-9) {
        throw DomainError("symdiff_volume: t exceeds safe window (need both windows >= t + 1/2)");
    }
    switch (opts.method) {
        case SymdiffMethod::exact_pairing: {
            const auto pairing = build_pairing(a, b);
            return {pairing_symdiff_at(pairing, t), 0.0};
        }
        case SymdiffMethod::planar_exact: {
            const auto planar = build_planar(a, b);
            return {planar_symdiff_at(planar, t), 0.0};
        }
        case SymdiffMethod::montecarlo:
            if (opts.samples < 1) throw DomainError("symdiff_volume: need samples >= 1");
            return mc_symdiff_at(a, b, t, opts.samples, derive_seed(opts.seed, 0));
    }
    throw DomainError("symdiff_volume: unknown method");
}

MdistResult mdist(const UDSet& a, const UDSet& b, double p, const std::vector<double>& t_grid,
                  const MarcinOptions& opts) {
    check_common_dim(a, b);
    if (p < 1.0) throw DomainError("mdist: p must be >= 1");
    check_grid_within_window(t_grid, std::min(a.window_radius(), b.window_radius()));

    const int n = a.dim();
    MdistResult result;
    result.profile.ts = t_grid;
    result.profile.p = p;
    result.profile.method = opts.method == SymdiffMethod::montecarlo ? ProfileMethod::montecarlo
                                                                     : ProfileMethod::volumetric;
    result.profile.values.reserve(t_grid.size());

    const auto root = [&](double ratio) {
        return p == 1.0 ? ratio : std::pow(ratio, 1.0 / p);
    };

    if (opts.method == SymdiffMethod::exact_pairing) {
        const auto pairing = build_pairing(a, b);
        for (double t : t_grid) {
            result.profile.values.push_back(
                root(pairing_symdiff_at(pairing, t) / ball_volume(n, t)));
        }
    } else if (opts.method == SymdiffMethod::planar_exact) {
        const auto planar = build_planar(a, b);
        for (double t : t_grid) {
            result.profile.values.push_back(root(planar_symdiff_at(planar, t) / ball_volume(n, t)));
        }
    } else {
        if (opts.samples < 1) throw DomainError("mdist: need samples >= 1");
        result.profile.stderrs.reserve(t_grid.size());
        for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
            const auto v = mc_symdiff_at(a, b, t_grid[gi], opts.samples, derive_seed(opts.seed, gi));
            const double vol = ball_volume(n, t_grid[gi]);
            const double f = v.volume / vol;
            result.profile.values.push_back(root(f));
            const double se = v.stderr_value / vol;
            result.profile.stderrs.push_back(
                p == 1.0 || f == 0.0 ? se : se * std::pow(f, 1.0 / p - 1.0) / p);
        }
    }
    result.estimate = asymptotic_density(result.profile, opts.tail_fraction, opts.conv_tol);
    return result;
}

EquivalenceResult equivalent(const UDSet& a, const UDSet& b, double p, double tol,
                             const std::vector<double>& t_grid, const MarcinOptions& opts) {
    if (!(tol >= 0.0)) throw DomainError("equivalent: tol must be >= 0");
    EquivalenceResult r;
    r.tol = tol;
    r.certificate = mdist(a, b, p, t_grid, opts);
    if (!r.certificate.estimate.converged) {
        r.verdict = EquivalenceVerdict::indeterminate;
    } else if (r.certificate.estimate.value <= tol) {
        r.verdict = EquivalenceVerdict::equivalent;
    } else {
        r.verdict = EquivalenceVerdict::distinct;
    }
    return r;
}

}  // namespace udpack
