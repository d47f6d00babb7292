#include "udpack/saturate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udpack/linalg.hpp"

namespace udpack {

std::string to_string(SaturationStatus s) {
    switch (s) {
        case SaturationStatus::saturated: return "saturated";
        case SaturationStatus::not_saturated: return "not-saturated";
        case SaturationStatus::indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clearance_of(const detail::DynamicGrid& grid, std::span<const double> x) {
    return grid.size() == 0 ? kInf : grid.nearest_distance(x);
}

// Local maximization of the distance-to-set function by axis pattern search,
// clamped to the ball of the given radius.
Point refine_seed(const detail::DynamicGrid& grid, Point x, double region, double step0) {
    const int n = static_cast<int>(x.size());
    if (grid.size() == 0) return x;
    double step = step0;
    double best = clearance_of(grid, x);
    Point trial = x;
    int iters = 0;
    while (step > 1e-7 && iters < 200) {
        ++iters;
        bool improved = false;
        for (int axis = 0; axis < n && !improved; ++axis) {
            for (double dir : {+1.0, -1.0}) {
                trial = x;
                trial[axis] += dir * step;
                const double nrm = norm(trial);
                if (nrm > region) {
                    for (auto& c : trial) c *= region / nrm;
                }
                const double v = clearance_of(grid, trial);
                if (v > best) {
                    best = v;
                    x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return x;
}

// Circumcenter of n+1 points in R^n (solution of the equidistance system);
// empty when the simplex is degenerate.
std::optional<Point> circumcenter(const std::vector<std::span<const double>>& pts) {
    const int n = static_cast<int>(pts.size()) - 1;
    std::vector<double> A(static_cast<std::size_t>(n) * n);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
        double b = 0.0;
        for (int k = 0; k < n; ++k) {
            A[i * n + k] = 2.0 * (pts[i + 1][k] - pts[0][k]);
            b += pts[i + 1][k] * pts[i + 1][k] - pts[0][k] * pts[0][k];
        }
        rhs[i] = b;
    }
    if (std::fabs(determinant(A, n)) < 1e-9) return std::nullopt;
    const auto inv = inverse(std::move(A), n);
    Point c(n);
    mat_apply(inv, n, rhs, c);
    return c;
}

struct Seeds {
    std::vector<Point> locations;
    std::vector<double> clearances;
};

// All grid points of the given pitch inside the region ball (0 included).
void grid_seeds(const detail::DynamicGrid& grid, int n, double region, double pitch, Seeds& out) {
    const long K = static_cast<long>(std::floor(region / pitch));
    std::vector<long> k(n, -K);
    Point x(n);
    const double r2 = region * region;
    for (;;) {
        double nn = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<double>(k[i]) * pitch;
            nn += x[i] * x[i];
        }
        if (nn <= r2) {
            out.locations.push_back(x);
            out.clearances.push_back(clearance_of(grid, x));
        }
        int axis = 0;
        while (axis < n) {
            if (++k[axis] <= K) break;
            k[axis] = -K;
            ++axis;
        }
        if (axis == n) break;
    }
}

// Circumcenters of (n+1)-tuples of mutually close points: the candidates for
// local maxima of the distance function (Voronoi-vertex-like seeds). n <= 3.
void circumcenter_seeds(const detail::DynamicGrid& grid, int n, double region,
                        std::uint64_t budget, Seeds& out) {
    if (n > 3 || grid.size() < static_cast<std::size_t>(n) + 1) return;
    const double reach = 2.5;  // relevant circumradii are ~1; farther tuples cannot matter
    std::vector<int> nb;
    std::uint64_t tuples = 0;
    std::vector<std::span<const double>> pts(n + 1);
    std::vector<int> choose(n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = grid.point(static_cast<int>(i));
        if (norm(p) > region + reach) continue;
        nb.clear();
        grid.neighbors_within(p, reach, nb);
        // tuples (i, j_1 < j_2 < ... < j_n) with all j > i to avoid repeats
        std::vector<int> cand;
        for (int j : nb) {
            if (j > static_cast<int>(i)) cand.push_back(j);
        }
        const int c = static_cast<int>(cand.size());
        if (c < n) continue;
        for (int a = 0; a < n; ++a) choose[a] = a;
        for (;;) {
            if (++tuples > budget) return;
            pts[0] = p;
            for (int a = 0; a < n; ++a) pts[a + 1] = grid.point(cand[choose[a]]);
            if (auto cc = circumcenter(pts)) {
                if (norm(*cc) <= region) {
                    out.locations.push_back(std::move(*cc));
                    out.clearances.push_back(clearance_of(grid, out.locations.back()));
                }
            }
            int a = n - 1;
            while (a >= 0 && choose[a] == c - n + a) --a;
            if (a < 0) break;
            ++choose[a];
            for (int b2 = a + 1; b2 < n; ++b2) choose[b2] = choose[b2 - 1] + 1;
        }
    }
}

struct BestCandidate {
    bool found = false;
    Point location;
    double clearance = 0.0;
};

// Max clearance with lex-smallest tie-break (ties within 1e-9).
void consider(BestCandidate& best, const Point& loc, double clr) {
    constexpr double tie = 1e-9;
    if (!best.found || clr > best.clearance + tie) {
        best = {true, loc, clr};
        return;
    }
    if (clr >= best.clearance - tie && lex_less(loc, best.location)) {
        best.location = loc;
        best.clearance = std::max(best.clearance, clr);
    }
}

detail::DynamicGrid grid_of(const UDSet& set) {
    detail::DynamicGrid g(set.dim(), 1.0);
    for (std::size_t i = 0; i < set.size(); ++i) g.insert(set.point(i));
    return g;
}

// Multilevel pruned scan. Candidates at pitch p own boxes of side p; a box
// can hide a hole only if clearance(center) + p sqrt(n) >= 1 (the distance
// function is 1-Lipschitz), so only those candidates spawn the 2^n children
// of the next level. Candidates slightly outside the region keep the boxes
// covering the whole region ball; witnesses themselves must lie inside it.
HoleSearchResult find_hole_on(const detail::DynamicGrid& grid, int n, double region,
                              const FindHoleOptions& opts) {
    HoleSearchResult result;
    const double hole_threshold = 1.0 - kDefaultTolMin;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double pitch = opts.initial_pitch;

    // Level-0 candidates: grid of the initial pitch covering the region ball.
    Seeds seeds;
    grid_seeds(grid, n, region + pitch * sqrt_n, pitch, seeds);
    circumcenter_seeds(grid, n, region, opts.circumcenter_budget, seeds);

    for (;;) {
        double c_max = 0.0;
        for (double c : seeds.clearances) c_max = std::max(c_max, c);

        // Refine the most promising in-region seeds by local maximization.
        std::vector<int> order;
        order.reserve(seeds.locations.size());
        for (std::size_t i = 0; i < seeds.locations.size(); ++i) {
            if (norm(seeds.locations[i]) <= region) order.push_back(static_cast<int>(i));
        }
        const int top = std::min<int>(opts.refine_top, static_cast<int>(order.size()));
        std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](int x, int y) {
            return seeds.clearances[x] > seeds.clearances[y];
        });
        BestCandidate best;
        for (int idx : order) consider(best, seeds.locations[idx], seeds.clearances[idx]);
        for (int r = 0; r < top; ++r) {
            Point refined = refine_seed(grid, seeds.locations[order[r]], region, pitch * 0.5);
            const double c = clearance_of(grid, refined);
            c_max = std::max(c_max, c);
            consider(best, refined, c);
        }

        result.final_pitch = pitch;
        result.max_clearance = std::max(result.max_clearance, c_max);
        if (best.found && best.clearance >= hole_threshold) {
            result.witness = HoleWitness{best.location, best.clearance};
            result.certified = false;
            return result;
        }
        if (pitch <= (1.0 - result.max_clearance) / sqrt_n) {
            result.certified = true;
            return result;
        }
        if (pitch * 0.5 < opts.min_pitch) {
            result.certified = false;  // resolution budget hit without a certificate
            return result;
        }

        // Children of candidates whose box could still hide a hole.
        Seeds next;
        const double keep_threshold = hole_threshold - pitch * sqrt_n;
        Point child(n);
        for (std::size_t i = 0; i < seeds.locations.size(); ++i) {
            if (seeds.clearances[i] < keep_threshold) continue;
            const double off = pitch * 0.25;
            const auto& g = seeds.locations[i];
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                for (int k = 0; k < n; ++k) {
                    child[k] = g[k] + ((mask >> k) & 1u ? off : -off);
                }
                next.locations.push_back(child);
                next.clearances.push_back(clearance_of(grid, child));
            }
        }
        seeds = std::move(next);
        pitch *= 0.5;
        if (seeds.locations.empty()) {
            // every box was certified hole-free at the parent level
            result.final_pitch = pitch;
            result.certified = true;
            return result;
        }
    }
}

}  // namespace

HoleSearchResult find_hole(const UDSet& set, double region_radius, const FindHoleOptions& opts) {
    if (set.dim() > 12) {
        throw DomainError("find_hole: grid search is not practical beyond dimension 12");
    }
    if (region_radius < 0.0) throw DomainError("find_hole: negative region radius");
    if (region_radius > set.window_radius() - 1.0 + 1e-9) {
        throw DomainError("find_hole: region must satisfy region <= window - 1 (got region " +
                          std::to_string(region_radius) + ", window " +
                          std::to_string(set.window_radius()) + ")");
    }
    const auto grid = grid_of(set);
    return find_hole_on(grid, set.dim(), region_radius, opts);
}

UDSet saturate_greedy(const UDSet& set, double region_radius, std::uint64_t seed,
                      const FindHoleOptions& opts) {
    (void)seed;  // tie-breaking is lexicographic, hence deterministic without randomness
    if (set.dim() > 12) {
        throw DomainError("saturate_greedy: grid search is not practical beyond dimension 12");
    }
    if (region_radius > set.window_radius() - 1.0 + 1e-9) {
        throw DomainError("saturate_greedy: region must satisfy region <= window - 1");
    }
    const int n = set.dim();
    const double hole_threshold = 1.0 - kDefaultTolMin;
    detail::DynamicGrid grid = grid_of(set);

    // Candidate sweep at the seed pitch with incremental clearance updates:
    // inserting q only lowers clearances within the pre-insertion maximum.
    Seeds cands;
    grid_seeds(grid, n, region_radius, opts.initial_pitch, cands);
    detail::DynamicGrid cand_index(n, 1.0);
    for (const auto& loc : cands.locations) cand_index.insert(loc);

    auto sweep = [&]() {
        for (;;) {
            double c_max = 0.0;
            int best = -1;
            for (std::size_t i = 0; i < cands.locations.size(); ++i) {
                const double c = cands.clearances[i];
                if (c > c_max + 1e-9) {
                    c_max = c;
                    best = static_cast<int>(i);
                } else if (best >= 0 && c >= c_max - 1e-9 &&
                           lex_less(cands.locations[i], cands.locations[best])) {
                    best = static_cast<int>(i);
                }
            }
            if (best < 0 || c_max < hole_threshold) return;
            const Point q = cands.locations[best];
            grid.insert(q);
            const double update_radius = std::isfinite(c_max) ? c_max + 1e-6 : kInf;
            if (std::isfinite(update_radius)) {
                std::vector<int> touched;
                cand_index.neighbors_within(q, update_radius, touched);
                for (int idx : touched) {
                    cands.clearances[idx] =
                        std::min(cands.clearances[idx], dist(cands.locations[idx], q));
                }
            } else {
                for (std::size_t i = 0; i < cands.locations.size(); ++i) {
                    cands.clearances[i] =
                        std::min(cands.clearances[i], dist(cands.locations[i], q));
                }
            }
        }
    };

    for (;;) {
        sweep();
        // Off-grid holes: full search with refinement and pitch subdivision.
        const auto res = find_hole_on(grid, n, region_radius, opts);
        if (!res.witness) break;
        grid.insert(res.witness->location);
        for (std::size_t i = 0; i < cands.locations.size(); ++i) {
            cands.clearances[i] =
                std::min(cands.clearances[i], dist(cands.locations[i], res.witness->location));
        }
    }

    std::vector<double> flat;
    flat.reserve(grid.size() * n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto p = grid.point(static_cast<int>(i));
        flat.insert(flat.end(), p.begin(), p.end());
    }
    UDSet out = UDSet::validate_flat(std::move(flat), n, set.window_radius(), set.tol_min());
    out.set_generator_tag(set.generator_tag().empty() ? "saturated"
                                                      : set.generator_tag() + "+saturated");
    return out;
}

namespace {

// Candidate insertion locations near the removed cluster: a grid of the given
// pitch over (union of unit balls around S) ∩ B(0, region), plus refined local
// maxima of the distance function.
std::vector<Point> local_candidates(const detail::DynamicGrid& work,
                                    const std::vector<Point>& removed, double region,
                                    double pitch, int refine_top) {
    const int n = static_cast<int>(removed.front().size());
    std::vector<Point> cands;
    Point lo = removed.front(), hi = removed.front();
    for (const auto& s : removed) {
        for (int k = 0; k < n; ++k) {
            lo[k] = std::min(lo[k], s[k] - 1.0);
            hi[k] = std::max(hi[k], s[k] + 1.0);
        }
    }
    std::vector<long> klo(n), khi(n), k(n);
    for (int i = 0; i < n; ++i) {
        klo[i] = static_cast<long>(std::ceil(lo[i] / pitch));
        khi[i] = static_cast<long>(std::floor(hi[i] / pitch));
        k[i] = klo[i];
    }
    auto near_removed = [&](const Point& x) {
        for (const auto& s : removed) {
            if (dist2(x, s) <= 1.0) return true;
        }
        return false;
    };
    Point x(n);
    for (;;) {
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(k[i]) * pitch;
        if (near_removed(x) && norm(x) <= region) cands.push_back(x);
        int axis = 0;
        while (axis < n) {
            if (++k[axis] <= khi[axis]) break;
            k[axis] = klo[axis];
            ++axis;
        }
        if (axis == n) break;
    }
    std::vector<std::pair<double, int>> ranked;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        ranked.emplace_back(clearance_of(work, cands[i]), static_cast<int>(i));
    }
    const int top = std::min<int>(refine_top, static_cast<int>(ranked.size()));
    std::partial_sort(ranked.begin(), ranked.begin() + top, ranked.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int r = 0; r < top; ++r) {
        Point refined = refine_seed(work, cands[ranked[r].second], region, pitch * 0.5);
        if (near_removed(refined)) cands.push_back(std::move(refined));
    }
    return cands;
}

// Insertion search after removing S: want points pairwise >= 1 and >= 1 from
// everything kept. Branches over the choice of the first insertion (a pure
// greedy first pick can block the remaining ones), then fills greedily; the
// candidate grid dominates an exhaustive scan at the same pitch for want = 2.
std::vector<Point> local_insertions(const detail::DynamicGrid& remaining,
                                    const std::vector<Point>& removed, double region, int want,
                                    double pitch, int refine_top, int max_first_choices) {
    if (removed.empty()) return {};
    const int n = static_cast<int>(removed.front().size());
    const double hole_threshold = 1.0 - kDefaultTolMin;

    detail::DynamicGrid work(n, 1.0);
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        work.insert(remaining.point(static_cast<int>(i)));
    }
    const auto cands = local_candidates(work, removed, region, pitch, refine_top);

    auto greedy_fill = [&](std::vector<Point> inserted) {
        while (static_cast<int>(inserted.size()) < want) {
            BestCandidate best;
            for (const auto& c : cands) {
                double clr = clearance_of(work, c);
                for (const auto& ins : inserted) clr = std::min(clr, dist(c, ins));
                consider(best, c, clr);
            }
            if (!best.found || best.clearance < hole_threshold) break;
            inserted.push_back(best.location);
        }
        return inserted;
    };

    if (want <= 1) {
        auto r = greedy_fill({});
        return static_cast<int>(r.size()) >= want ? r : std::vector<Point>{};
    }

    // First-choice branching, most promising first.
    std::vector<std::pair<double, int>> viable;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const double clr = clearance_of(work, cands[i]);
        if (clr >= hole_threshold) viable.emplace_back(clr, static_cast<int>(i));
    }
    std::sort(viable.begin(), viable.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    if (static_cast<int>(viable.size()) > max_first_choices) viable.resize(max_first_choices);
    for (const auto& [clr, idx] : viable) {
        auto r = greedy_fill({cands[idx]});
        if (static_cast<int>(r.size()) >= want) return r;
    }
    return {};
}

}  // namespace

SaturationVerdict m_saturation_check(const UDSet& set, int m, double region_radius,
                                     double cluster_radius, const MSatOptions& opts) {
    if (m < 1 || m > 3) throw DomainError("m_saturation_check: m must be in {1, 2, 3}");
    if (!(cluster_radius > 0.0)) throw DomainError("m_saturation_check: cluster_radius <= 0");
    SaturationVerdict verdict;
    verdict.m = m;

    const auto hole = find_hole(set, region_radius, opts.hole);
    verdict.pitch = hole.final_pitch;
    if (hole.witness) {
        // Not even 1-saturated; removing any m-1 balls and re-inserting them
        // plus the hole is a valid m-replacement witness.
        verdict.status = SaturationStatus::not_saturated;
        std::vector<std::pair<double, std::size_t>> by_dist;
        for (std::size_t i = 0; i < set.size(); ++i) {
            by_dist.emplace_back(dist(set.point(i), hole.witness->location), i);
        }
        std::sort(by_dist.begin(), by_dist.end());
        for (int k = 0; k < m - 1 && k < static_cast<int>(by_dist.size()); ++k) {
            verdict.removed.push_back(set.point_copy(by_dist[k].second));
            verdict.inserted.push_back(set.point_copy(by_dist[k].second));
        }
        verdict.inserted.push_back(hole.witness->location);
        verdict.note = "hole with clearance " + std::to_string(hole.witness->clearance);
        return verdict;
    }
    if (m == 1) {
        verdict.status =
            hole.certified ? SaturationStatus::saturated : SaturationStatus::indeterminate;
        if (!hole.certified) verdict.note = "pitch floor reached without certificate";
        return verdict;
    }

    // 1-saturated at this resolution; try (m-1)-removals.
    const auto base_grid = grid_of(set);
    std::vector<std::size_t> in_region;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (norm(set.point(i)) <= region_radius) in_region.push_back(i);
    }

    std::vector<std::vector<std::size_t>> subsets;
    if (m == 2) {
        for (auto i : in_region) subsets.push_back({i});
    } else {
        for (std::size_t a = 0; a < in_region.size(); ++a) {
            for (std::size_t b = a + 1; b < in_region.size(); ++b) {
                if (dist(set.point(in_region[a]), set.point(in_region[b])) <=
                    2.0 * cluster_radius) {
                    subsets.push_back({in_region[a], in_region[b]});
                }
            }
        }
    }
    if (subsets.size() > opts.max_subsets) {
        verdict.status = SaturationStatus::indeterminate;
        verdict.note = "combinatorial budget exceeded (" + std::to_string(subsets.size()) +
                       " subsets > " + std::to_string(opts.max_subsets) + ")";
        return verdict;
    }

    for (const auto& subset : subsets) {
        std::vector<Point> removed;
        for (auto idx : subset) removed.push_back(set.point_copy(idx));
        detail::DynamicGrid remaining(set.dim(), 1.0);
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (std::find(subset.begin(), subset.end(), i) == subset.end()) {
                remaining.insert(set.point(i));
            }
        }
        auto inserted = local_insertions(remaining, removed, region_radius, m, opts.local_pitch,
                                         opts.local_refine_top, opts.max_first_choices);
        if (static_cast<int>(inserted.size()) >= m) {
            verdict.status = SaturationStatus::not_saturated;
            verdict.removed = std::move(removed);
            verdict.inserted = std::move(inserted);
            return verdict;
        }
    }
    verdict.status = SaturationStatus::saturated;
    verdict.note = "all " + std::to_string(subsets.size()) + " local removals failed";
    return verdict;
}

}  // namespace udpack
