#include "udpack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udpack/linalg.hpp"

namespace udpack {

ProbeFunction default_probe_function() {
    ProbeFunction f;
    f.name = "tent";
    f.eval = [](std::span<const double> t) {
        const double nrm = norm(t);
        return nrm >= 0.5 ? 0.0 : 1.0 - 2.0 * nrm;
    };
    return f;
}

ProbeCollection ProbeCollection::validate(std::vector<Point> centers, std::vector<double> radii,
                                          double tol) {
    if (centers.size() != radii.size()) {
        throw DomainError("probe collection: centers/radii size mismatch");
    }
    for (double r : radii) {
        if (!(r > 0.0) || !(r < 0.5)) {
            throw DomainError("probe collection: radii must lie strictly inside (0, 1/2)");
        }
    }
    for (std::size_t q = 0; q < centers.size(); ++q) {
        if (centers[q].size() != centers.front().size()) {
            throw DomainError("probe collection: mixed center dimensions");
        }
        for (std::size_t k = q + 1; k < centers.size(); ++k) {
            if (dist(centers[q], centers[k]) < 1.0 - tol) {
                throw DomainError("probe collection: centers closer than 1 apart");
            }
        }
    }
    ProbeCollection c;
    c.centers_ = std::move(centers);
    c.radii_ = std::move(radii);
    return c;
}

namespace {

// eps * f((lambda - c) / eps) summed over the (at most one) contributing point.
double phi_ball(const UDSet& set, std::span<const double> c, double eps, const ProbeFunction& f,
                std::vector<int>& scratch) {
    if (set.is_empty()) return 0.0;
    scratch.clear();
    set.grid().neighbors_within(c, eps, scratch);
    double value = 0.0;
    int contributors = 0;
    Point arg(c.size());
    for (int idx : scratch) {
        const auto p = set.point(idx);
        for (std::size_t k = 0; k < c.size(); ++k) arg[k] = (p[k] - c[k]) / eps;
        const double fv = f.eval(arg);
        if (fv > 0.0) {
            ++contributors;
            value += eps * fv;
        }
    }
    if (contributors > 1) {
        throw DomainError("phi: more than one point inside a probe ball — radii must be < 1/2 "
                          "and the set uniformly discrete");
    }
    return value;
}

struct Candidate {
    int idx;
    double gain;    // |a_q|
    double weight;  // ||alpha - c_q||
};

// Descending a/w with stable index tie-break; cross-multiplied to keep w = 0 exact.
bool ratio_greater(const Candidate& x, const Candidate& y) {
    const double lhs = x.gain * y.weight;
    const double rhs = y.gain * x.weight;
    if (lhs != rhs) return lhs > rhs;
    return x.idx < y.idx;
}

// Greedy prefix maximization of (sum gain) / (base + sum weight); the chosen
// subset's value is re-evaluated in index order (canonical form).
void solve_class(std::vector<Candidate>& cands, double base, RatioSolution& best) {
    if (cands.empty()) return;
    std::sort(cands.begin(), cands.end(), ratio_greater);
    double num = 0.0;
    double den = base;
    std::vector<int> sel;
    for (const auto& c : cands) {
        const double cand_ratio = (num + c.gain) / (den + c.weight);
        if (cand_ratio > num / den) {
            num += c.gain;
            den += c.weight;
            sel.push_back(c.idx);
        } else {
            break;
        }
    }
    if (sel.empty()) return;
    std::sort(sel.begin(), sel.end());
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        return x.idx < y.idx;
    });
    double cnum = 0.0;
    double cden = base;
    for (const auto& c : cands) {
        if (std::binary_search(sel.begin(), sel.end(), c.idx)) {
            cnum += c.gain;
            cden += c.weight;
        }
    }
    const double value = cnum / cden;
    if (value > best.value) {
        best.value = value;
        best.selected = std::move(sel);
    }
}

}  // namespace

double phi(const UDSet& set, const ProbeCollection& collection, const ProbeFunction& f) {
    std::vector<int> scratch;
    double total = 0.0;
    for (std::size_t q = 0; q < collection.size(); ++q) {
        if (!set.is_empty() &&
            collection.center(q).size() != static_cast<std::size_t>(set.dim())) {
            throw DomainError("phi: center dimension mismatch");
        }
        total += phi_ball(set, collection.center(q), collection.radius(q), f, scratch);
    }
    return total;
}

RatioSolution probe_pseudometric(const UDSet& a, const UDSet& b, const Point& alpha,
                                 const ProbeCollection& pool, const ProbeFunction& f) {
    RatioSolution best;
    if (pool.size() == 0) return best;
    const double base = 0.5 + norm(alpha);

    std::vector<Candidate> pos, neg;
    std::vector<int> scratch;
    for (std::size_t q = 0; q < pool.size(); ++q) {
        const double diff = phi_ball(a, pool.center(q), pool.radius(q), f, scratch) -
                            phi_ball(b, pool.center(q), pool.radius(q), f, scratch);
        if (diff == 0.0) continue;  // zero numerator only inflates the denominator
        Candidate c{static_cast<int>(q), std::fabs(diff), dist(alpha, pool.center(q))};
        (diff > 0.0 ? pos : neg).push_back(c);
    }
    solve_class(pos, base, best);
    solve_class(neg, base, best);
    return best;
}

namespace {

// Candidate centers: points of both sets, then midpoints of close cross
// pairs, deduplicated so the kept centers stay pairwise >= 1 apart.
std::vector<Point> candidate_centers(const UDSet& a, const UDSet& b, double r_margin,
                                     int max_centers) {
    std::vector<Point> kept;
    auto try_keep = [&](Point p) {
        if (static_cast<int>(kept.size()) >= max_centers) return;
        if (norm(p) > r_margin) return;
        for (const auto& q : kept) {
            if (dist(p, q) < 1.0 - kDefaultTolMin) return;
        }
        kept.push_back(std::move(p));
    };
    for (std::size_t i = 0; i < a.size(); ++i) try_keep(a.point_copy(i));
    for (std::size_t j = 0; j < b.size(); ++j) try_keep(b.point_copy(j));
    std::vector<int> hits;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = a.point(i);
        hits.clear();
        if (!b.is_empty()) b.grid().neighbors_within(p, 1.0, hits);
        for (int j : hits) {
            const auto q = b.point(j);
            if (dist2(p, q) == 0.0) continue;
            Point mid(p.size());
            for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (p[k] + q[k]);
            try_keep(std::move(mid));
        }
    }
    return kept;
}

std::vector<double> radius_grid(const ProbeBudget& budget) {
    std::vector<double> radii;
    for (double r = budget.radius_base; r >= budget.min_radius; r /= 2.0) radii.push_back(r);
    if (radii.empty()) throw DomainError("probe budget: empty radius grid");
    return radii;
}

double d_lower_impl(const UDSet& a, const UDSet& b, const ProbeFunction& f,
                    const ProbeBudget& budget) {
    const double r_margin = std::min(a.window_radius(), b.window_radius()) - 1.0;
    const auto centers = candidate_centers(a, b, r_margin, budget.max_centers);
    const auto radii = radius_grid(budget);

    std::vector<Point> alphas;
    alphas.emplace_back(a.dim(), 0.0);
    for (std::size_t i = 0; i < a.size() && static_cast<int>(alphas.size()) < budget.max_alpha;
         ++i) {
        if (norm(a.point(i)) <= r_margin) alphas.push_back(a.point_copy(i));
    }
    for (std::size_t j = 0; j < b.size() && static_cast<int>(alphas.size()) < budget.max_alpha;
         ++j) {
        if (norm(b.point(j)) <= r_margin) alphas.push_back(b.point_copy(j));
    }

    // Per-center best signed phi difference over the radius grid, shared
    // across alphas (the ratio solver needs only gains and weights; any center
    // is used at most once per collection, so the best radius per sign
    // dominates every single-radius choice).
    std::vector<int> scratch;
    std::vector<double> best_pos(centers.size(), 0.0), best_neg(centers.size(), 0.0);
    for (std::size_t q = 0; q < centers.size(); ++q) {
        for (double eps : radii) {
            const double diff = phi_ball(a, centers[q], eps, f, scratch) -
                                phi_ball(b, centers[q], eps, f, scratch);
            best_pos[q] = std::max(best_pos[q], diff);
            best_neg[q] = std::min(best_neg[q], diff);
        }
    }

    double best = 0.0;
    for (const auto& alpha : alphas) {
        for (int sign = 0; sign < 2; ++sign) {
            const auto& gains = sign == 0 ? best_pos : best_neg;
            const double base = 0.5 + norm(alpha);
            std::vector<Candidate> cls;
            for (std::size_t q = 0; q < centers.size(); ++q) {
                if (gains[q] == 0.0) continue;
                cls.push_back({static_cast<int>(q), std::fabs(gains[q]), dist(alpha, centers[q])});
            }
            RatioSolution sol;
            solve_class(cls, base, sol);
            best = std::max(best, sol.value);
        }
    }
    return std::min(best, 1.0);
}

UDSet translate_set(const UDSet& s, std::span<const double> x) {
    Point t(x.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = -x[k];
    return transform(s, RigidMotion::pure_translation(std::move(t)));
}

}  // namespace

double metric_d_lower(const UDSet& a, const UDSet& b, const ProbeFunction& f,
                      const ProbeBudget& budget) {
    if (a.dim() != b.dim()) throw DomainError("metric_d_lower: dimension mismatch");
    return d_lower_impl(a, b, f, budget);
}

double metric_D_lower(const UDSet& a, const UDSet& b, const ProbeFunction& f,
                      const ProbeBudget& budget, const std::vector<Point>& extra_x) {
    if (a.dim() != b.dim()) throw DomainError("metric_D_lower: dimension mismatch");
    std::vector<Point> xs;
    for (const auto& x : extra_x) {
        if (static_cast<int>(x.size()) != a.dim()) {
            throw DomainError("metric_D_lower: extra candidate dimension mismatch");
        }
        xs.push_back(x);
    }
    xs.emplace_back(a.dim(), 0.0);
    for (std::size_t i = 0; i < a.size() && static_cast<int>(xs.size()) < budget.max_x; ++i) {
        xs.push_back(a.point_copy(i));
    }
    for (std::size_t j = 0; j < b.size() && static_cast<int>(xs.size()) < budget.max_x; ++j) {
        xs.push_back(b.point_copy(j));
    }
    double best = 0.0;
    for (const auto& x : xs) {
        const UDSet ta = translate_set(a, x);
        const UDSet tb = translate_set(b, x);
        best = std::max(best, d_lower_impl(ta, tb, f, budget));
    }
    return std::min(best, 1.0);
}

double hausdorff_window(const UDSet& a, const UDSet& b, double window_radius) {
    if (a.dim() != b.dim()) throw DomainError("hausdorff_window: dimension mismatch");
    const UDSet ra = restrict_annulus(a, Annulus(0.0, window_radius));
    const UDSet rb = restrict_annulus(b, Annulus(0.0, window_radius));
    if (ra.is_empty() || rb.is_empty()) {
        throw EmptySetError("hausdorff_window: empty restriction to the window");
    }
    double h = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) h = std::max(h, rb.nearest_distance(ra.point(i)));
    for (std::size_t j = 0; j < rb.size(); ++j) h = std::max(h, ra.nearest_distance(rb.point(j)));
    return h;
}

PairingReport pairing(const UDSet& a, const UDSet& b, const Point& x, double eps) {
    if (a.dim() != b.dim() || static_cast<int>(x.size()) != a.dim()) {
        throw DomainError("pairing: dimension mismatch");
    }
    if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("pairing: eps must lie in (0, 1)");
    if (a.is_empty() || b.is_empty()) throw EmptySetError("pairing: both sets must be non-empty");

    PairingReport report;
    report.x = x;
    report.epsilon = eps;
    report.eligible_radius = (1.0 - eps) / (2.0 * eps);

    std::vector<int> hits;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto lambda = a.point(i);
        const double lx = dist(lambda, x);
        if (lx >= report.eligible_radius) continue;
        hits.clear();
        b.grid().neighbors_within(lambda, 0.5, hits);
        int partner = -1;
        for (int j : hits) {
            if (dist(lambda, b.point(j)) < 0.5) {
                if (partner >= 0) {
                    throw DomainError("pairing: two points of the second set within 1/2 — "
                                      "input is not uniformly discrete");
                }
                partner = j;
            }
        }
        if (partner < 0) {
            report.unmatched.push_back(a.point_copy(i));
            continue;
        }
        PairMatch m;
        m.lambda = a.point_copy(i);
        m.lambda_prime = b.point_copy(static_cast<std::size_t>(partner));
        m.displacement = dist(lambda, b.point(partner));
        m.bound_anchored = (0.5 + lx) * eps;
        m.bound_global = eps / 2.0;
        m.satisfied = m.displacement <= m.bound_anchored;
        report.max_displacement = std::max(report.max_displacement, m.displacement);
        report.matches.push_back(std::move(m));
    }
    return report;
}

}  // namespace udpack
