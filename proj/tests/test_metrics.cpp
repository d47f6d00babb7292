#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udpack/generators.hpp"
#include "udpack/metrics.hpp"
#include "support.hpp"

using namespace udpack;
using namespace testutil;

namespace {

// Exhaustive oracle: best ratio over all non-empty subsets, evaluated in
// candidate-index order exactly like the solver's canonical recomputation.
double brute_force_ratio(const std::vector<double>& gains, const std::vector<double>& weights,
                         double base) {
    const int k = static_cast<int>(gains.size());
    double best = 0.0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        double num = 0.0, den = base;
        for (int q = 0; q < k; ++q) {
            if (mask >> q & 1u) {
                num += gains[q];
                den += weights[q];
            }
        }
        best = std::max(best, std::fabs(num) / den);
    }
    return best;
}

// Mirrors probe_pseudometric's per-ball difference so the oracle can run the
// full subset search on the same inputs.
std::vector<double> per_ball_diffs(const UDSet& a, const UDSet& b, const ProbeCollection& pool,
                                   const ProbeFunction& f) {
    std::vector<double> out;
    for (std::size_t q = 0; q < pool.size(); ++q) {
        ProbeCollection one = ProbeCollection::validate({pool.center(q)}, {pool.radius(q)});
        out.push_back(phi(a, one, f) - phi(b, one, f));
    }
    return out;
}

// Random admissible instance: centers pairwise >= 1, points of two small sets
// scattered near the probe centers.
struct Instance {
    UDSet a;
    UDSet b;
    ProbeCollection pool;
};

Instance random_instance(int k, Xoshiro256pp& rng) {
    std::vector<Point> centers;
    while (static_cast<int>(centers.size()) < k) {
        Point c = random_in_ball(2, 6.0, rng);
        bool ok = true;
        for (const auto& e : centers) {
            // 1.5 leaves room for the +-0.2 jitter of the set points below
            if (dist(c, e) < 1.5) {
                ok = false;
                break;
            }
        }
        if (ok) centers.push_back(std::move(c));
    }
    std::vector<double> radii;
    std::vector<Point> pts_a, pts_b;
    for (const auto& c : centers) {
        radii.push_back(rng.uniform(0.05, 0.49));
        // with probability ~3/4 drop a point of a and/or b near the center
        if (rng.uniform() < 0.75) {
            Point p = c;
            p[0] += rng.uniform(-0.2, 0.2);
            p[1] += rng.uniform(-0.2, 0.2);
            pts_a.push_back(p);
        }
        if (rng.uniform() < 0.75) {
            Point p = c;
            p[0] += rng.uniform(-0.2, 0.2);
            p[1] += rng.uniform(-0.2, 0.2);
            pts_b.push_back(p);
        }
    }
    Instance inst{UDSet::validate(pts_a, 2, 10.0), UDSet::validate(pts_b, 2, 10.0),
                  ProbeCollection::validate(centers, radii)};
    return inst;
}

}  // namespace

TEST_CASE("default probe function: kernel conditions") {
    const auto f = default_probe_function();
    CHECK(f.eval(Point{0.0, 0.0}) == 1.0);
    CHECK(f.eval(Point{0.5, 0.0}) == 0.0);
    CHECK(f.eval(Point{0.9, 0.0}) == 0.0);  // support inside B(0, 1)
    CHECK(f.eval(Point{0.25, 0.0}) == doctest::Approx(0.5));

    Xoshiro256pp rng(61);
    for (int i = 0; i < 100'000; ++i) {
        const Point t = random_in_ball(2, 1.0, rng);
        const double v = f.eval(t);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        // radial symmetry: the value depends only on the norm
        if (i % 100 == 0) {
            const auto rot = random_rotation(2, rng);
            CHECK(f.eval(rot.apply(t)) == doctest::Approx(v).epsilon(1e-12));
        }
        // growth bound against arbitrary anchors
        const Point lam = random_in_ball(2, 100.0, rng);
        Point half = t;
        for (auto& c : half) c *= 0.5;
        const double bound = (0.5 + dist(lam, half)) / (0.5 + norm(lam));
        CHECK(v <= bound + 1e-12);
    }
}

TEST_CASE("probe collections validate their invariants") {
    CHECK_THROWS_AS(ProbeCollection::validate({{0.0, 0.0}}, {0.5}), DomainError);
    CHECK_THROWS_AS(ProbeCollection::validate({{0.0, 0.0}}, {0.0}), DomainError);
    CHECK_THROWS_AS(ProbeCollection::validate({{0.0, 0.0}, {0.9, 0.0}}, {0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(ProbeCollection::validate({{0.0, 0.0}}, {0.1, 0.2}), DomainError);
    CHECK(ProbeCollection::validate({{0.0, 0.0}, {1.0, 0.0}}, {0.1, 0.49}).size() == 2);
}

TEST_CASE("phi: empty convention and the worked single-ball values") {
    const auto f = default_probe_function();
    const auto probe = ProbeCollection::validate({{0.0, 0.0}}, {0.4});
    CHECK(phi(UDSet::empty(2, 5.0), probe, f) == 0.0);

    auto at_origin = UDSet::validate({{0.0, 0.0}}, 2, 5.0);
    CHECK(phi(at_origin, probe, f) == doctest::Approx(0.4).epsilon(1e-12));

    auto off = UDSet::validate({{0.1, 0.0}}, 2, 5.0);
    CHECK(phi(off, probe, f) == doctest::Approx(0.2).epsilon(1e-12));

    // several balls add up
    auto z2 = gen_named_lattice("Z2", 5.0);
    const auto two = ProbeCollection::validate({{0.0, 0.0}, {1.0, 0.0}}, {0.4, 0.4});
    CHECK(phi(z2, two, f) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("probe pseudo-metric: zero on equal sets, worked example") {
    const auto f = default_probe_function();
    auto z2 = gen_named_lattice("Z2", 5.0);
    const auto pool = ProbeCollection::validate({{0.0, 0.0}, {1.0, 0.0}}, {0.4, 0.3});
    CHECK(probe_pseudometric(z2, z2, Point{0.0, 0.0}, pool, f).value == 0.0);
    const auto empty_pool = ProbeCollection::validate({}, {});
    CHECK(probe_pseudometric(z2, UDSet::empty(2, 5.0), Point{0.0, 0.0}, empty_pool, f).value ==
          0.0);

    auto a = UDSet::validate({{0.0, 0.0}}, 2, 5.0);
    auto b = UDSet::validate({{0.1, 0.0}}, 2, 5.0);
    const auto single = ProbeCollection::validate({{0.0, 0.0}}, {0.4});
    const auto r = probe_pseudometric(a, b, Point{0.0, 0.0}, single, f);
    CHECK(r.value == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.selected == std::vector<int>{0});
}

TEST_CASE("greedy ratio solver equals exhaustive subset search (bit-exact)") {
    const auto f = default_probe_function();
    Xoshiro256pp rng(67);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(15));
        const auto inst = random_instance(k, rng);
        const Point alpha = random_in_ball(2, 3.0, rng);

        const auto sol = probe_pseudometric(inst.a, inst.b, alpha, inst.pool, f);
        const auto diffs = per_ball_diffs(inst.a, inst.b, inst.pool, f);
        std::vector<double> gains, weights;
        for (std::size_t q = 0; q < diffs.size(); ++q) {
            gains.push_back(diffs[q]);
            weights.push_back(dist(alpha, inst.pool.center(q)));
        }
        // oracle over signed sums with the same canonical evaluation order
        const double base = 0.5 + norm(alpha);
        CHECK(sol.value == brute_force_ratio(gains, weights, base));
    }
}

TEST_CASE("probe pseudo-metric: symmetry and triangle inequality on a fixed pool") {
    const auto f = default_probe_function();
    Xoshiro256pp rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ia = random_instance(8, rng);
        const auto ib = random_instance(8, rng);
        // one shared pool, three sets
        const auto& pool = ia.pool;
        const UDSet& A = ia.a;
        const UDSet& B = ia.b;
        const UDSet& C = ib.a;
        const Point alpha = random_in_ball(2, 2.0, rng);
        const double ab = probe_pseudometric(A, B, alpha, pool, f).value;
        const double ba = probe_pseudometric(B, A, alpha, pool, f).value;
        CHECK(ab == ba);
        const double ac = probe_pseudometric(A, C, alpha, pool, f).value;
        const double cb = probe_pseudometric(C, B, alpha, pool, f).value;
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("rotation covariance of the probe pseudo-metric") {
    const auto f = default_probe_function();
    Xoshiro256pp rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(10, rng);
        const Point alpha = random_in_ball(2, 2.0, rng);
        const double base = probe_pseudometric(inst.a, inst.b, alpha, inst.pool, f).value;

        const auto rot = random_rotation(2, rng);
        const RigidMotion g{rot, Point{0.0, 0.0}};
        std::vector<Point> rc;
        std::vector<double> rr;
        for (std::size_t q = 0; q < inst.pool.size(); ++q) {
            rc.push_back(rot.apply(inst.pool.center(q)));
            rr.push_back(inst.pool.radius(q));
        }
        const double turned =
            probe_pseudometric(transform(inst.a, g), transform(inst.b, g), rot.apply(alpha),
                               ProbeCollection::validate(rc, rr), f)
                .value;
        CHECK(turned == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("metric lower bounds: identity, witnessed separation, range") {
    const auto f = default_probe_function();
    auto z2 = gen_named_lattice("Z2", 6.0);
    CHECK(metric_d_lower(z2, z2, f) == 0.0);
    CHECK(metric_D_lower(z2, z2, f) == 0.0);

    auto a = UDSet::validate({{0.0, 0.0}}, 2, 5.0);
    auto b = UDSet::validate({{0.1, 0.0}}, 2, 5.0);
    const double d = metric_d_lower(a, b, f);
    CHECK(d >= 0.4 - 1e-12);
    CHECK(d <= 1.0);

    // lower-bound semantics against the empty set: probe at the point
    auto empty = UDSet::empty(2, 5.0);
    const double de = metric_d_lower(a, empty, f);
    CHECK(de == doctest::Approx(0.49 / 0.5).epsilon(1e-12));
    CHECK(de <= 1.0);
}

TEST_CASE("d lower bound is exactly rotation invariant (covariant candidates)") {
    const auto f = default_probe_function();
    Xoshiro256pp rng(79);
    auto a = gen_rsa(2, 6.0, 11, 600);
    auto b = gen_rsa(2, 6.0, 12, 600);
    const double base = metric_d_lower(a, b, f);
    for (int trial = 0; trial < 5; ++trial) {
        const RigidMotion g{random_rotation(2, rng), Point{0.0, 0.0}};
        const double turned = metric_d_lower(transform(a, g), transform(b, g), f);
        CHECK(turned == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("pp-metric lower bound: rigid-motion invariance with covariant extras") {
    const auto f = default_probe_function();
    Xoshiro256pp rng(83);
    auto a = gen_rsa(2, 5.0, 21, 400);
    auto b = translated_copy(a, {0.05, -0.02});
    for (int trial = 0; trial < 5; ++trial) {
        const auto rot = random_rotation(2, rng);
        const Point t = random_in_ball(2, 2.0, rng);
        const RigidMotion g{rot, t};
        // candidate families correspond bijectively: the origin of one frame
        // appears as an extra candidate in the other
        Point preimage = rot.transpose().apply(t);
        for (auto& c : preimage) c = -c;
        const double lhs = metric_D_lower(a, b, f, {}, {preimage});
        const double rhs = metric_D_lower(transform(a, g), transform(b, g), f, {}, {t});
        CHECK(rhs == doctest::Approx(lhs).epsilon(1e-12));
    }
    // pure translations with covariant extras (Theorem-style invariance)
    const Point t{1.25, -0.5};
    Point neg = t;
    for (auto& c : neg) c = -c;
    const double lhs = metric_D_lower(a, b, f, {}, {neg});
    const double rhs = metric_D_lower(translated_copy(a, t), translated_copy(b, t), f, {}, {t});
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-12));
}

TEST_CASE("windowed Hausdorff distance") {
    auto z2 = gen_named_lattice("Z2", 8.0);
    CHECK(hausdorff_window(z2, z2, 6.0) == 0.0);
    auto shifted = translated_copy(z2, {0.2, 0.0});
    // window 4.7 falls strictly between lattice shells (sqrt(20) and 5), so
    // no partner is cut off by the restriction and the distance is the shift
    CHECK(hausdorff_window(z2, shifted, 4.7) == doctest::Approx(0.2).epsilon(1e-12));

    auto a = UDSet::validate({{0.0, 0.0}}, 2, 6.0);
    auto b = UDSet::validate({{0.0, 3.0}}, 2, 6.0);
    CHECK(hausdorff_window(a, b, 5.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(hausdorff_window(a, UDSet::empty(2, 6.0), 5.0), EmptySetError);
    CHECK_THROWS_AS(hausdorff_window(a, b, 1.0), EmptySetError);  // b empties out
}

TEST_CASE("pairing: identical sets, small shift, deletion, eligibility") {
    auto hex = gen_named_lattice("hex", 12.0);
    const Point origin{0.0, 0.0};

    const auto self = pairing(hex, hex, origin, 0.1);
    CHECK(self.unmatched.empty());
    CHECK(self.max_displacement == 0.0);
    for (const auto& m : self.matches) CHECK(m.satisfied);

    auto shifted = translated_copy(hex, {0.01, 0.0});
    const auto rep = pairing(hex, shifted, origin, 0.1);
    CHECK(rep.eligible_radius == doctest::Approx(4.5));
    CHECK(rep.unmatched.empty());
    std::size_t eligible = 0;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        if (norm(hex.point(i)) < rep.eligible_radius) ++eligible;
    }
    CHECK(rep.matches.size() == eligible);
    for (const auto& m : rep.matches) {
        CHECK(std::fabs(m.displacement - 0.01) <= 1e-12);
        CHECK(m.satisfied);  // (1/2 + |lambda|) * 0.1 >= 0.05 > 0.01
        CHECK(m.bound_global == doctest::Approx(0.05));
        CHECK(m.displacement < m.bound_global);  // pointwise pairing property
    }

    // deleting one eligible partner yields exactly one unmatched report
    std::vector<double> flat(shifted.flat().begin(), shifted.flat().end());
    std::size_t victim = 0;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        if (norm(shifted.point(i)) < 2.0) {
            victim = i;
            break;
        }
    }
    flat.erase(flat.begin() + victim * 2, flat.begin() + victim * 2 + 2);
    auto holed = UDSet::validate_flat(std::move(flat), 2, shifted.window_radius());
    const auto rep2 = pairing(hex, holed, origin, 0.1);
    CHECK(rep2.unmatched.size() == 1);
    CHECK(rep2.matches.size() == eligible - 1);

    CHECK_THROWS_AS(pairing(hex, hex, origin, 0.0), DomainError);
    CHECK_THROWS_AS(pairing(hex, hex, origin, 1.0), DomainError);
    CHECK_THROWS_AS(pairing(hex, UDSet::empty(2, 12.0), origin, 0.1), EmptySetError);
}
