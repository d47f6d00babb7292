#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "udpack/generators.hpp"
#include "udpack/io.hpp"
#include "udpack/splice.hpp"
#include "support.hpp"

using namespace udpack;
using namespace testutil;

namespace {

ScheduleOptions exact_sched() {
    ScheduleOptions o;
    o.marcin.method = SymdiffMethod::exact_pairing;
    return o;
}

}  // namespace

TEST_CASE("constant sequence: consecutive sources, unit radii, zero certificates") {
    auto hex = gen_named_lattice("hex", 32.0);
    std::vector<UDSet> seq(5, hex);
    const auto grid = make_grid(1.0, 31.0, 1.0);
    const auto sched = select_schedule(seq, 1.0, grid, 3, exact_sched());

    REQUIRE(sched.entries.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(sched.entries[i].source_index == i);
        CHECK(sched.entries[i].mdist_cert == 0.0);
        CHECK(sched.entries[i].r_cert == 0.0);
    }
    CHECK(sched.entries[0].lambda == 1.0);  // first admissible grid radius
    CHECK(sched.entries[1].lambda == 3.0);  // smallest grid value > 2 * 1
    CHECK(sched.entries[2].lambda == 7.0);
    CHECK(sched.entries[3].lambda == 15.0);

    const auto splice = build_splice(seq, sched);
    // the construction equals the union of the annular restrictions
    UDSet manual = UDSet::empty(2, splice.window_radius());
    for (int i = 0; i < sched.depth(); ++i) {
        manual = union_checked(manual, restrict_annulus(hex, sched.annulus(i)));
    }
    CHECK(splice.size() == manual.size());
    CHECK(splice.window_radius() == doctest::Approx(14.5));
}

TEST_CASE("splice invariants: empty core, empty gaps, unit cross-annulus separation") {
    auto hex = gen_named_lattice("hex", 32.0);
    std::vector<UDSet> seq(5, hex);
    const auto grid = make_grid(1.0, 31.0, 1.0);
    const auto sched = select_schedule(seq, 1.0, grid, 3, exact_sched());
    const auto splice = build_splice(seq, sched);

    // region inside lambda_1 - 1/2 is empty, as is every gap annulus
    CHECK(restrict_annulus(splice, Annulus(0.0, sched.entries[0].lambda + 0.5 - 1e-12)).is_empty());
    for (int i = 1; i <= sched.depth(); ++i) {
        const double lam = sched.entries[i].lambda;
        auto gap = restrict_annulus(splice, Annulus(lam - 0.5 + 1e-12, lam + 0.5 - 1e-12));
        CHECK(gap.is_empty());
    }

    // min distance across consecutive annuli is >= 1 (exact check)
    for (int i = 0; i + 1 < sched.depth(); ++i) {
        auto a = restrict_annulus(splice, sched.annulus(i));
        auto b = restrict_annulus(splice, sched.annulus(i + 1));
        double best = 1e300;
        for (std::size_t x = 0; x < a.size(); ++x) {
            best = std::min(best, b.nearest_distance(a.point(x)));
        }
        CHECK(best >= 1.0);
    }
}

TEST_CASE("depth-1 splice is a single annular restriction") {
    auto z2 = gen_named_lattice("Z2", 12.0);
    std::vector<UDSet> seq(3, z2);
    const auto grid = make_grid(1.0, 11.0, 0.5);
    const auto sched = select_schedule(seq, 1.0, grid, 1, exact_sched());
    const auto splice = build_splice(seq, sched);
    CHECK(splice == restrict_annulus(
                        restrict_annulus(z2, sched.annulus(0)), Annulus(0.0, splice.window_radius())));
}

TEST_CASE("sequence with constant distance ~0.3 exhausts at the first threshold below it") {
    // independent random packings keep pairwise distance far above 2^{-2}
    std::vector<UDSet> seq;
    for (int m = 0; m < 6; ++m) seq.push_back(gen_rsa(2, 16.0, 1000 + m, 4000));
    ScheduleOptions opts;
    opts.marcin.method = SymdiffMethod::montecarlo;
    opts.marcin.seed = 5;
    opts.marcin.samples = 40'000;
    const auto grid = make_grid(1.0, 15.0, 1.0);
    try {
        select_schedule(seq, 1.0, grid, 3, opts);
        CHECK(false);
    } catch (const ScheduleExhausted& e) {
        CHECK(e.level == 1);  // 2^{-(1+1)} = 1/4 already unreachable
    }
}

TEST_CASE("geometrically converging shift sequence admits a schedule with decaying certificates") {
    // 2*hex translated by (2^{-m}/8, 0): pairable, no foreign overlaps
    auto base = scaled_copy(gen_named_lattice("hex", 19.0), 2.0);
    std::vector<UDSet> seq;
    for (int m = 0; m < 8; ++m) {
        seq.push_back(translated_copy(base, {std::ldexp(1.0, -m) / 8.0, 0.0}));
    }
    const auto grid = make_grid(1.0, 37.0, 1.0);
    const auto sched = select_schedule(seq, 1.0, grid, 3, exact_sched());
    REQUIRE(sched.depth() == 3);
    for (int i = 0; i + 1 < sched.depth(); ++i) {
        CHECK(sched.entries[i + 1].mdist_cert <= 0.75 * sched.entries[i].mdist_cert);
        CHECK(sched.entries[i + 1].lambda > 2.0 * sched.entries[i].lambda);
    }
    CHECK(sched.entries[0].mdist_cert > 0.0);

    const auto splice = build_splice(seq, sched);
    CHECK_FALSE(splice.is_empty());

    // deeper schedules never increase the final certificate
    const auto deeper = select_schedule(seq, 1.0, grid, 4, exact_sched());
    CHECK(deeper.entries[3].mdist_cert <= sched.entries[2].mdist_cert + 1e-12);
}

TEST_CASE("hex perturbation sequence: Monte Carlo certificates admit a schedule") {
    // hex + (2^{-m}/8, 0): overlapping foreign balls rule out exact pairing,
    // so the certificates go through the seeded Monte Carlo route
    auto hex = gen_named_lattice("hex", 16.0);
    std::vector<UDSet> seq;
    for (int m = 0; m < 6; ++m) {
        seq.push_back(translated_copy(hex, {std::ldexp(1.0, -m) / 8.0, 0.0}));
    }
    ScheduleOptions opts;
    opts.marcin.method = SymdiffMethod::montecarlo;
    opts.marcin.seed = 99;
    opts.marcin.samples = 30'000;
    const auto sched = select_schedule(seq, 1.0, make_grid(1.0, 15.0, 1.0), 3, opts);
    REQUIRE(sched.depth() == 3);
    CHECK(sched.entries[2].mdist_cert < sched.entries[0].mdist_cert);
    CHECK(sched.entries[2].mdist_cert <= 0.0625);
    const auto splice = build_splice(seq, sched);
    CHECK_FALSE(splice.is_empty());
}

TEST_CASE("verify_splice: constant hex sequence converges to the source density") {
    auto hex = gen_named_lattice("hex", 40.0);
    std::vector<UDSet> seq(6, hex);
    const auto grid = make_grid(1.0, 39.0, 1.0);
    const auto sched = select_schedule(seq, 1.0, grid, 4, exact_sched());
    const auto splice = build_splice(seq, sched);

    MarcinOptions verify_opts;
    verify_opts.method = SymdiffMethod::planar_exact;  // splice ⊂ hex: coincident pairs only
    const auto report =
        verify_splice(splice, seq, sched, 1.0, make_grid(5.0, 30.0, 1.0), verify_opts);
    REQUIRE(report.mdist_to_sources.size() == 4);
    CHECK(report.nonincreasing_ok);
    CHECK(report.density_gap < 0.12);  // first gaps dominate at this small depth
}

TEST_CASE("verify_splice: single-annulus distance equals the direct symmetric difference") {
    auto z2 = gen_named_lattice("Z2", 24.0);
    std::vector<UDSet> seq(2, z2);
    const auto grid = make_grid(1.0, 23.0, 0.5);
    ScheduleOptions wide = exact_sched();
    wide.growth = 8.0;  // leave room below the closing radius for verification
    const auto sched = select_schedule(seq, 1.0, grid, 1, wide);
    const auto splice = build_splice(seq, sched);
    REQUIRE(splice.window_radius() >= 8.0);

    MarcinOptions popts;
    popts.method = SymdiffMethod::planar_exact;
    const auto vgrid = make_grid(2.0, splice.window_radius() - 0.5, 0.5);
    const auto report = verify_splice(splice, seq, sched, 1.0, vgrid, popts);
    const auto direct = mdist(splice, z2, 1.0, vgrid, popts);
    CHECK(report.mdist_to_sources[0] == doctest::Approx(direct.estimate.value).epsilon(1e-12));
}

TEST_CASE("constant Z2 splice density converges to pi/4 within 0.03") {
    auto z2 = gen_named_lattice("Z2", 64.0);
    std::vector<UDSet> seq(6, z2);
    const auto grid = make_grid(1.0, 63.0, 1.0);
    const auto sched = select_schedule(seq, 1.0, grid, 5, exact_sched());
    const auto splice = build_splice(seq, sched);
    const auto est = asymptotic_density(
        density_profile(splice, make_grid(5.0, splice.window_radius() - 0.5, 1.0),
                        {ProfileMethod::counting}),
        0.25);
    CHECK(std::fabs(est.value - kPi / 4.0) <= 0.03);
}

TEST_CASE("schedule serialization round trip") {
    AnnulusSchedule sched;
    sched.growth = 2.0;
    sched.entries = {{0, 1.0, 0.125, 0.25}, {2, 3.0, 0.03125, 0.0625}, {5, 7.0,
                     std::nan(""), std::nan("")}};
    std::ostringstream os;
    write_schedule(os, sched);
    std::istringstream is(os.str());
    const auto back = read_schedule(is);
    CHECK(back.growth == 2.0);
    REQUIRE(back.entries.size() == 3);
    CHECK(back.entries[1].source_index == 2);
    CHECK(back.entries[1].lambda == 3.0);
    CHECK(back.entries[1].mdist_cert == 0.03125);
    CHECK(std::isnan(back.entries[2].mdist_cert));

    std::istringstream bad("1 0 1.0 0.5 0.5\n");
    CHECK_THROWS_AS(read_schedule(bad), FileFormatError);
}

TEST_CASE("build_splice rejects inconsistent inputs") {
    auto z2 = gen_named_lattice("Z2", 8.0);
    std::vector<UDSet> seq(2, z2);
    AnnulusSchedule sched;
    sched.entries = {{0, 1.0, 0.0, 0.0}, {9, 3.0, std::nan(""), std::nan("")}};
    CHECK_THROWS_AS(build_splice(seq, sched), DomainError);  // source index out of range
    sched.entries = {{0, 1.0, 0.0, 0.0}, {1, 30.0, std::nan(""), std::nan("")}};
    CHECK_THROWS_AS(build_splice(seq, sched), DomainError);  // window too small
    CHECK_THROWS_AS(build_splice(std::vector<UDSet>{}, sched), DomainError);
}
