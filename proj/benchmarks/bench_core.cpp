#include <benchmark/benchmark.h>

#include "udpack/density.hpp"
#include "udpack/generators.hpp"
#include "udpack/geometry.hpp"
#include "udpack/linalg.hpp"
#include "udpack/marcin.hpp"
#include "udpack/metrics.hpp"
#include "udpack/rng.hpp"
#include "udpack/saturate.hpp"

using namespace udpack;

static void BM_BallVolume(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    double r = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ball_volume(n, r));
        r += 1e-12;
    }
}
BENCHMARK(BM_BallVolume)->Arg(2)->Arg(8)->Arg(24);

static void BM_LensVolume(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    double d = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lens_volume(n, 0.5, 0.5, d));
        d = d > 0.9 ? 0.3 : d + 1e-7;
    }
}
BENCHMARK(BM_LensVolume)->Arg(2)->Arg(3)->Arg(8);

static void BM_GridNeighborQuery(benchmark::State& state) {
    const auto hex = gen_named_lattice("hex", 40.0);
    Xoshiro256pp rng(1);
    std::vector<double> x(2);
    std::vector<int> hits;
    for (auto _ : state) {
        rng.in_ball(35.0, x);
        hits.clear();
        hex.grid().neighbors_within(x, 1.0, hits);
        benchmark::DoNotOptimize(hits.data());
    }
}
BENCHMARK(BM_GridNeighborQuery);

static void BM_Validate(benchmark::State& state) {
    const auto rsa = gen_rsa(2, 30.0, 5, 20'000);
    std::vector<double> flat(rsa.flat().begin(), rsa.flat().end());
    for (auto _ : state) {
        auto copy = flat;
        benchmark::DoNotOptimize(UDSet::validate_flat(std::move(copy), 2, 30.0));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rsa.size()));
}
BENCHMARK(BM_Validate);

static void BM_DensityProfile(benchmark::State& state) {
    const auto hex = gen_named_lattice("hex", 60.0);
    const auto grid = make_grid(5.0, 50.0, 1.0);
    const auto method = state.range(0) == 0 ? ProfileMethod::counting : ProfileMethod::volumetric;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density_profile(hex, grid, {method}));
    }
}
BENCHMARK(BM_DensityProfile)->Arg(0)->Arg(1);

static void BM_SymdiffExactPairing(benchmark::State& state) {
    auto z2 = gen_named_lattice("Z2", 25.0, 2.0);
    std::vector<double> flat(z2.flat().begin(), z2.flat().end());
    for (std::size_t i = 0; i < flat.size(); i += 2) flat[i] += 0.5;
    const auto shifted = UDSet::validate_flat(std::move(flat), 2, z2.window_radius() + 0.5);
    MarcinOptions opts;
    opts.method = SymdiffMethod::exact_pairing;
    for (auto _ : state) {
        benchmark::DoNotOptimize(symdiff_volume(z2, shifted, 20.0, opts));
    }
}
BENCHMARK(BM_SymdiffExactPairing);

static void BM_SymdiffMonteCarlo(benchmark::State& state) {
    const auto a = gen_named_lattice("Z2", 25.0);
    const auto b = gen_named_lattice("hex", 25.0);
    MarcinOptions opts;
    opts.method = SymdiffMethod::montecarlo;
    opts.samples = state.range(0);
    opts.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(symdiff_volume(a, b, 20.0, opts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SymdiffMonteCarlo)->Arg(10'000)->Arg(100'000);

static void BM_ProbeSolver(benchmark::State& state) {
    const auto f = default_probe_function();
    Xoshiro256pp rng(9);
    std::vector<Point> centers;
    std::vector<double> radii;
    while (centers.size() < 15) {
        Point c(2);
        rng.in_ball(8.0, c);
        bool far = true;
        for (const auto& e : centers) {
            if (dist(c, e) < 1.0) {
                far = false;
                break;
            }
        }
        if (far) {
            centers.push_back(std::move(c));
            radii.push_back(0.3);
        }
    }
    const auto pool = ProbeCollection::validate(centers, radii);
    const auto a = gen_rsa(2, 9.0, 1, 500);
    const auto b = gen_rsa(2, 9.0, 2, 500);
    const Point alpha{0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_pseudometric(a, b, alpha, pool, f));
    }
}
BENCHMARK(BM_ProbeSolver);

static void BM_FindHole(benchmark::State& state) {
    const auto z2 = gen_named_lattice("Z2", 6.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_hole(z2, 5.0));
    }
}
BENCHMARK(BM_FindHole);

BENCHMARK_MAIN();
