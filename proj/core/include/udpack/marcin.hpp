#pragma once

#include <cstdint>

#include "udpack/density.hpp"
#include "udpack/udset.hpp"

namespace udpack {

/// How the volume of (B(A) Δ B(B)) ∩ tB is evaluated.
///
///   exact_pairing: requires a full unambiguous pairing of the two packings
///     with displacements <= 1/2 and no ball overlapping a non-partner
///     foreign ball (checked; MethodInapplicable with a witness otherwise;
///     the boundary case of two candidates at distance exactly 1/2 is
///     reported as ambiguous rather than resolved arbitrarily). Each
///     matched pair at distance d contributes 2 (ball_volume(n, 1/2) -
///     lens_volume(n, 1/2, 1/2, d)), counted iff the pair midpoint lies in
///     tB (so the value is exactly symmetric in the two packings and the
///     boundary treatment is O(1/t)).
///   planar_exact: n = 2 only. Exact inclusion-exclusion over the bipartite
///     overlap graph: balls of one packing have disjoint interiors, so the
///     cross-intersection volume is the sum of pairwise lenses. Refuses when
///     a connected component has more than 3 balls or a cross lens straddles
///     the t-sphere (cannot be clipped in closed form).
///   montecarlo: uniform sampling in tB with a reported standard error; the
///     seed is split per grid point, so results are reproducible and
///     symmetric in the two packings.
enum class SymdiffMethod { exact_pairing, planar_exact, montecarlo };

std::string to_string(SymdiffMethod m);

struct MarcinOptions {
    SymdiffMethod method = SymdiffMethod::montecarlo;
    std::int64_t samples = 1'000'000;  // per grid point (montecarlo)
    std::uint64_t seed = 0;            // montecarlo
    double tail_fraction = 0.25;
    double conv_tol = 0.02;
};

struct SymdiffValue {
    double volume = 0.0;
    double stderr_value = 0.0;  // 0 for exact methods
};

/// Volume of the symmetric difference of the two ball systems inside tB.
/// Preconditions: equal dimensions, both windows >= t + 1/2.
SymdiffValue symdiff_volume(const UDSet& a, const UDSet& b, double t,
                            const MarcinOptions& opts = {});

struct MdistResult {
    AsymptoticEstimate estimate;
    DensityProfile profile;  // values (symdiff/vol(tB))^{1/p}; stderrs for montecarlo
};

/// Marcinkiewicz p-distance surrogate: tail max over the grid of
/// (symdiff_volume(t) / vol(tB))^{1/p}. Symmetric in (a, b) exactly for the
/// same options/seed.
MdistResult mdist(const UDSet& a, const UDSet& b, double p, const std::vector<double>& t_grid,
                  const MarcinOptions& opts = {});

enum class EquivalenceVerdict { equivalent, distinct, indeterminate };

std::string to_string(EquivalenceVerdict v);

struct EquivalenceResult {
    EquivalenceVerdict verdict = EquivalenceVerdict::indeterminate;
    double tol = 0.0;
    MdistResult certificate;
};

/// Marcinkiewicz-equivalence test at tolerance tol: `equivalent` iff the
/// mdist estimate is <= tol and its convergence flag holds; a non-converged
/// estimate yields `indeterminate`, distinct from both true and false.
EquivalenceResult equivalent(const UDSet& a, const UDSet& b, double p, double tol,
                             const std::vector<double>& t_grid, const MarcinOptions& opts = {});

}  // namespace udpack
