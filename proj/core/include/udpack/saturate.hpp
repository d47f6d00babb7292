#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "udpack/udset.hpp"

namespace udpack {

/// A location where a new unit-diameter ball fits: distance to every center
/// of the packing >= 1 - tol_min.
struct HoleWitness {
    Point location;
    double clearance = 0.0;
};

struct FindHoleOptions {
    double initial_pitch = 0.25;
    double min_pitch = 1.0 / 64.0;   // pitch refinement floor for the certificate
    int refine_top = 64;             // seeds refined by local maximization per level
    std::uint64_t circumcenter_budget = 2'000'000;  // max (n+1)-tuples (n <= 3 only)
};

/// Outcome of a hole search. `witness` empty means no insertable location was
/// found; `certified` states whether the covering argument proves saturation
/// inside the region at the final pitch: a grid of pitch p covers the region
/// with cells of radius p sqrt(n)/2 and the distance function is 1-Lipschitz,
/// so pitch <= (1 - max_clearance)/sqrt(n) certifies no hole exists. The
/// search halves the pitch until the certificate holds, a hole appears, or
/// min_pitch is reached (then: witness empty, certified false).
struct HoleSearchResult {
    std::optional<HoleWitness> witness;
    bool certified = false;
    double final_pitch = 0.0;
    double max_clearance = 0.0;
};

/// Searches B(0, region_radius) for a point at distance >= 1 from the set.
/// Seeds: a grid of the current pitch, plus (for n <= 3) circumcenters of
/// tuples of n+1 mutually close points; every retained seed is refined by
/// local maximization of the distance-to-set function. Ties among equal
/// clearance are broken by the lexicographically smallest location.
/// Precondition: region_radius <= window - 1 (so window truncation cannot
/// fake a hole).
HoleSearchResult find_hole(const UDSet& set, double region_radius,
                           const FindHoleOptions& opts = {});

/// Repeatedly inserts hole witnesses (largest clearance first, lex smallest
/// among ties) until find_hole reports none inside the region. The output
/// validates and contains the input. The procedure is fully deterministic;
/// `seed` is accepted for interface stability but the lex tie-break leaves
/// no randomness to consume.
UDSet saturate_greedy(const UDSet& set, double region_radius, std::uint64_t seed = 0,
                      const FindHoleOptions& opts = {});

enum class SaturationStatus { saturated, not_saturated, indeterminate };

std::string to_string(SaturationStatus s);

/// Verdicts are resolution-bounded: `saturated` means "at this pitch"; the
/// pitch is part of the verdict.
struct SaturationVerdict {
    SaturationStatus status = SaturationStatus::indeterminate;
    int m = 1;
    double pitch = 0.0;
    std::vector<Point> removed;
    std::vector<Point> inserted;
    std::string note;
};

struct MSatOptions {
    FindHoleOptions hole;
    std::uint64_t max_subsets = 20'000;  // combinatorial budget; exceeded -> indeterminate
    int local_refine_top = 8;
    double local_pitch = 0.125;  // insertion-search grid around the removed cluster
    int max_first_choices = 128;  // branching cap over the first insertion
};

/// m-saturation check, m in {1, 2, 3}. m = 1 delegates to find_hole. For
/// m >= 2: for every subset S of m-1 points lying within some ball of radius
/// cluster_radius, removes S and greedily searches for m insertable points;
/// the insertion search is restricted to the union of unit balls around the
/// removed points (an insertion farther away would already contradict the
/// 1-saturation established first, at the same resolution).
SaturationVerdict m_saturation_check(const UDSet& set, int m, double region_radius,
                                     double cluster_radius, const MSatOptions& opts = {});

}  // namespace udpack
