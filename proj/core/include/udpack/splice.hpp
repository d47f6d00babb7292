#pragma once

#include "udpack/marcin.hpp"
#include "udpack/udset.hpp"

namespace udpack {

/// One schedule entry. For entries 0..K-1 the certificates refer to the pair
/// (source_index of this entry, source_index of the next): `mdist_cert` is the
/// estimated p-distance of the pair (required <= 2^{-(i+1)} for 1-based entry
/// number i) and `r_cert` the tail sup of the pair's difference profile from
/// lambda + 1/2 on (required <= 2^{-i}). The final entry closes the last
/// annulus; its certificates are NaN (they would involve a pair beyond the
/// sequence data).
struct ScheduleEntry {
    int source_index = 0;  // index into the input sequence (0-based)
    double lambda = 0.0;
    double mdist_cert = 0.0;
    double r_cert = 0.0;
};

/// The (m_i, lambda_i) data of the annular splice, with certificates recorded
/// at the resolution of the grid they were estimated on. Invariants:
/// lambda_1 >= 1, lambda_{i+1} > growth * lambda_i, source indices strictly
/// increasing. entries.size() = depth + 1 (the last entry closes the splice).
struct AnnulusSchedule {
    double growth = 2.0;
    std::vector<ScheduleEntry> entries;
    double grid_min = 0.0;  // resolution the certificates were taken at
    double grid_max = 0.0;

    int depth() const { return static_cast<int>(entries.size()) - 1; }
    /// Annulus of slice i (0-based, i < depth): [lambda_i + 1/2, lambda_{i+1} - 1/2].
    Annulus annulus(int i) const {
        return Annulus(entries[i].lambda + 0.5, entries[i + 1].lambda - 0.5);
    }
};

struct ScheduleOptions {
    double growth = 2.0;            // must be > 1
    double lambda_margin = 1e-6;    // next lambda > growth * lambda * (1 + margin)
    MarcinOptions marcin;           // method/seed for the pair distance estimates
    double p = 1.0;
};

/// Selects a subsequence and radius schedule from a sequence of packings that
/// is (verifiably, at this grid resolution) Cauchy for the p-seminorm:
/// greedily scans for the first next index whose estimated distance to the
/// current one is <= 2^{-(i+1)}, then for the smallest grid radius
/// lambda_i >= max(1, growth * lambda_{i-1} (1 + margin)) whose tail sup of
/// the difference profile is <= 2^{-i}. Records all certificates. Throws
/// ScheduleExhausted(i, reason) when no admissible index or radius exists
/// within the windows.
AnnulusSchedule select_schedule(const std::vector<UDSet>& seq, double p,
                                const std::vector<double>& t_grid, int depth,
                                const ScheduleOptions& opts = {});

/// Assembles the annular splice: the union over slices of
/// seq[m_i] restricted to the closed annulus [lambda_i + 1/2, lambda_{i+1} - 1/2].
/// The radial gaps of width 1 between consecutive annuli make cross-annulus
/// distances >= 1, so the result always validates; the region inside
/// lambda_1 - 1/2 is empty. Window of the result: lambda_{depth+1} - 1/2.
UDSet build_splice(const std::vector<UDSet>& seq, const AnnulusSchedule& schedule);

struct SpliceReport {
    std::vector<double> mdist_to_sources;  // one per certified entry
    bool nonincreasing_ok = true;          // up to `allowance`
    double allowance = 0.0;
    double density_splice = 0.0;
    double density_last_source = 0.0;
    double density_gap = 0.0;  // |density_splice - density_last_source|
    double grid_max = 0.0;     // resolution statement
};

/// Distance of the splice to each selected source (should be non-increasing
/// in i up to estimator error) and the density gap to the last source.
SpliceReport verify_splice(const UDSet& splice, const std::vector<UDSet>& seq,
                           const AnnulusSchedule& schedule, double p,
                           const std::vector<double>& t_grid, const MarcinOptions& opts = {},
                           double allowance = 0.02);

}  // namespace udpack
