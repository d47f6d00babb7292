#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "udpack/udset.hpp"

namespace udpack {

enum class ProfileMethod { counting, volumetric, montecarlo };

std::string to_string(ProfileMethod m);

/// Sampled map t -> |f|_{p,t}: the computable surrogate of the asymptotic
/// seminorm. `values` holds ((normalized mass in tB))^{1/p}; for Monte Carlo
/// profiles `stderrs` carries one standard error per grid point (else empty).
///
/// For a single packing the volumetric values always lie in [0, 1]; counting
/// values can exceed 1 by the O(1/t) boundary term at small t.
struct DensityProfile {
    std::vector<double> ts;
    std::vector<double> values;
    std::vector<double> stderrs;
    ProfileMethod method = ProfileMethod::counting;
    double p = 1.0;
};

/// Tail summary of a profile. The limsup of the true seminorm is not
/// computable from a window; `value` is the maximum over the trailing
/// `tail_fraction` of grid points, reported together with the (tail_lo,
/// tail_hi) band and a convergence flag (band width <= conv_tol). Invariant:
/// tail_lo <= value = tail_hi. Never extrapolates beyond the data.
struct AsymptoticEstimate {
    double value = 0.0;
    double tail_lo = 0.0;
    double tail_hi = 0.0;
    double tail_fraction = 0.25;
    bool converged = false;
};

struct DensityOptions {
    ProfileMethod method = ProfileMethod::counting;
    double p = 1.0;
    std::int64_t samples = 1'000'000;  // montecarlo only
    std::uint64_t seed = 0;            // montecarlo only
};

/// Checks max(grid) <= window - 1/2 (so every relevant ball lies inside the
/// window); throws DomainError listing the offending t otherwise.
void check_grid_within_window(const std::vector<double>& t_grid, double window_radius);

/// Evenly spaced grid {a, a+step, ...} up to b inclusive (within fp slack).
std::vector<double> make_grid(double a, double b, double step);

/// |f|_{p,t} profile of a single packing over the grid.
///   counting:   N(t) (1/(2t))^n   (ball count per normalized volume)
///   volumetric: vol(union of balls ∩ tB) / vol(tB), exact: balls of one
///               packing have disjoint interiors, so the union volume is the
///               sum of per-ball volumes, lens-clipped at the t-sphere
///   montecarlo: hit fraction of uniform samples in tB, with standard error
DensityProfile density_profile(const UDSet& set, const std::vector<double>& t_grid,
                               const DensityOptions& opts = {});

/// Tail max of the profile with convergence diagnostics.
AsymptoticEstimate asymptotic_density(const DensityProfile& profile, double tail_fraction = 0.25,
                                      double conv_tol = 0.02);

/// Normalized mass of the packing in the thin outer annulus tB \ (t-l)B,
/// per grid point: vol(balls ∩ (tB \ (t-l)B)) / vol(tB). A packing is
/// M^1-regular-consistent when this tends to 0 over the tail.
DensityProfile regularity_defect(const UDSet& set, double l, const std::vector<double>& t_grid);

struct TailSup {
    double value = 0.0;
    double from_t = 0.0;  // first grid point used (>= lambda + 1/2)
    double to_t = 0.0;    // grid coverage end
    int points = 0;
};

/// Max of the profile over grid points t >= lambda + 1/2, with the grid
/// coverage it was taken over. Throws if no grid point qualifies.
TailSup tail_sup_R(const DensityProfile& profile, double lambda);

/// Exact volume of B(center, 1/2) ∩ B(0, t) as a function of the center norm.
double ball_in_sphere_volume(int n, double center_norm, double t);

/// Reference densities (external mathematical facts, shipped for tests): the
/// packing constants delta_n for n <= 3, where they are known, and the best
/// known lattice packing densities for 4 <= n <= 8, which only bound delta_n
/// from below.
struct PackingConstant {
    int dim;
    double density;
    bool is_packing_constant;  // false: best-known-lattice lower bound
    const char* lattice;
};

std::span<const PackingConstant> known_packing_constants();

}  // namespace udpack
