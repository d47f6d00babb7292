#include "udpack/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "udpack/geometry.hpp"
#include "udpack/linalg.hpp"
#include "udpack/rng.hpp"

namespace udpack {

std::string to_string(ProfileMethod m) {
    switch (m) {
        case ProfileMethod::counting: return "counting";
        case ProfileMethod::volumetric: return "volumetric";
        case ProfileMethod::montecarlo: return "montecarlo";
    }
    return "?";
}

void check_grid_within_window(const std::vector<double>& t_grid, double window_radius) {
    if (t_grid.empty()) throw DomainError("grid: empty t grid");
    std::ostringstream bad;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (i > 0 && t_grid[i] <= t_grid[i - 1]) {
            throw DomainError("grid: t values must be strictly increasing");
        }
        if (!(t_grid[i] > 0.0)) throw DomainError("grid: t values must be positive");
        if (t_grid[i] > window_radius - 0.5 + 1e-9) bad << " " << t_grid[i];
    }
    const std::string offenders = bad.str();
    if (!offenders.empty()) {
        throw DomainError("grid: t exceeds safe window (need t <= window - 1/2 = " +
                          std::to_string(window_radius - 0.5) + "):" + offenders);
    }
}

std::vector<double> make_grid(double a, double b, double step) {
    if (!(step > 0.0) || b < a) throw DomainError("make_grid: need step > 0 and b >= a");
    std::vector<double> g;
    const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    g.reserve(count);
    for (int i = 0; i < count; ++i) g.push_back(a + i * step);
    return g;
}

double ball_in_sphere_volume(int n, double center_norm, double t) {
    if (center_norm + 0.5 <= t) return ball_volume(n, 0.5);
    if (center_norm - 0.5 >= t) return 0.0;
    return lens_volume(n, 0.5, t, center_norm);
}

namespace {

std::vector<double> sorted_norms(const UDSet& set) {
    std::vector<double> norms(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) norms[i] = norm(set.point(i));
    std::sort(norms.begin(), norms.end());
    return norms;
}

// Mass of the ball system inside B(0, t), exact (per-ball lens clipping).
double union_mass_in_sphere(int n, const std::vector<double>& norms, double t) {
    const double vb = ball_volume(n, 0.5);
    // Balls with norm <= t - 1/2 are fully inside.
    const auto full_end = std::upper_bound(norms.begin(), norms.end(), t - 0.5);
    double mass = static_cast<double>(full_end - norms.begin()) * vb;
    // Straddling band: t - 1/2 < norm < t + 1/2.
    const auto band_end = std::lower_bound(full_end, norms.end(), t + 0.5);
    for (auto it = full_end; it != band_end; ++it) {
        mass += lens_volume(n, 0.5, t, *it);
    }
    return mass;
}

}  // namespace

DensityProfile density_profile(const UDSet& set, const std::vector<double>& t_grid,
                               const DensityOptions& opts) {
    check_grid_within_window(t_grid, set.window_radius());
    const int n = set.dim();
    if (opts.p < 1.0) throw DomainError("density_profile: p must be >= 1");

    DensityProfile prof;
    prof.ts = t_grid;
    prof.method = opts.method;
    prof.p = opts.p;
    prof.values.reserve(t_grid.size());

    const auto root = [&](double ratio) {
        return opts.p == 1.0 ? ratio : std::pow(ratio, 1.0 / opts.p);
    };

    if (opts.method == ProfileMethod::counting) {
        auto norms = sorted_norms(set);
        for (double t : t_grid) {
            const auto count = std::upper_bound(norms.begin(), norms.end(), t) - norms.begin();
            double ratio = static_cast<double>(count);
            for (int k = 0; k < n; ++k) ratio /= 2.0 * t;
            prof.values.push_back(root(ratio));
        }
    } else if (opts.method == ProfileMethod::volumetric) {
        auto norms = sorted_norms(set);
        for (double t : t_grid) {
            const double ratio = union_mass_in_sphere(n, norms, t) / ball_volume(n, t);
            prof.values.push_back(root(std::min(ratio, 1.0)));
        }
    } else {
        if (opts.samples < 1) throw DomainError("density_profile: need samples >= 1");
        prof.stderrs.reserve(t_grid.size());
        std::vector<double> x(n);
        for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
            const double t = t_grid[gi];
            Xoshiro256pp rng(derive_seed(opts.seed, gi));
            std::int64_t hits = 0;
            for (std::int64_t s = 0; s < opts.samples; ++s) {
                rng.in_ball(t, x);
                if (set.indicator(x)) ++hits;
            }
            const double f = static_cast<double>(hits) / static_cast<double>(opts.samples);
            const double se = std::sqrt(std::max(f * (1.0 - f), 0.0) /
                                        static_cast<double>(opts.samples));
            prof.values.push_back(root(f));
            // Delta method for p > 1; exact standard error of the fraction for p = 1.
            prof.stderrs.push_back(opts.p == 1.0 || f == 0.0
                                       ? se
                                       : se * std::pow(f, 1.0 / opts.p - 1.0) / opts.p);
        }
    }
    return prof;
}

AsymptoticEstimate asymptotic_density(const DensityProfile& profile, double tail_fraction,
                                      double conv_tol) {
    if (profile.values.empty()) throw DomainError("asymptotic_density: empty profile");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
        throw DomainError("asymptotic_density: tail_fraction must be in (0, 1]");
    }
    const std::size_t count = profile.values.size();
    const std::size_t tail =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * count)));
    AsymptoticEstimate est;
    est.tail_fraction = tail_fraction;
    est.tail_lo = profile.values[count - tail];
    est.tail_hi = est.tail_lo;
    for (std::size_t i = count - tail; i < count; ++i) {
        est.tail_lo = std::min(est.tail_lo, profile.values[i]);
        est.tail_hi = std::max(est.tail_hi, profile.values[i]);
    }
    est.value = est.tail_hi;
    est.converged = (est.tail_hi - est.tail_lo) <= conv_tol;
    return est;
}

DensityProfile regularity_defect(const UDSet& set, double l, const std::vector<double>& t_grid) {
    if (!(l > 0.0)) throw DomainError("regularity_defect: l must be positive");
    check_grid_within_window(t_grid, set.window_radius());
    const int n = set.dim();
    auto norms = sorted_norms(set);

    DensityProfile prof;
    prof.ts = t_grid;
    prof.method = ProfileMethod::volumetric;
    prof.p = 1.0;
    prof.values.reserve(t_grid.size());
    for (double t : t_grid) {
        double mass = union_mass_in_sphere(n, norms, t);
        if (t - l > 0.0) mass -= union_mass_in_sphere(n, norms, t - l);
        prof.values.push_back(std::max(mass, 0.0) / ball_volume(n, t));
    }
    return prof;
}

std::span<const PackingConstant> known_packing_constants() {
    static const PackingConstant table[] = {
        {1, 1.0, true, "Z1"},
        {2, kPi / 1.7320508075688772935 / 2.0, true, "hex"},       // pi / sqrt(12)
        {3, kPi / 4.2426406871192851464, true, "fcc"},             // pi / sqrt(18)
        {4, kPi * kPi / 16.0, false, "D4"},
        {5, kPi * kPi * 1.4142135623730950488 / 30.0, false, "D5"},
        {6, kPi * kPi * kPi * 1.7320508075688772935 / 144.0, false, "E6"},
        {7, kPi * kPi * kPi / 105.0, false, "E7"},
        {8, kPi * kPi * kPi * kPi / 384.0, false, "E8"},
    };
    return table;
}

TailSup tail_sup_R(const DensityProfile& profile, double lambda) {
    TailSup r;
    bool any = false;
    for (std::size_t i = 0; i < profile.ts.size(); ++i) {
        if (profile.ts[i] < lambda + 0.5) continue;
        if (!any) {
            r.from_t = profile.ts[i];
            r.value = profile.values[i];
            any = true;
        } else {
            r.value = std::max(r.value, profile.values[i]);
        }
        r.to_t = profile.ts[i];
        ++r.points;
    }
    if (!any) {
        throw DomainError("tail_sup_R: no grid point >= lambda + 1/2 = " +
                          std::to_string(lambda + 0.5));
    }
    return r;
}

}  // namespace udpack
