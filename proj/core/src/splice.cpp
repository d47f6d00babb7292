#include "udpack/splice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "udpack/linalg.hpp"

namespace udpack {

namespace {

double pow2_neg(int k) { return std::ldexp(1.0, -k); }

void check_sequence(const std::vector<UDSet>& seq) {
    if (seq.empty()) throw DomainError("splice: empty sequence");
    for (const auto& s : seq) {
        if (s.dim() != seq.front().dim()) throw DomainError("splice: mixed dimensions in sequence");
    }
}

}  // namespace

AnnulusSchedule select_schedule(const std::vector<UDSet>& seq, double p,
                                const std::vector<double>& t_grid, int depth,
                                const ScheduleOptions& opts) {
    check_sequence(seq);
    if (depth < 1) throw DomainError("select_schedule: depth must be >= 1");
    if (!(opts.growth > 1.0)) throw DomainError("select_schedule: growth factor must be > 1");

    AnnulusSchedule sched;
    sched.growth = opts.growth;
    sched.grid_min = t_grid.front();
    sched.grid_max = t_grid.back();

    MarcinOptions mopts = opts.marcin;
    mopts.tail_fraction = 1.0;  // certificates use the whole grid, not a tail window

    int m = 0;
    double lambda_prev = 0.0;
    for (int i = 1; i <= depth; ++i) {
        // Subsequence step: first m' > m with estimated distance <= 2^{-(i+1)}.
        const double dist_threshold = pow2_neg(i + 1);
        int m_next = -1;
        MdistResult pair_dist;
        for (int cand = m + 1; cand < static_cast<int>(seq.size()); ++cand) {
            MdistResult est = mdist(seq[m], seq[cand], p, t_grid, mopts);
            if (est.estimate.value <= dist_threshold) {
                m_next = cand;
                pair_dist = std::move(est);
                break;
            }
        }
        if (m_next < 0) {
            throw ScheduleExhausted(
                "select_schedule: no index after " + std::to_string(m) +
                    " within distance 2^-" + std::to_string(i + 1) +
                    " — sequence not verifiably Cauchy at this resolution (step " +
                    std::to_string(i) + ")",
                i);
        }

        // Radius step: smallest grid lambda >= max(1, a*lambda_prev*(1+eps))
        // whose tail sup of the pair's difference profile is <= 2^{-i}.
        const double lambda_min =
            i == 1 ? 1.0 : opts.growth * lambda_prev * (1.0 + opts.lambda_margin);
        const double r_threshold = pow2_neg(i);
        double lambda = -1.0;
        double r_cert = 0.0;
        for (double cand : t_grid) {
            if (cand < lambda_min) continue;
            if (cand + 0.5 > t_grid.back()) break;  // tail_sup needs coverage past lambda + 1/2
            const TailSup ts = tail_sup_R(pair_dist.profile, cand);
            if (ts.value <= r_threshold) {
                lambda = cand;
                r_cert = ts.value;
                break;
            }
        }
        if (lambda < 0.0) {
            throw ScheduleExhausted("select_schedule: no grid radius >= " +
                                        std::to_string(lambda_min) + " with tail sup <= 2^-" +
                                        std::to_string(i) + " (step " + std::to_string(i) + ")",
                                    i);
        }

        sched.entries.push_back({m, lambda, pair_dist.estimate.value, r_cert});
        m = m_next;
        lambda_prev = lambda;
    }

    // Closing entry: radius by the growth constraint only (its certificates
    // would involve a pair beyond the selected subsequence).
    const double lambda_min = opts.growth * lambda_prev * (1.0 + opts.lambda_margin);
    double lambda_close = -1.0;
    for (double cand : t_grid) {
        if (cand >= lambda_min) {
            lambda_close = cand;
            break;
        }
    }
    if (lambda_close < 0.0) {
        throw ScheduleExhausted("select_schedule: no grid radius >= " +
                                    std::to_string(lambda_min) + " to close the final annulus",
                                depth + 1);
    }
    const double nan = std::nan("");
    sched.entries.push_back({m, lambda_close, nan, nan});
    return sched;
}

UDSet build_splice(const std::vector<UDSet>& seq, const AnnulusSchedule& schedule) {
    check_sequence(seq);
    if (schedule.depth() < 1) throw DomainError("build_splice: schedule has no annuli");
    const int n = seq.front().dim();
    const double window = schedule.entries.back().lambda - 0.5;

    for (int i = 0; i <= schedule.depth(); ++i) {
        const auto& e = schedule.entries[i];
        if (e.source_index < 0 || e.source_index >= static_cast<int>(seq.size())) {
            throw DomainError("build_splice: schedule source index out of range");
        }
        if (i < schedule.depth() &&
            seq[e.source_index].window_radius() < schedule.entries[i + 1].lambda - 0.5) {
            throw DomainError("build_splice: source window too small for annulus " +
                              std::to_string(i));
        }
    }

    UDSet acc = UDSet::empty(n, window);
    for (int i = 0; i < schedule.depth(); ++i) {
        UDSet slice = restrict_annulus(seq[schedule.entries[i].source_index], schedule.annulus(i));
        acc = union_checked(acc, slice);
    }
    // union_checked carries the max source window; restate the honest support.
    UDSet out = UDSet::validate_flat(std::vector<double>(acc.flat().begin(), acc.flat().end()), n,
                                     window, acc.tol_min());
    out.set_generator_tag("splice");
    return out;
}

SpliceReport verify_splice(const UDSet& splice, const std::vector<UDSet>& seq,
                           const AnnulusSchedule& schedule, double p,
                           const std::vector<double>& t_grid, const MarcinOptions& opts,
                           double allowance) {
    check_sequence(seq);
    SpliceReport report;
    report.allowance = allowance;

    // Cap the grid to what the splice window supports.
    std::vector<double> grid;
    for (double t : t_grid) {
        if (t <= splice.window_radius() - 0.5 + 1e-9) grid.push_back(t);
    }
    if (grid.empty()) throw DomainError("verify_splice: grid entirely beyond the splice window");
    report.grid_max = grid.back();

    for (int i = 0; i < schedule.depth(); ++i) {
        MarcinOptions mo = opts;
        mo.seed = opts.seed + static_cast<std::uint64_t>(i);
        const auto r = mdist(splice, seq[schedule.entries[i].source_index], p, grid, mo);
        report.mdist_to_sources.push_back(r.estimate.value);
    }
    for (std::size_t i = 1; i < report.mdist_to_sources.size(); ++i) {
        if (report.mdist_to_sources[i] > report.mdist_to_sources[i - 1] + allowance) {
            report.nonincreasing_ok = false;
        }
    }

    const auto& last = seq[schedule.entries[schedule.depth() - 1].source_index];
    DensityOptions dopts;
    dopts.method = ProfileMethod::counting;
    report.density_splice = asymptotic_density(density_profile(splice, grid, dopts)).value;
    std::vector<double> src_grid;
    for (double t : t_grid) {
        if (t <= last.window_radius() - 0.5 + 1e-9) src_grid.push_back(t);
    }
    report.density_last_source =
        asymptotic_density(density_profile(last, src_grid, dopts)).value;
    report.density_gap = std::fabs(report.density_splice - report.density_last_source);
    return report;
}

}  // namespace udpack
