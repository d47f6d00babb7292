#pragma once

#include <functional>
#include <span>
#include <string>

#include "udpack/udset.hpp"

namespace udpack {

/// Probe kernel: continuous, supported in B(0, 1), valued in [0, 1], with
/// f(0) = 1 and radial symmetry f(rho(t)) = f(t). The default instance is
/// f(t) = 1 - 2 ||t|| on B(0, 1/2), 0 elsewhere.
struct ProbeFunction {
    std::string name;
    std::function<double(std::span<const double>)> eval;
};

ProbeFunction default_probe_function();

/// Finite collection of open probe balls: centers pairwise >= 1 apart
/// (within the UD tolerance), radii strictly inside (0, 1/2).
class ProbeCollection {
  public:
    static ProbeCollection validate(std::vector<Point> centers, std::vector<double> radii,
                                    double tol = kDefaultTolMin);
    std::size_t size() const { return centers_.size(); }
    const Point& center(std::size_t q) const { return centers_[q]; }
    double radius(std::size_t q) const { return radii_[q]; }

  private:
    std::vector<Point> centers_;
    std::vector<double> radii_;
};

/// Weighted counting functional: sum over probe balls and set points of
/// eps * f((point - center) / eps). Since supp f lies in B(0, 1) and
/// eps < 1/2 < min distance, at most one point contributes per ball
/// (checked). phi(empty set) = 0.
double phi(const UDSet& set, const ProbeCollection& collection, const ProbeFunction& f);

struct RatioSolution {
    double value = 0.0;
    std::vector<int> selected;  // candidate indices, ascending
};

/// Exact maximum over all non-empty subcollections S of the pool of
///   | sum_{q in S} a_q |  /  (1/2 + ||alpha|| + sum_{q in S} ||alpha - c_q||),
/// where a_q is the per-ball phi difference of the two packings. Solver:
/// candidates are split by the sign of a_q; within a sign class they are
/// sorted by a_q / w_q descending and extended greedily while the running
/// ratio strictly increases (mixing signs is never optimal: dropping an
/// opposite-sign term raises |numerator| and lowers the denominator). The
/// chosen subset's ratio is re-evaluated in candidate-index order, so the
/// value is bit-identical to an exhaustive subset search. Empty pool -> 0.
RatioSolution probe_pseudometric(const UDSet& a, const UDSet& b, const Point& alpha,
                                 const ProbeCollection& pool, const ProbeFunction& f);

/// Candidate-family budgets for the metric lower-bound estimators. All d / D
/// outputs are lower bounds: the supremum over uncountably many probe data
/// cannot be certified by a finite computation.
struct ProbeBudget {
    int max_alpha = 128;
    int max_centers = 256;
    int max_x = 128;
    double radius_base = 0.49;  // radii grid: base / 2^k down to min_radius
    double min_radius = 0.05;
};

/// Lower bound on the base metric d: maximizes the probe pseudo-metric over
/// alpha in {origin} + points of both sets, probe centers at points of both
/// sets and midpoints of close cross pairs (deduplicated to pairwise >= 1),
/// radii on the geometric grid. Result clamped to [0, 1].
double metric_d_lower(const UDSet& a, const UDSet& b, const ProbeFunction& f,
                      const ProbeBudget& budget = {});

/// Lower bound on the pp-metric D = sup_x d(A - x, B - x): maximizes
/// metric_d_lower over x in extra_x + {origin} + points of both sets
/// (extra candidates first, never truncated by the budget). Passing the
/// rigid-motion images/preimages of the origin as extras makes the candidate
/// families exactly covariant, so invariance holds to rounding.
double metric_D_lower(const UDSet& a, const UDSet& b, const ProbeFunction& f,
                      const ProbeBudget& budget = {}, const std::vector<Point>& extra_x = {});

/// Hausdorff distance of the two sets restricted to the closed ball of the
/// given radius. Throws EmptySetError if either restriction is empty.
double hausdorff_window(const UDSet& a, const UDSet& b, double window_radius);

struct PairMatch {
    Point lambda;
    Point lambda_prime;
    double displacement = 0.0;
    double bound_anchored = 0.0;   // (1/2 + ||lambda - x||) * eps
    double bound_global = 0.0;  // eps / 2
    bool satisfied = false;     // displacement <= bound_anchored
};

/// The lambda -> lambda' matching with per-point displacement bounds. Both
/// applicable thresholds are recorded per match rather than choosing one.
struct PairingReport {
    Point x;
    double epsilon = 0.0;
    double eligible_radius = 0.0;  // (1 - eps) / (2 eps)
    std::vector<PairMatch> matches;
    std::vector<Point> unmatched;  // eligible points with no partner within 1/2
    double max_displacement = 0.0;
};

/// For each point of `a` with ||lambda - x|| < (1 - eps) / (2 eps), reports
/// the unique point of `b` within distance 1/2 (uniqueness is automatic for
/// uniformly discrete sets and asserted), or records it as unmatched.
PairingReport pairing(const UDSet& a, const UDSet& b, const Point& x, double eps);

}  // namespace udpack
