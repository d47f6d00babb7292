#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udpack/errors.hpp"
#include "udpack/spatial_grid.hpp"

namespace udpack {

/// Default tolerance below the unit minimum distance that validation accepts.
inline constexpr double kDefaultTolMin = 1e-9;

/// Closed annulus lo <= ||x|| <= hi.
struct Annulus {
    Annulus(double lo, double hi) : lo(lo), hi(hi) {
        if (lo < 0.0 || hi < lo) throw DomainError("annulus: need 0 <= lo <= hi");
    }
    double lo;
    double hi;
};

struct RotationMatrix {
    int dim = 0;
    std::vector<double> entries;  // row-major dim x dim

    static RotationMatrix identity(int n);
    /// max |M^T M - I| entry-wise.
    double orthogonality_defect() const;
    bool is_orthogonal(double tol = 1e-12) const { return orthogonality_defect() <= tol; }
    Point apply(std::span<const double> x) const;
    RotationMatrix times(const RotationMatrix& other) const;
    RotationMatrix transpose() const;
};

/// Euclidean displacement (rho, t): x -> rho(x) + t.
/// Composition law: (rho, t)(rho', t') = (rho rho', rho(t') + t).
struct RigidMotion {
    RotationMatrix rotation;
    Point translation;

    static RigidMotion identity(int n);
    static RigidMotion pure_translation(Point t);
    Point apply(std::span<const double> x) const;
    RigidMotion compose(const RigidMotion& other) const;
};

/// Finite-window representation of a uniformly discrete set of constant 1:
/// the intersection of a conceptually infinite packing of unit-diameter balls'
/// centers with the closed ball B(0, window_radius). Immutable after
/// validation; points are stored sorted lexicographically so equality and
/// hashing are canonical. The empty set is valid.
class UDSet {
  public:
    UDSet() = default;

    /// Validates min pairwise distance >= 1 - tol_min and all norms <= window.
    /// Expected cost O(N 3^n) via the spatial grid.
    static UDSet validate(std::vector<Point> points, int dim, double window_radius,
                          double tol_min = kDefaultTolMin);
    static UDSet validate_flat(std::vector<double> flat, int dim, double window_radius,
                               double tol_min = kDefaultTolMin);
    static UDSet empty(int dim, double window_radius);

    int dim() const { return dim_; }
    double window_radius() const { return window_; }
    std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
    bool is_empty() const { return flat_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {flat_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> flat() const { return flat_; }
    Point point_copy(std::size_t i) const {
        auto s = point(i);
        return Point(s.begin(), s.end());
    }

    /// Whether the unit minimum distance is attained (some pair at distance
    /// <= 1 + tol_min). Finite windows of sparse packings may not attain it.
    bool min_distance_attained() const { return attained_; }
    double tol_min() const { return tol_min_; }

    const std::string& generator_tag() const { return tag_; }
    void set_generator_tag(std::string tag) { tag_ = std::move(tag); }

    const SpatialGrid& grid() const;
    /// Distance from x to the set; +infinity when empty.
    double nearest_distance(std::span<const double> x) const;
    /// Characteristic function of the derived ball system: 1 iff
    /// dist(x, set) <= 1/2 (closed balls of radius 1/2).
    bool indicator(std::span<const double> x) const;

    bool operator==(const UDSet& other) const {
        return dim_ == other.dim_ && flat_ == other.flat_;
    }

  private:
    int dim_ = 0;
    double window_ = 0.0;
    double tol_min_ = kDefaultTolMin;
    bool attained_ = false;
    std::vector<double> flat_;
    std::string tag_;
    std::shared_ptr<const SpatialGrid> grid_;
};

/// rho(Lambda) + t. Isometry, so the min-distance invariant is preserved; the
/// window is recomputed as window + ||t||. Throws on a non-orthogonal rotation.
UDSet transform(const UDSet& set, const RigidMotion& motion);

/// Points with lo <= ||x|| <= hi (closed annulus). Window unchanged.
UDSet restrict_annulus(const UDSet& set, const Annulus& annulus);

/// Union of two sets of equal dimension, deduplicating points closer than
/// tol_min; throws MinDistanceViolation (with witness pair) if the union is
/// not uniformly discrete. Window is the larger of the two.
UDSet union_checked(const UDSet& a, const UDSet& b);

}  // namespace udpack
