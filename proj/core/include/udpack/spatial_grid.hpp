#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "udpack/errors.hpp"

namespace udpack {
namespace detail {

struct CellHash {
    std::size_t operator()(const std::vector<std::int32_t>& key) const noexcept {
        // FNV-1a over the cell coordinates.
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int32_t v : key) {
            auto u = static_cast<std::uint32_t>(v);
            for (int b = 0; b < 4; ++b) {
                h ^= (u >> (8 * b)) & 0xFFu;
                h *= 1099511628211ULL;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

/// Uniform hash grid over R^n supporting incremental insertion. Used by the
/// generators and by saturation, which grow a point set one point at a time;
/// the public SpatialGrid wraps it as an immutable index.
class DynamicGrid {
  public:
    DynamicGrid(int dim, double cell_size);

    int insert(std::span<const double> p);
    /// Appends indices of stored points at distance <= rho from x (sorted).
    void neighbors_within(std::span<const double> x, double rho, std::vector<int>& out) const;
    /// True iff some stored point lies within rho of x. Allocation-free and
    /// early-exiting; the indicator evaluation hot path.
    bool any_within(std::span<const double> x, double rho) const;
    /// Distance to the nearest stored point; +infinity when empty.
    double nearest_distance(std::span<const double> x) const;
    std::span<const double> point(int i) const {
        return {pts_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::size_t size() const { return pts_.size() / dim_; }
    int dim() const { return dim_; }
    double cell_size() const { return cell_; }

  private:
    // Squared distance from x to the axis-aligned box of cell `key`.
    double cell_box_dist2(std::span<const double> x, const std::vector<std::int32_t>& key) const;

    int dim_;
    double cell_;
    double max_abs_coord_ = 0.0;
    std::vector<double> pts_;
    std::unordered_map<std::vector<std::int32_t>, std::vector<int>, CellHash> cells_;
};

}  // namespace detail

/// Immutable uniform-grid spatial index. Every stored point lies in the cell
/// floor(coord / cell_size); a query of radius rho inspects exactly the cells
/// intersecting the query ball (cells whose box is farther than rho are pruned).
class SpatialGrid {
  public:
    /// Builds the index over `count` points stored flat (dim doubles each).
    SpatialGrid(std::span<const double> flat_points, int dim, double cell_size = 1.0);

    /// Indices (ascending) of stored points at distance <= rho from x.
    std::vector<int> neighbors_within(std::span<const double> x, double rho) const;
    void neighbors_within(std::span<const double> x, double rho, std::vector<int>& out) const;

    /// True iff some stored point lies within rho of x.
    bool any_within(std::span<const double> x, double rho) const {
        return grid_.any_within(x, rho);
    }

    /// Distance to the nearest stored point; +infinity when the grid is empty.
    double nearest_distance(std::span<const double> x) const;

    std::span<const double> point(int i) const { return grid_.point(i); }
    std::size_t size() const { return grid_.size(); }
    int dim() const { return grid_.dim(); }
    double cell_size() const { return grid_.cell_size(); }

  private:
    detail::DynamicGrid grid_;
};

}  // namespace udpack
