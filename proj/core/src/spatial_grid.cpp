#include "udpack/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udpack/linalg.hpp"

namespace udpack {
namespace detail {

DynamicGrid::DynamicGrid(int dim, double cell_size) : dim_(dim), cell_(cell_size) {
    if (dim < 1) throw DomainError("grid: dimension must be >= 1");
    if (!(cell_size > 0.0)) throw DomainError("grid: cell size must be positive");
}

int DynamicGrid::insert(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim_) throw DomainError("grid: dimension mismatch on insert");
    const int idx = static_cast<int>(size());
    std::vector<std::int32_t> key(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!std::isfinite(p[i])) throw DomainError("grid: non-finite coordinate");
        key[i] = static_cast<std::int32_t>(std::floor(p[i] / cell_));
        max_abs_coord_ = std::max(max_abs_coord_, std::fabs(p[i]));
    }
    pts_.insert(pts_.end(), p.begin(), p.end());
    cells_[key].push_back(idx);
    return idx;
}

double DynamicGrid::cell_box_dist2(std::span<const double> x,
                                   const std::vector<std::int32_t>& key) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double lo = key[i] * cell_;
        const double hi = lo + cell_;
        double d = 0.0;
        if (x[i] < lo) d = lo - x[i];
        else if (x[i] > hi) d = x[i] - hi;
        s += d * d;
    }
    return s;
}

void DynamicGrid::neighbors_within(std::span<const double> x, double rho,
                                   std::vector<int>& out) const {
    if (static_cast<int>(x.size()) != dim_) throw DomainError("grid: dimension mismatch in query");
    if (rho < 0.0) throw DomainError("grid: negative query radius");
    if (cells_.empty()) return;
    const double rho2 = rho * rho;
    std::vector<std::int32_t> lo(dim_), hi(dim_), key(dim_);
    for (int i = 0; i < dim_; ++i) {
        lo[i] = static_cast<std::int32_t>(std::floor((x[i] - rho) / cell_));
        hi[i] = static_cast<std::int32_t>(std::floor((x[i] + rho) / cell_));
        key[i] = lo[i];
    }
    for (;;) {
        if (cell_box_dist2(x, key) <= rho2) {
            auto it = cells_.find(key);
            if (it != cells_.end()) {
                for (int idx : it->second) {
                    if (dist2(point(idx), x) <= rho2) out.push_back(idx);
                }
            }
        }
        int axis = 0;
        while (axis < dim_) {
            if (++key[axis] <= hi[axis]) break;
            key[axis] = lo[axis];
            ++axis;
        }
        if (axis == dim_) break;
    }
    std::sort(out.begin(), out.end());
}

bool DynamicGrid::any_within(std::span<const double> x, double rho) const {
    if (static_cast<int>(x.size()) != dim_) throw DomainError("grid: dimension mismatch in query");
    if (cells_.empty()) return false;
    const double rho2 = rho * rho;
    // stack storage for the usual small dimensions
    std::int32_t lo_buf[16], hi_buf[16];
    std::vector<std::int32_t> lo_heap, hi_heap;
    std::int32_t *lo = lo_buf, *hi = hi_buf;
    if (dim_ > 16) {
        lo_heap.resize(dim_);
        hi_heap.resize(dim_);
        lo = lo_heap.data();
        hi = hi_heap.data();
    }
    thread_local std::vector<std::int32_t> key;
    key.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        lo[i] = static_cast<std::int32_t>(std::floor((x[i] - rho) / cell_));
        hi[i] = static_cast<std::int32_t>(std::floor((x[i] + rho) / cell_));
        key[i] = lo[i];
    }
    for (;;) {
        if (cell_box_dist2(x, key) <= rho2) {
            auto it = cells_.find(key);
            if (it != cells_.end()) {
                for (int idx : it->second) {
                    if (dist2(point(idx), x) <= rho2) return true;
                }
            }
        }
        int axis = 0;
        while (axis < dim_) {
            if (++key[axis] <= hi[axis]) break;
            key[axis] = lo[axis];
            ++axis;
        }
        if (axis == dim_) break;
    }
    return false;
}

double DynamicGrid::nearest_distance(std::span<const double> x) const {
    if (size() == 0) return std::numeric_limits<double>::infinity();
    std::vector<int> hits;
    double r = cell_;
    // any stored point is within max_abs * sqrt(n) + ||x|| of x
    const double r_cap =
        max_abs_coord_ * std::sqrt(static_cast<double>(dim_)) + norm(x) + cell_ + 1.0;
    for (;;) {
        hits.clear();
        neighbors_within(x, r, hits);
        if (!hits.empty()) {
            double best = std::numeric_limits<double>::infinity();
            for (int idx : hits) best = std::min(best, dist2(point(idx), x));
            return std::sqrt(best);
        }
        if (r > r_cap) return std::numeric_limits<double>::infinity();
        r *= 2.0;
    }
}

}  // namespace detail

SpatialGrid::SpatialGrid(std::span<const double> flat_points, int dim, double cell_size)
    : grid_(dim, cell_size) {
    if (flat_points.size() % dim != 0) throw DomainError("grid: flat point array size mismatch");
    const std::size_t count = flat_points.size() / dim;
    for (std::size_t i = 0; i < count; ++i) {
        grid_.insert(flat_points.subspan(i * dim, dim));
    }
}

std::vector<int> SpatialGrid::neighbors_within(std::span<const double> x, double rho) const {
    std::vector<int> out;
    grid_.neighbors_within(x, rho, out);
    return out;
}

void SpatialGrid::neighbors_within(std::span<const double> x, double rho,
                                   std::vector<int>& out) const {
    grid_.neighbors_within(x, rho, out);
}

double SpatialGrid::nearest_distance(std::span<const double> x) const {
    return grid_.nearest_distance(x);
}

}  // namespace udpack
