#include "udpack/udset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "udpack/linalg.hpp"

namespace udpack {

namespace {

std::string point_str(std::span<const double> p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

void sort_rows(std::vector<double>& flat, int dim) {
    const std::size_t count = flat.size() / dim;
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lex_less({flat.data() + a * dim, static_cast<std::size_t>(dim)},
                        {flat.data() + b * dim, static_cast<std::size_t>(dim)});
    });
    std::vector<double> sorted(flat.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::copy_n(flat.data() + order[i] * dim, dim, sorted.data() + i * dim);
    }
    flat.swap(sorted);
}

}  // namespace

RotationMatrix RotationMatrix::identity(int n) {
    RotationMatrix m;
    m.dim = n;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m.entries[i * n + i] = 1.0;
    return m;
}

double RotationMatrix::orthogonality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += entries[k * dim + i] * entries[k * dim + j];
            worst = std::max(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

Point RotationMatrix::apply(std::span<const double> x) const {
    Point y(dim);
    mat_apply(entries, dim, x, y);
    return y;
}

RotationMatrix RotationMatrix::times(const RotationMatrix& other) const {
    RotationMatrix r;
    r.dim = dim;
    r.entries.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k) {
            const double a = entries[i * dim + k];
            if (a == 0.0) continue;
            for (int j = 0; j < dim; ++j) r.entries[i * dim + j] += a * other.entries[k * dim + j];
        }
    }
    return r;
}

RotationMatrix RotationMatrix::transpose() const {
    RotationMatrix r;
    r.dim = dim;
    r.entries.resize(entries.size());
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) r.entries[j * dim + i] = entries[i * dim + j];
    }
    return r;
}

RigidMotion RigidMotion::identity(int n) {
    return {RotationMatrix::identity(n), Point(n, 0.0)};
}

RigidMotion RigidMotion::pure_translation(Point t) {
    const int n = static_cast<int>(t.size());
    return {RotationMatrix::identity(n), std::move(t)};
}

Point RigidMotion::apply(std::span<const double> x) const {
    Point y = rotation.apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
    return y;
}

RigidMotion RigidMotion::compose(const RigidMotion& other) const {
    // (rho, t)(rho', t') = (rho rho', rho(t') + t)
    RigidMotion r;
    r.rotation = rotation.times(other.rotation);
    r.translation = rotation.apply(other.translation);
    for (std::size_t i = 0; i < r.translation.size(); ++i) r.translation[i] += translation[i];
    return r;
}

UDSet UDSet::empty(int dim, double window_radius) {
    return validate_flat({}, dim, window_radius);
}

UDSet UDSet::validate(std::vector<Point> points, int dim, double window_radius, double tol_min) {
    std::vector<double> flat;
    flat.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != dim) {
            throw DomainError("validate: point dimension mismatch");
        }
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return validate_flat(std::move(flat), dim, window_radius, tol_min);
}

UDSet UDSet::validate_flat(std::vector<double> flat, int dim, double window_radius,
                           double tol_min) {
    if (dim < 1) throw DomainError("validate: dimension must be >= 1");
    if (window_radius < 0.0) throw DomainError("validate: negative window radius");
    if (flat.size() % dim != 0) throw DomainError("validate: flat array size mismatch");

    for (double c : flat) {
        if (!std::isfinite(c)) throw DomainError("validate: non-finite coordinate");
    }
    sort_rows(flat, dim);

    UDSet set;
    set.dim_ = dim;
    set.window_ = window_radius;
    set.tol_min_ = tol_min;
    set.flat_ = std::move(flat);
    set.grid_ = std::make_shared<SpatialGrid>(set.flat_, dim, 1.0);

    const double min_allowed = 1.0 - tol_min;
    const double attain_radius = 1.0 + tol_min;
    std::vector<int> hits;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto p = set.point(i);
        const double nrm = norm(p);
        if (nrm > window_radius + tol_min) {
            throw OutOfWindowError("validate: point " + point_str(p) + " has norm " +
                                       std::to_string(nrm) + " > window " +
                                       std::to_string(window_radius),
                                   set.point_copy(i), nrm, window_radius);
        }
        hits.clear();
        set.grid_->neighbors_within(p, attain_radius, hits);
        for (int j : hits) {
            if (static_cast<std::size_t>(j) == i) continue;
            const double d = dist(p, set.point(j));
            if (d < min_allowed) {
                throw MinDistanceViolation(
                    "validate: points " + point_str(p) + " and " + point_str(set.point(j)) +
                        " at distance " + std::to_string(d) + " < 1 - tol",
                    set.point_copy(i), set.point_copy(j), d);
            }
            set.attained_ = true;  // a pair within 1 + tol exists
        }
    }
    return set;
}

const SpatialGrid& UDSet::grid() const {
    if (!grid_) throw DomainError("UDSet: uninitialized set has no grid");
    return *grid_;
}

double UDSet::nearest_distance(std::span<const double> x) const {
    if (!grid_ || is_empty()) return std::numeric_limits<double>::infinity();
    return grid_->nearest_distance(x);
}

bool UDSet::indicator(std::span<const double> x) const {
    if (is_empty()) return false;
    if (static_cast<int>(x.size()) != dim_) throw DomainError("indicator: dimension mismatch");
    return grid_->any_within(x, 0.5);
}

UDSet transform(const UDSet& set, const RigidMotion& motion) {
    if (motion.rotation.dim != set.dim() ||
        static_cast<int>(motion.translation.size()) != set.dim()) {
        throw DomainError("transform: dimension mismatch");
    }
    if (!motion.rotation.is_orthogonal()) {
        throw DomainError("transform: rotation matrix is not orthogonal (defect " +
                          std::to_string(motion.rotation.orthogonality_defect()) + ")");
    }
    std::vector<double> flat;
    flat.reserve(set.flat().size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        Point y = motion.apply(set.point(i));
        flat.insert(flat.end(), y.begin(), y.end());
    }
    const double new_window = set.window_radius() + norm(motion.translation);
    UDSet out = UDSet::validate_flat(std::move(flat), set.dim(), new_window, set.tol_min());
    out.set_generator_tag(set.generator_tag());
    return out;
}

UDSet restrict_annulus(const UDSet& set, const Annulus& annulus) {
    std::vector<double> flat;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double nrm = norm(set.point(i));
        if (nrm >= annulus.lo && nrm <= annulus.hi) {
            auto p = set.point(i);
            flat.insert(flat.end(), p.begin(), p.end());
        }
    }
    UDSet out = UDSet::validate_flat(std::move(flat), set.dim(), set.window_radius(),
                                     set.tol_min());
    out.set_generator_tag(set.generator_tag());
    return out;
}

UDSet union_checked(const UDSet& a, const UDSet& b) {
    if (a.dim() != b.dim()) throw DomainError("union: dimension mismatch");
    const double tol = std::min(a.tol_min(), b.tol_min());
    std::vector<double> flat(a.flat().begin(), a.flat().end());

    // Deduplicate: drop b-points closer than tol to an a-point.
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto p = b.point(i);
        if (!a.is_empty() && a.nearest_distance(p) < tol) continue;
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return UDSet::validate_flat(std::move(flat), a.dim(),
                                std::max(a.window_radius(), b.window_radius()), tol);
}

}  // namespace udpack
