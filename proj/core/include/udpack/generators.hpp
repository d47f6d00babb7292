#pragma once

#include <cstdint>
#include <string_view>

#include "udpack/udset.hpp"

namespace udpack {

/// All points of the lattice spanned by `basis` (row-major dim x dim, rows are
/// generators) with norm <= window_radius, after rescaling the lattice so its
/// shortest nonzero vector has length exactly 1 (then optionally multiplying
/// by `scale` >= 1). The shortest vector is found by exhaustive search inside
/// a box whose side is certified by sigma_min(basis) >= 1 / ||basis^{-1}||_F.
/// Throws on a singular basis or when the enumeration box exceeds the budget.
UDSet gen_lattice(const std::vector<double>& basis, int dim, double window_radius,
                  double scale = 1.0, std::uint64_t enum_budget = 40'000'000);

/// Named reference lattices: "Z1".."Z8", "hex" (2-D), "fcc" (3-D), "d4" (4-D).
UDSet gen_named_lattice(std::string_view name, double window_radius, double scale = 1.0);

/// Random sequential adsorption inside B(0, window_radius): repeatedly draw
/// uniform candidates, accept iff at distance >= 1 from every accepted point,
/// stop after max_failures consecutive rejections. Deterministic given seed
/// (fixed-algorithm generator, arithmetic-only sampling).
UDSet gen_rsa(int dim, double window_radius, std::uint64_t seed, std::uint64_t max_failures);

}  // namespace udpack
