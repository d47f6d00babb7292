#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "udpack/density.hpp"
#include "udpack/metrics.hpp"
#include "udpack/saturate.hpp"
#include "udpack/splice.hpp"
#include "udpack/udset.hpp"

namespace udpack {

/// Canonical decimal form (17 significant digits): parsing it back yields the
/// exact double, so write-read-write round trips are byte identical.
std::string format_double(double v);

// UDPACK text format:
//   line 1: UDPACK 1
//   line 2: dim=<n> window=<R_w>
//   then one point per line, n whitespace-separated coordinates; '#' starts a
//   comment. Points are written sorted lexicographically.
void write_packing(std::ostream& os, const UDSet& set);
void write_packing_file(const std::string& path, const UDSet& set);
UDSet read_packing(std::istream& is, double tol_min = kDefaultTolMin);
UDSet read_packing_file(const std::string& path, double tol_min = kDefaultTolMin);

/// CSV: header t,value,method,p (plus a stderr column when the profile
/// carries Monte Carlo standard errors), full decimal precision.
void write_profile_csv(std::ostream& os, const DensityProfile& profile);

/// CSV: lambda_coords,lambda_prime_coords,displacement,bound,satisfied.
/// Coordinates are space-separated inside their field; unmatched points
/// appear with an empty partner field and satisfied=0.
void write_pairing_csv(std::ostream& os, const PairingReport& report);

/// One line per entry: `i m_i lambda_i mdist_cert r_cert` (0-based source
/// indices; the closing entry carries nan certificates). A leading
/// `# growth=<a>` comment records the growth factor.
void write_schedule(std::ostream& os, const AnnulusSchedule& schedule);
AnnulusSchedule read_schedule(std::istream& is);

/// `saturated|not-saturated|indeterminate m=<m> pitch=<p>` plus
/// `witness=<inserted points>` / `removed=<removed points>` when present
/// (points ;-separated, coordinates space-separated).
std::string format_verdict(const SaturationVerdict& verdict);

/// One packing path per line; '#' comments and blank lines ignored.
std::vector<std::string> read_manifest(std::istream& is);

/// key=value lines; '#' comments and blank lines ignored.
std::map<std::string, std::string> read_config(std::istream& is);

}  // namespace udpack
