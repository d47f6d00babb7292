#include "udpack/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "udpack/linalg.hpp"

namespace udpack {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_point(std::span<const double> p, char sep = ' ') {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += sep;
        s += format_double(p[i]);
    }
    return s;
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

void write_packing(std::ostream& os, const UDSet& set) {
    os << "UDPACK 1\n";
    os << "dim=" << set.dim() << " window=" << format_double(set.window_radius()) << "\n";
    if (!set.generator_tag().empty()) os << "# generator: " << set.generator_tag() << "\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        os << format_point(set.point(i)) << "\n";
    }
}

void write_packing_file(const std::string& path, const UDSet& set) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FileFormatError("cannot open for writing: " + path);
    write_packing(os, set);
    if (!os) throw FileFormatError("write failed: " + path);
}

UDSet read_packing(std::istream& is, double tol_min) {
    std::string line;
    int lineno = 0;

    if (!std::getline(is, line)) throw FileFormatError("empty packing file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "UDPACK 1") {
        if (line.rfind("UDPACK", 0) == 0) {
            throw FileFormatError("unsupported UDPACK version: '" + line + "'", lineno);
        }
        throw FileFormatError("missing UDPACK header", lineno);
    }

    if (!std::getline(is, line)) throw FileFormatError("missing dim/window line", 2);
    ++lineno;
    int dim = 0;
    double window = 0.0;
    if (std::sscanf(line.c_str(), "dim=%d window=%lf", &dim, &window) != 2 || dim < 1) {
        throw FileFormatError("malformed dim/window line: '" + line + "'", lineno);
    }

    std::vector<double> flat;
    std::vector<int> point_line;  // source line of each point, for error reports
    std::string tag;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.rfind("# generator: ", 0) == 0) {
            tag = line.substr(13);
            if (!tag.empty() && tag.back() == '\r') tag.pop_back();
            continue;
        }
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        std::istringstream row(body);
        double c;
        int got = 0;
        while (row >> c) {
            flat.push_back(c);
            ++got;
        }
        if (got != dim) {
            throw FileFormatError("expected " + std::to_string(dim) + " coordinates, got " +
                                      std::to_string(got),
                                  lineno);
        }
        point_line.push_back(lineno);
    }

    auto line_of = [&](const Point& p) {
        for (std::size_t i = 0; i * dim < flat.size(); ++i) {
            if (std::equal(p.begin(), p.end(), flat.begin() + i * dim)) return point_line[i];
        }
        return -1;
    };
    try {
        UDSet set = UDSet::validate_flat(std::vector<double>(flat), dim, window, tol_min);
        set.set_generator_tag(tag);
        return set;
    } catch (const MinDistanceViolation& e) {
        throw FileFormatError(std::string("validation failed: ") + e.what() + " (lines " +
                                  std::to_string(line_of(e.a)) + " and " +
                                  std::to_string(line_of(e.b)) + ")",
                              line_of(e.a));
    } catch (const OutOfWindowError& e) {
        throw FileFormatError(std::string("validation failed: ") + e.what() + " (line " +
                                  std::to_string(line_of(e.point)) + ")",
                              line_of(e.point));
    }
}

UDSet read_packing_file(const std::string& path, double tol_min) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FileFormatError("cannot open: " + path);
    return read_packing(is, tol_min);
}

void write_profile_csv(std::ostream& os, const DensityProfile& profile) {
    const bool with_stderr = !profile.stderrs.empty();
    os << (with_stderr ? "t,value,method,p,stderr\n" : "t,value,method,p\n");
    for (std::size_t i = 0; i < profile.ts.size(); ++i) {
        os << format_double(profile.ts[i]) << "," << format_double(profile.values[i]) << ","
           << to_string(profile.method) << "," << format_double(profile.p);
        if (with_stderr) os << "," << format_double(profile.stderrs[i]);
        os << "\n";
    }
}

void write_pairing_csv(std::ostream& os, const PairingReport& report) {
    os << "lambda_coords,lambda_prime_coords,displacement,bound,satisfied\n";
    for (const auto& m : report.matches) {
        os << format_point(m.lambda) << "," << format_point(m.lambda_prime) << ","
           << format_double(m.displacement) << "," << format_double(m.bound_anchored) << ","
           << (m.satisfied ? 1 : 0) << "\n";
    }
    for (const auto& p : report.unmatched) {
        os << format_point(p) << ",,,," << 0 << "\n";
    }
}

void write_schedule(std::ostream& os, const AnnulusSchedule& schedule) {
    os << "# growth=" << format_double(schedule.growth) << "\n";
    for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
        const auto& e = schedule.entries[i];
        os << (i + 1) << " " << e.source_index << " " << format_double(e.lambda) << " "
           << format_double(e.mdist_cert) << " " << format_double(e.r_cert) << "\n";
    }
}

AnnulusSchedule read_schedule(std::istream& is) {
    AnnulusSchedule schedule;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.rfind("# growth=", 0) == 0) {
            schedule.growth = std::strtod(line.c_str() + 9, nullptr);
            continue;
        }
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        std::istringstream row(body);
        std::string tok_i, tok_m, tok_lambda, tok_cert, tok_r;
        if (!(row >> tok_i >> tok_m >> tok_lambda >> tok_cert >> tok_r)) {
            throw FileFormatError("malformed schedule entry: '" + line + "'", lineno);
        }
        // strtod, not stream extraction: the closing entry's certificates are
        // written as nan, which istream refuses to parse
        ScheduleEntry e;
        e.source_index = static_cast<int>(std::strtol(tok_m.c_str(), nullptr, 10));
        e.lambda = std::strtod(tok_lambda.c_str(), nullptr);
        e.mdist_cert = std::strtod(tok_cert.c_str(), nullptr);
        e.r_cert = std::strtod(tok_r.c_str(), nullptr);
        schedule.entries.push_back(e);
    }
    if (schedule.entries.size() < 2) {
        throw FileFormatError("schedule needs at least one annulus (two entries)");
    }
    return schedule;
}

std::string format_verdict(const SaturationVerdict& verdict) {
    std::string s = to_string(verdict.status) + " m=" + std::to_string(verdict.m) +
                    " pitch=" + format_double(verdict.pitch);
    if (!verdict.inserted.empty()) {
        s += " witness=";
        for (std::size_t i = 0; i < verdict.inserted.size(); ++i) {
            if (i) s += ";";
            s += format_point(verdict.inserted[i]);
        }
    }
    if (!verdict.removed.empty()) {
        s += " removed=";
        for (std::size_t i = 0; i < verdict.removed.size(); ++i) {
            if (i) s += ";";
            s += format_point(verdict.removed[i]);
        }
    }
    return s;
}

std::vector<std::string> read_manifest(std::istream& is) {
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(is, line)) {
        std::string body = strip_comment(line);
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ' || body.back() == '\t')) {
            body.pop_back();
        }
        std::size_t start = body.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        paths.push_back(body.substr(start));
    }
    return paths;
}

std::map<std::string, std::string> read_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw FileFormatError("config line without '=': '" + line + "'", lineno);
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
    }
    return kv;
}

}  // namespace udpack
