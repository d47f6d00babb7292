// udpack — uniformly discrete packings toolbox.
//
// Subcommands: gen, density, mdist, regularity, splice, metric, pair,
// saturate, msat. Text formats throughout (UDPACK packings, CSV profiles,
// schedule/verdict lines) so outputs diff cleanly; every randomized path
// requires an explicit --seed and is reproducible bit-for-bit.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "udpack/density.hpp"
#include "udpack/generators.hpp"
#include "udpack/geometry.hpp"
#include "udpack/io.hpp"
#include "udpack/marcin.hpp"
#include "udpack/metrics.hpp"
#include "udpack/saturate.hpp"
#include "udpack/splice.hpp"

namespace {

using namespace udpack;

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0.0, b = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3) {
        throw DomainError("grid spec must be <start>:<stop>:<step>, got '" + spec + "'");
    }
    return make_grid(a, b, step);
}

Point parse_point(const std::string& spec) {
    Point p;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        p.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (p.empty()) throw DomainError("empty point spec");
    return p;
}

std::vector<double> parse_basis(const std::string& spec, int& dim) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(spec);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_point(row));
    dim = static_cast<int>(rows.size());
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != dim) {
            throw DomainError("basis must be square: use 'a,b;c,d' row syntax");
        }
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}

ProfileMethod parse_profile_method(const std::string& name) {
    if (name == "counting") return ProfileMethod::counting;
    if (name == "volumetric") return ProfileMethod::volumetric;
    if (name == "montecarlo") return ProfileMethod::montecarlo;
    throw DomainError("unknown method '" + name + "'");
}

SymdiffMethod parse_symdiff_method(const std::string& name) {
    if (name == "exact-pairing") return SymdiffMethod::exact_pairing;
    if (name == "planar-exact") return SymdiffMethod::planar_exact;
    if (name == "montecarlo") return SymdiffMethod::montecarlo;
    throw DomainError("unknown method '" + name + "'");
}

// `--config <path>` names a key=value file whose entries act as defaults for
// the subcommand's long options; anything given explicitly on the command
// line wins. Implemented by argv expansion (CLI11's own config plumbing does
// not reach subcommand options).
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw FileFormatError("cannot open config: " + path);
    for (const auto& [key, value] : read_config(is)) {
        const std::string flag = "--" + key;
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (given) continue;
        if (value == "true") {
            args.push_back(flag);
        } else if (value == "false") {
            continue;
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

void add_config_option(CLI::App* sub) {
    // handled by expand_config_args before parsing; declared here so that
    // --help documents it
    sub->add_option("--config", "key=value defaults file (flags override)")
        ->type_name("PATH")
        ->expected(0, 1);
}

// Writes to --out when given, else stdout.
struct OutStream {
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.emplace(path, std::ios::binary);
            if (!*file) throw FileFormatError("cannot open for writing: " + path);
        }
    }
    std::ostream& get() { return file ? *file : std::cout; }
    std::optional<std::ofstream> file;
};

void print_estimate(std::ostream& os, const AsymptoticEstimate& est) {
    os << "# estimate value=" << format_double(est.value)
       << " tail_lo=" << format_double(est.tail_lo)
       << " tail_hi=" << format_double(est.tail_hi)
       << " tail_fraction=" << format_double(est.tail_fraction)
       << " converged=" << (est.converged ? 1 : 0) << "\n";
}

void require_seed_if(bool needed, bool seed_given, const std::string& what) {
    if (needed && !seed_given) {
        throw CLI::RequiredError("--seed (required for " + what + ")");
    }
}

struct GenArgs {
    std::string lattice, basis, out;
    bool rsa = false;
    int dim = 2;
    double window = 10.0, scale = 1.0;
    std::uint64_t seed = 0, max_failures = 10'000;
    bool seed_given = false;
};

struct ProfileArgs {
    std::string input, grid = "5:20:1", method = "counting", out;
    double p = 1.0, tail_fraction = 0.25, conv_tol = 0.02, l = 1.0;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

struct MdistArgs {
    std::string a, b, grid = "5:20:1", method = "montecarlo", out;
    double p = 1.0, tail_fraction = 0.25, conv_tol = 0.02;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

struct SpliceArgs {
    std::string manifest, grid = "1:31:1", method = "montecarlo", out, schedule_out;
    std::string verify_method = "planar-exact";
    int depth = 3;
    double growth = 2.0, p = 1.0;
    std::int64_t samples = 200'000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool verify = false;
};

struct MetricArgs {
    std::string a, b, kind = "pp", out;
    double window = 5.0;
    int max_alpha = 128, max_centers = 256, max_x = 128;
};

struct PairArgs {
    std::string a, b, x = "0,0", out;
    double eps = 0.1;
};

struct SatArgs {
    std::string input, out;
    double region = 5.0, cluster_radius = 1.5, pitch = 0.25;
    int m = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int run(int argc, char** argv) {
    CLI::App app{"uniformly discrete packings: densities, Marcinkiewicz and probe metrics, "
                 "annular splices, saturation"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker cap (evaluation is currently single-threaded)")
        ->check(CLI::PositiveNumber);

    GenArgs g;
    auto* gen = app.add_subcommand("gen", "generate a packing window");
    add_config_option(gen);
    auto* lat_opt = gen->add_option("--lattice", g.lattice, "named lattice: Z1..Z8, hex, fcc, d4");
    auto* basis_opt = gen->add_option("--basis", g.basis, "row basis 'a,b;c,d' (rescaled to min distance 1)");
    auto* ropt = gen->add_flag("--rsa", g.rsa, "random sequential adsorption");
    lat_opt->excludes(basis_opt);
    lat_opt->excludes(ropt);
    basis_opt->excludes(ropt);
    gen->add_option("--dim", g.dim, "ambient dimension (rsa only)")->check(CLI::Range(1, 16));
    gen->add_option("--window", g.window, "window ball radius")->required();
    gen->add_option("--scale", g.scale, "post-normalization scale factor >= 1");
    gen->add_option("--max-failures", g.max_failures, "rsa stop: consecutive rejections");
    gen->add_option("--seed", g.seed, "generator seed")->each([&g](const std::string&) {
        g.seed_given = true;
    });
    gen->add_option("--out", g.out, "output path (default stdout)");
    gen->callback([&]() {
        require_seed_if(g.rsa, g.seed_given, "gen --rsa");
        UDSet set;
        if (g.rsa) {
            set = gen_rsa(g.dim, g.window, g.seed, g.max_failures);
        } else if (!g.lattice.empty()) {
            set = gen_named_lattice(g.lattice, g.window, g.scale);
        } else if (!g.basis.empty()) {
            int dim = 0;
            const auto basis = parse_basis(g.basis, dim);
            set = gen_lattice(basis, dim, g.window, g.scale);
        } else {
            throw CLI::RequiredError("one of --lattice, --basis, --rsa");
        }
        OutStream os(g.out);
        write_packing(os.get(), set);
    });

    ProfileArgs d;
    auto* density = app.add_subcommand("density", "density profile and asymptotic estimate");
    add_config_option(density);
    density->add_option("input", d.input, "packing file")->required();
    density->add_option("--grid", d.grid, "t grid start:stop:step");
    density->add_option("--method", d.method, "counting | volumetric | montecarlo");
    density->add_option("--p", d.p, "seminorm exponent >= 1");
    density->add_option("--samples", d.samples, "montecarlo samples per grid point");
    density->add_option("--seed", d.seed, "montecarlo seed")->each([&d](const std::string&) {
        d.seed_given = true;
    });
    density->add_option("--tail-fraction", d.tail_fraction, "tail window for the estimate");
    density->add_option("--conv-tol", d.conv_tol, "convergence band tolerance");
    density->add_option("--out", d.out, "output CSV path (default stdout)");
    density->callback([&]() {
        const auto method = parse_profile_method(d.method);
        require_seed_if(method == ProfileMethod::montecarlo, d.seed_given, "montecarlo");
        const auto set = read_packing_file(d.input);
        DensityOptions opts{method, d.p, d.samples, d.seed};
        const auto prof = density_profile(set, parse_grid(d.grid), opts);
        const auto est = asymptotic_density(prof, d.tail_fraction, d.conv_tol);
        OutStream os(d.out);
        write_profile_csv(os.get(), prof);
        print_estimate(os.get(), est);
    });

    ProfileArgs rg;
    auto* regularity = app.add_subcommand("regularity", "outer-annulus regularity defect profile");
    add_config_option(regularity);
    regularity->add_option("input", rg.input, "packing file")->required();
    regularity->add_option("--l", rg.l, "annulus thickness")->required();
    regularity->add_option("--grid", rg.grid, "t grid start:stop:step");
    regularity->add_option("--out", rg.out, "output CSV path (default stdout)");
    regularity->callback([&]() {
        const auto set = read_packing_file(rg.input);
        const auto prof = regularity_defect(set, rg.l, parse_grid(rg.grid));
        OutStream os(rg.out);
        write_profile_csv(os.get(), prof);
    });

    MdistArgs md;
    auto* mdist_cmd = app.add_subcommand("mdist", "Marcinkiewicz p-distance of two packings");
    add_config_option(mdist_cmd);
    mdist_cmd->add_option("a", md.a, "first packing")->required();
    mdist_cmd->add_option("b", md.b, "second packing")->required();
    mdist_cmd->add_option("--p", md.p, "exponent >= 1");
    mdist_cmd->add_option("--grid", md.grid, "t grid start:stop:step");
    mdist_cmd->add_option("--method", md.method, "exact-pairing | planar-exact | montecarlo");
    mdist_cmd->add_option("--samples", md.samples, "montecarlo samples per grid point");
    mdist_cmd->add_option("--seed", md.seed, "montecarlo seed")->each([&md](const std::string&) {
        md.seed_given = true;
    });
    mdist_cmd->add_option("--tail-fraction", md.tail_fraction, "tail window for the estimate");
    mdist_cmd->add_option("--conv-tol", md.conv_tol, "convergence band tolerance");
    mdist_cmd->add_option("--out", md.out, "output CSV path (default stdout)");
    mdist_cmd->callback([&]() {
        MarcinOptions opts;
        opts.method = parse_symdiff_method(md.method);
        require_seed_if(opts.method == SymdiffMethod::montecarlo, md.seed_given, "montecarlo");
        opts.samples = md.samples;
        opts.seed = md.seed;
        opts.tail_fraction = md.tail_fraction;
        opts.conv_tol = md.conv_tol;
        const auto a = read_packing_file(md.a);
        const auto b = read_packing_file(md.b);
        const auto res = mdist(a, b, md.p, parse_grid(md.grid), opts);
        OutStream os(md.out);
        write_profile_csv(os.get(), res.profile);
        print_estimate(os.get(), res.estimate);
    });

    SpliceArgs sp;
    auto* splice_cmd =
        app.add_subcommand("splice", "annular splice of a Cauchy sequence of packings");
    add_config_option(splice_cmd);
    splice_cmd->add_option("--manifest", sp.manifest, "file listing packing paths in order")
        ->required();
    splice_cmd->add_option("--depth", sp.depth, "number of certified schedule entries");
    splice_cmd->add_option("--growth", sp.growth, "radius growth factor > 1");
    splice_cmd->add_option("--p", sp.p, "exponent >= 1");
    splice_cmd->add_option("--grid", sp.grid, "t grid start:stop:step");
    splice_cmd->add_option("--method", sp.method, "distance method for certificates");
    splice_cmd->add_option("--samples", sp.samples, "montecarlo samples per grid point");
    splice_cmd->add_option("--seed", sp.seed, "montecarlo seed")->each([&sp](const std::string&) {
        sp.seed_given = true;
    });
    splice_cmd->add_flag("--verify", sp.verify, "print a verification report to stdout");
    splice_cmd->add_option("--verify-method", sp.verify_method,
                           "distance method for the report (the splice drops points of its "
                           "sources, so exact-pairing rarely applies here)");
    splice_cmd->add_option("--schedule-out", sp.schedule_out, "write the schedule here");
    splice_cmd->add_option("--out", sp.out, "output packing path (default stdout)");
    splice_cmd->callback([&]() {
        ScheduleOptions opts;
        opts.growth = sp.growth;
        opts.marcin.method = parse_symdiff_method(sp.method);
        require_seed_if(opts.marcin.method == SymdiffMethod::montecarlo, sp.seed_given,
                        "montecarlo");
        opts.marcin.samples = sp.samples;
        opts.marcin.seed = sp.seed;
        opts.p = sp.p;

        std::ifstream mf(sp.manifest);
        if (!mf) throw FileFormatError("cannot open manifest: " + sp.manifest);
        std::vector<UDSet> seq;
        for (const auto& path : read_manifest(mf)) seq.push_back(read_packing_file(path));

        const auto grid = parse_grid(sp.grid);
        const auto sched = select_schedule(seq, sp.p, grid, sp.depth, opts);
        const auto splice = build_splice(seq, sched);
        if (!sp.schedule_out.empty()) {
            std::ofstream ss(sp.schedule_out, std::ios::binary);
            if (!ss) throw FileFormatError("cannot open for writing: " + sp.schedule_out);
            write_schedule(ss, sched);
        }
        {
            OutStream os(sp.out);
            write_packing(os.get(), splice);
        }
        if (sp.verify) {
            MarcinOptions vopts = opts.marcin;
            vopts.method = parse_symdiff_method(sp.verify_method);
            require_seed_if(vopts.method == SymdiffMethod::montecarlo, sp.seed_given,
                            "montecarlo");
            const auto report = verify_splice(splice, seq, sched, sp.p, grid, vopts);
            std::cout << "# splice verification (grid up to " << format_double(report.grid_max)
                      << ")\n";
            for (std::size_t i = 0; i < report.mdist_to_sources.size(); ++i) {
                std::cout << "mdist_to_source " << i << " "
                          << format_double(report.mdist_to_sources[i]) << "\n";
            }
            std::cout << "nonincreasing " << (report.nonincreasing_ok ? 1 : 0) << "\n";
            std::cout << "density_splice " << format_double(report.density_splice) << "\n";
            std::cout << "density_last_source " << format_double(report.density_last_source)
                      << "\n";
            std::cout << "density_gap " << format_double(report.density_gap) << "\n";
        }
    });

    MetricArgs mt;
    auto* metric = app.add_subcommand("metric", "probe-metric lower bounds and Hausdorff distance");
    add_config_option(metric);
    metric->add_option("a", mt.a, "first packing")->required();
    metric->add_option("b", mt.b, "second packing")->required();
    metric->add_option("--kind", mt.kind, "d | pp | hausdorff");
    metric->add_option("--window", mt.window, "restriction radius (hausdorff)");
    metric->add_option("--max-alpha", mt.max_alpha, "budget: base-point candidates");
    metric->add_option("--max-centers", mt.max_centers, "budget: probe centers");
    metric->add_option("--max-x", mt.max_x, "budget: translation candidates (pp)");
    metric->add_option("--out", mt.out, "output path (default stdout)");
    metric->callback([&]() {
        const auto a = read_packing_file(mt.a);
        const auto b = read_packing_file(mt.b);
        OutStream os(mt.out);
        if (mt.kind == "hausdorff") {
            os.get() << "hausdorff " << format_double(hausdorff_window(a, b, mt.window)) << "\n";
            return;
        }
        ProbeBudget budget;
        budget.max_alpha = mt.max_alpha;
        budget.max_centers = mt.max_centers;
        budget.max_x = mt.max_x;
        const auto f = default_probe_function();
        if (mt.kind == "d") {
            os.get() << "d_lower " << format_double(metric_d_lower(a, b, f, budget)) << "\n";
        } else if (mt.kind == "pp") {
            os.get() << "D_lower " << format_double(metric_D_lower(a, b, f, budget)) << "\n";
        } else {
            throw DomainError("unknown metric kind '" + mt.kind + "'");
        }
    });

    PairArgs pr;
    auto* pair_cmd = app.add_subcommand("pair", "pointwise pairing with displacement bounds");
    add_config_option(pair_cmd);
    pair_cmd->add_option("a", pr.a, "first packing")->required();
    pair_cmd->add_option("b", pr.b, "second packing")->required();
    pair_cmd->add_option("--x", pr.x, "anchor point, comma-separated coordinates");
    pair_cmd->add_option("--eps", pr.eps, "pairing epsilon in (0, 1)");
    pair_cmd->add_option("--out", pr.out, "output CSV path (default stdout)");
    pair_cmd->callback([&]() {
        const auto a = read_packing_file(pr.a);
        const auto b = read_packing_file(pr.b);
        const auto report = pairing(a, b, parse_point(pr.x), pr.eps);
        OutStream os(pr.out);
        write_pairing_csv(os.get(), report);
        os.get() << "# eligible_radius=" << format_double(report.eligible_radius)
                 << " matched=" << report.matches.size()
                 << " unmatched=" << report.unmatched.size()
                 << " max_displacement=" << format_double(report.max_displacement) << "\n";
    });

    SatArgs st;
    auto* saturate = app.add_subcommand("saturate", "greedy saturation inside a region");
    add_config_option(saturate);
    saturate->add_option("input", st.input, "packing file")->required();
    saturate->add_option("--region", st.region, "saturation region radius (<= window - 1)")
        ->required();
    saturate->add_option("--seed", st.seed,
                         "accepted for interface stability (tie-breaks are lexicographic)")
        ->each([&st](const std::string&) { st.seed_given = true; });
    saturate->add_option("--out", st.out, "output packing path (default stdout)");
    saturate->callback([&]() {
        const auto set = read_packing_file(st.input);
        const auto sat = saturate_greedy(set, st.region, st.seed);
        OutStream os(st.out);
        write_packing(os.get(), sat);
        std::cerr << "inserted " << (sat.size() - set.size()) << " point(s)\n";
    });

    SatArgs ms;
    auto* msat = app.add_subcommand("msat", "m-saturation verdict (m in {1, 2, 3})");
    add_config_option(msat);
    msat->add_option("input", ms.input, "packing file")->required();
    msat->add_option("--m", ms.m, "saturation order")->check(CLI::Range(1, 3));
    msat->add_option("--region", ms.region, "check region radius (<= window - 1)")->required();
    msat->add_option("--cluster-radius", ms.cluster_radius, "removal cluster radius (m >= 2)");
    msat->add_option("--pitch", ms.pitch, "seed grid pitch");
    msat->add_option("--out", ms.out, "output path (default stdout)");
    msat->callback([&]() {
        const auto set = read_packing_file(ms.input);
        MSatOptions opts;
        opts.hole.initial_pitch = ms.pitch;
        const auto verdict = m_saturation_check(set, ms.m, ms.region, ms.cluster_radius, opts);
        OutStream os(ms.out);
        os.get() << format_verdict(verdict) << "\n";
    });

    try {
        auto args = expand_config_args(argc, argv);
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const udpack::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
