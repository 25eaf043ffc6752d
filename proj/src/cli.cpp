#include "c3b/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "c3b/beta_range.hpp"
#include "c3b/central_config.hpp"
#include "c3b/dynamics.hpp"
#include "c3b/kepler.hpp"
#include "c3b/monodromy.hpp"
#include "c3b/reduction.hpp"
#include "c3b/scan.hpp"

namespace c3b::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CheckFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::array<double, 3> parse_triple(const std::string& text, const char* name) {
    std::array<double, 3> out{};
    std::stringstream ss(text);
    std::string piece;
    int count = 0;
    while (std::getline(ss, piece, ',')) {
        if (count == 3) throw UsageError(std::string("--") + name + " takes exactly three comma-separated values");
        std::size_t used = 0;
        try {
            out[count] = std::stod(piece, &used);
        } catch (const std::exception&) {
            throw UsageError(std::string("--") + name + ": cannot parse '" + piece + "'");
        }
        if (used != piece.size()) throw UsageError(std::string("--") + name + ": cannot parse '" + piece + "'");
        ++count;
    }
    if (count != 3) throw UsageError(std::string("--") + name + " takes exactly three comma-separated values");
    return out;
}

// Same number format as the region and curve CSVs.
std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

struct SetupOptions {
    std::string masses;
    std::string charges;
    std::string from_json;

    bool given() const { return !masses.empty() || !charges.empty() || !from_json.empty(); }
};

void add_setup_options(CLI::App* cmd, SetupOptions& opts) {
    cmd->add_option("--masses", opts.masses, "masses m1,m2,m3 (normalized to sum 1)");
    cmd->add_option("--charges", opts.charges, "charges e1,e2,e3");
    cmd->add_option("--from-json", opts.from_json, "configuration JSON written by the config command");
}

struct LoadedSetup {
    BodySetup setup;
    CentralConfiguration config;
};

LoadedSetup load_setup(const SetupOptions& opts) {
    if (!opts.from_json.empty()) {
        if (!opts.masses.empty() || !opts.charges.empty()) {
            throw UsageError("--from-json cannot be combined with --masses/--charges");
        }
        std::ifstream in(opts.from_json);
        if (!in) throw UsageError("cannot read " + opts.from_json);
        json j;
        try {
            in >> j;
            BodySetup setup = j.get<BodySetup>();
            CentralConfiguration config = j.get<CentralConfiguration>();
            return {setup, config};
        } catch (const json::exception& ex) {
            throw UsageError("malformed configuration JSON: " + std::string(ex.what()));
        }
    }
    if (opts.masses.empty() || opts.charges.empty()) throw UsageError("both --masses and --charges are required");
    BodySetup setup = [&] {
        try {
            return BodySetup(parse_triple(opts.masses, "masses"), parse_triple(opts.charges, "charges"));
        } catch (const std::invalid_argument& ex) {
            throw UsageError(ex.what());
        }
    }();
    return {setup, build_configuration(setup)};
}

void check_ecc(double e) {
    if (!(e >= 0.0 && e <= 0.99)) throw UsageError("--ecc must lie in [0, 0.99]");
}

// Writes text to the --out file when given, else to `out`; guarantees a
// single trailing newline.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    std::string body = text;
    while (!body.empty() && body.back() == '\n') body.pop_back();
    body += '\n';
    if (path.empty()) {
        out << body;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + path);
    file << body;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (format == a) return;
    }
    throw UsageError("unsupported --format '" + format + "' for this command");
}

json config_json(const LoadedSetup& s) {
    json j = s.setup;
    json c = s.config;
    j.update(c);
    j["cc_residual"] = cc_residual(s.config, s.setup);
    return j;
}

json monodromy_json(const EssentialMonodromy& mon, const StabilityClass& cls) {
    json multipliers = json::array();
    for (const auto& z : mon.split.multipliers) multipliers.push_back(complex_json(z));
    json j{{"class", to_string(cls.kind)},
           {"beta", mon.beta},
           {"e", mon.e},
           {"rho", json::array({complex_json(mon.split.rho1), complex_json(mon.split.rho2)})},
           {"multipliers", multipliers},
           {"symplectic_defect", mon.symplectic_defect},
           {"nullity", nullity(mon)}};
    if (!cls.detail.empty()) j["detail"] = cls.detail;
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability of elliptic triangle solutions of the charged three-body problem", "c3b"};
    app.require_subcommand(1);

    std::string out_path, format, classify_format = "text", scan_format = "csv", trace_format = "csv";
    unsigned jobs = 0;
    double ecc = 0.0;
    std::optional<double> beta;
    SetupOptions setup_opts;

    auto* config_cmd = app.add_subcommand("config", "central configuration for masses and charges (JSON)");
    add_setup_options(config_cmd, setup_opts);
    config_cmd->add_option("--out", out_path, "output file");

    auto* classify_cmd = app.add_subcommand("classify", "stability class and multipliers at one point");
    add_setup_options(classify_cmd, setup_opts);
    classify_cmd->add_option("--beta", beta, "mass-shape parameter in [0, 9]");
    classify_cmd->add_option("--ecc", ecc, "eccentricity in [0, 0.99]")->required();
    classify_cmd->add_option("--format", classify_format, "text|json|csv");
    classify_cmd->add_option("--out", out_path, "output file");

    std::string beta_range = "0:9:0.02", ecc_range = "0:0.9:0.02", trace_range = "0:0.05:0.01";
    auto* scan_cmd = app.add_subcommand("scan", "region map over a (beta, e) grid");
    scan_cmd->add_option("--beta-range", beta_range, "lo:hi:step")->capture_default_str();
    scan_cmd->add_option("--ecc-range", ecc_range, "lo:hi:step")->capture_default_str();
    scan_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    scan_cmd->add_option("--format", scan_format, "csv|json");
    scan_cmd->add_option("--out", out_path, "output file");

    std::string label;
    auto* trace_cmd = app.add_subcommand("trace", "follow one transition curve");
    trace_cmd->add_option("--label", label, "s|m|k")->required();
    trace_cmd->add_option("--ecc-range", trace_range, "lo:hi:step")->capture_default_str();
    trace_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    trace_cmd->add_option("--format", trace_format, "csv|json");
    trace_cmd->add_option("--out", out_path, "output file");

    auto* verify_cmd = app.add_subcommand("verify", "full-system checks for one setup (JSON)");
    add_setup_options(verify_cmd, setup_opts);
    verify_cmd->add_option("--ecc", ecc, "eccentricity in [0, 0.99]")->required();
    verify_cmd->add_option("--out", out_path, "output file");

    auto* action_cmd = app.add_subcommand("action", "numeric action against the closed form (JSON)");
    add_setup_options(action_cmd, setup_opts);
    action_cmd->add_option("--ecc", ecc, "eccentricity in [0, 0.99]")->required();
    action_cmd->add_option("--out", out_path, "output file");

    double grid_step = 1e-3;
    std::size_t samples = 10000, path_points = 1001;
    std::uint64_t seed = 1;
    std::string path_out;
    auto* beta_cmd = app.add_subcommand("beta-range", "range of beta over masses and triangle shapes");
    beta_cmd->add_option("--grid-step", grid_step, "mass grid step")->default_val(1e-3);
    beta_cmd->add_option("--samples", samples, "angle samples")->default_val(10000);
    beta_cmd->add_option("--seed", seed, "angle sampling seed")->default_val(1);
    beta_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    beta_cmd->add_option("--path-points", path_points, "points on the collinear-to-equilateral path")
        ->default_val(1001);
    beta_cmd->add_option("--path-csv", path_out, "write the beta path samples as CSV");
    beta_cmd->add_option("--out", out_path, "output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }

    try {
        if (config_cmd->parsed()) {
            emit(config_json(load_setup(setup_opts)).dump(2), out_path, out);
        } else if (classify_cmd->parsed()) {
            format = classify_format;
            check_format(format, {"text", "json", "csv"});
            check_ecc(ecc);
            if (beta && setup_opts.given()) throw UsageError("give either --beta or a body setup, not both");
            if (!beta && !setup_opts.given()) throw UsageError("give --beta or a body setup");
            const double b = beta ? *beta : load_setup(setup_opts).config.beta;
            if (!(b >= 0.0 && b <= 9.0)) throw UsageError("--beta must lie in [0, 9]");
            const EssentialMonodromy mon = fundamental_solution(std::clamp(b, 0.0, 9.0), ecc);
            const StabilityClass cls = classify(mon);
            std::ostringstream text;
            if (format == "json") {
                text << monodromy_json(mon, cls).dump(2);
            } else if (format == "csv") {
                text << "beta,e,class\n" << number(b) << ',' << number(ecc) << ',' << to_string(cls.kind);
            } else {
                text << to_string(cls.kind) << '\n';
                if (!cls.detail.empty()) text << "detail: " << cls.detail << '\n';
                text << "beta: " << number(b) << "\ne: " << number(ecc) << '\n';
                for (const auto& z : mon.split.multipliers) text << "multiplier: " << complex_json(z).dump() << '\n';
            }
            emit(text.str(), out_path, out);
        } else if (scan_cmd->parsed()) {
            format = scan_format;
            check_format(format, {"csv", "json"});
            GridAxis betas, eccs;
            try {
                betas = parse_range(beta_range);
                eccs = parse_range(ecc_range);
            } catch (const std::invalid_argument& ex) {
                throw UsageError(ex.what());
            }
            RegionMap map;
            try {
                map = grid_scan(betas, eccs, jobs);
            } catch (const std::invalid_argument& ex) {
                throw UsageError(ex.what());
            }
            std::ostringstream text;
            if (format == "json") {
                json classes = json::array();
                for (auto k : map.classes) classes.push_back(to_string(k));
                text << json{{"betas", map.betas}, {"eccentricities", map.eccentricities}, {"classes", classes}}
                            .dump(2);
            } else {
                write_region_csv(text, map);
            }
            emit(text.str(), out_path, out);
        } else if (trace_cmd->parsed()) {
            format = trace_format;
            check_format(format, {"csv", "json"});
            CurveLabel which;
            std::vector<double> eccs;
            try {
                which = curve_label_from_string(label);
                eccs = parse_range(trace_range).nodes();
            } catch (const std::invalid_argument& ex) {
                throw UsageError(ex.what());
            }
            Curve curve;
            try {
                curve = trace_curve(which, eccs, jobs);
            } catch (const std::invalid_argument& ex) {
                throw UsageError(ex.what());
            }
            std::ostringstream text;
            if (format == "json") {
                json pts = json::array();
                for (const auto& p : curve.points) pts.push_back({{"e", p.e}, {"beta", p.beta}});
                text << json{{"label", to_string(which)}, {"points", pts}}.dump(2);
            } else {
                write_curve_csv(text, curve);
            }
            emit(text.str(), out_path, out);
        } else if (verify_cmd->parsed()) {
            check_ecc(ecc);
            const LoadedSetup s = load_setup(setup_opts);
            const OrbitParams params = orbit_params(s.config.mu, ecc);
            const EssentialMonodromy essential = fundamental_solution(std::clamp(s.config.beta, 0.0, 9.0), ecc);
            const FullMonodromy full = full_monodromy(s.config, s.setup, params);
            const Theorem1Report t1 = theorem1_check(full, essential);
            const HessianResidual hess = hessian_fd_check(s.config, s.setup, params);
            std::vector<double> thetas(64);
            for (int i = 0; i < 64; ++i) thetas[i] = 2.0 * std::numbers::pi * i / 64.0;
            const double diag = diagonalization_check(s.config, s.setup, params, thetas);
            std::vector<double> times(32);
            for (int i = 0; i < 32; ++i) times[i] = params.T * i / 32.0;
            const double orbit = orbit_residual(s.config, s.setup, params, times);

            const bool hess_ok = hess.max() < 1e-6, diag_ok = diag < 1e-10, orbit_ok = orbit < 1e-6;
            const bool passed = t1.passed && hess_ok && diag_ok && orbit_ok;
            json report{{"beta", s.config.beta},
                        {"e", ecc},
                        {"theorem1", t1},
                        {"full_monodromy",
                         {{"symplectic_defect", full.symplectic_defect},
                          {"energy_drift", full.energy_drift},
                          {"closure_error", full.closure_error},
                          {"steps", full.steps}}},
                        {"hessian_fd",
                         {{"zz", hess.zz}, {"zw", hess.zw}, {"ww", hess.ww}, {"tolerance", 1e-6}, {"passed", hess_ok}}},
                        {"diagonalization", {{"residual", diag}, {"tolerance", 1e-10}, {"passed", diag_ok}}},
                        {"orbit_residual", {{"residual", orbit}, {"tolerance", 1e-6}, {"passed", orbit_ok}}},
                        {"passed", passed}};
            emit(report.dump(2), out_path, out);
            if (!passed) {
                err << "verification failed\n";
                return kExitCheckFailed;
            }
        } else if (action_cmd->parsed()) {
            check_ecc(ecc);
            const LoadedSetup s = load_setup(setup_opts);
            const ActionReport report = action_check(s.config, s.setup, orbit_params(s.config.mu, ecc));
            json j = report;
            j["e"] = ecc;
            emit(j.dump(2), out_path, out);
        } else if (beta_cmd->parsed()) {
            if (!(grid_step > 0.0 && grid_step <= 1e-2)) throw UsageError("--grid-step must lie in (0, 1e-2]");
            if (samples == 0) throw UsageError("--samples must be positive");
            if (path_points < 2) throw UsageError("--path-points must be at least 2");
            const BruteMax bm = brute_max(grid_step, samples, seed, jobs);
            const IdentityReport ids = identity_suite(1000);
            const auto path = beta_path(path_points);
            double max_gap = 0.0;
            for (std::size_t i = 1; i < path.size(); ++i) max_gap = std::max(max_gap, std::abs(path[i].beta - path[i - 1].beta));

            const bool max_ok = bm.max_beta <= 9.0 + 1e-9 && bm.max_beta >= 9.0 - 5e-3;
            const bool edge_ok = bm.boundary_max_beta <= 9.0 + 1e-9;
            const bool ids_ok = ids.worst_critical_f < 1e-12 && ids.worst_heron < 1e-12 &&
                                ids.worst_product < 1e-12 && ids.min_S > 0.0 && ids.min_random_beta >= 0.0 &&
                                ids.max_random_beta <= 9.0 + 1e-12;
            const bool passed = max_ok && edge_ok && ids_ok;
            json report{{"max_beta", bm.max_beta},
                        {"argmax_masses", bm.argmax_masses.m},
                        {"argmax_angles", bm.argmax_angles.theta},
                        {"boundary_max_beta", bm.boundary_max_beta},
                        {"boundary_argmax_masses", bm.boundary_argmax_masses.m},
                        {"identities",
                         {{"acute_triangles", ids.acute_triangles},
                          {"critical_f_error", ids.worst_critical_f},
                          {"product_error", ids.worst_product},
                          {"heron_relative_error", ids.worst_heron},
                          {"min_S", ids.min_S},
                          {"random_beta_min", ids.min_random_beta},
                          {"random_beta_max", ids.max_random_beta}}},
                        {"path", {{"beta_start", path.front().beta}, {"beta_end", path.back().beta}, {"max_gap", max_gap}}},
                        {"passed", passed}};
            if (!path_out.empty()) {
                std::ostringstream csv;
                write_beta_csv(csv, path);
                emit(csv.str(), path_out, out);
            }
            emit(report.dump(2), out_path, out);
            if (!passed) {
                err << "beta range checks failed\n";
                return kExitCheckFailed;
            }
        }
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const InadmissibleSetup& ex) {
        err << "inadmissible setup: " << ex.what() << '\n';
        return kExitInadmissible;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "numerical failure: " << ex.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace c3b::cli
