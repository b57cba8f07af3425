#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "graphbell/bounds.hpp"
#include "graphbell/builders.hpp"
#include "graphbell/certificates.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/expression.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/observables.hpp"
#include "graphbell/parallel.hpp"
#include "graphbell/robustness.hpp"
#include "graphbell/selftesting.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using graphbell::BellExpression;
using graphbell::Graph;
using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kPropertyFailure = 1,
    kValidation = 2,
    kResourceGuard = 3,
};

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << "0x" << std::hex << h;
    return out.str();
}

std::string read_source(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw graphbell::ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit_error(int code, const std::string& type, const std::string& message) {
    json err;
    err["error"] = {{"code", code}, {"type", type}, {"message", message}};
    std::cout << err.dump() << "\n";
}

json versions() {
    json v;
    v["graphbell"] = kVersion;
    v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    return v;
}

/// Shared inequality source: one builtin family, a graph JSON file, or the
/// tilted parameters.
struct SourceOptions {
    int star = 0;
    int ring = 0;
    int line = 0;
    int complete = 0;
    std::string graph_path;
    std::vector<double> tilted;  // n, theta
    std::string subs;
    std::string expr_path;

    void add_graph_flags(CLI::App* cmd, bool with_subs) {
        cmd->add_option("--star", star, "star graph on N vertices");
        cmd->add_option("--ring", ring, "ring graph on N vertices");
        cmd->add_option("--line", line, "path graph on N vertices");
        cmd->add_option("--complete", complete, "complete graph on N vertices");
        cmd->add_option("--graph", graph_path, "graph JSON file ('-' for stdin)");
        if (with_subs) {
            cmd->add_option("--subs", subs,
                            "comma-separated substitution vertices (1-indexed, "
                            "must include the pivot)");
        }
    }
    void add_tilted_flag(CLI::App* cmd) {
        cmd->add_option("--tilted", tilted,
                        "tilted family: N THETA (theta in (0, pi/4])")
            ->expected(2);
    }

    bool has_graph_source() const {
        return star || ring || line || complete || !graph_path.empty();
    }

    Graph make_graph() const {
        int picked = 0;
        for (int v : {star, ring, line, complete}) picked += (v != 0);
        picked += !graph_path.empty();
        if (picked != 1) {
            throw graphbell::ValidationError(
                "choose exactly one graph source (--star/--ring/--line/--complete/--graph)");
        }
        if (!graph_path.empty()) return graphbell::graph_from_json(read_source(graph_path));
        if (star) return graphbell::builtin_graph(graphbell::BuiltinKind::Star, star);
        if (ring) return graphbell::builtin_graph(graphbell::BuiltinKind::Ring, ring);
        if (line) return graphbell::builtin_graph(graphbell::BuiltinKind::Line, line);
        return graphbell::builtin_graph(graphbell::BuiltinKind::Complete, complete);
    }

    std::vector<int> parse_subs() const {
        std::vector<int> out;
        std::stringstream ss(subs);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stoi(item) - 1);
            } catch (const std::exception&) {
                throw graphbell::ValidationError("--subs entry '" + item +
                                                 "' is not a vertex index");
            }
        }
        if (out.empty()) throw graphbell::ValidationError("--subs parsed to an empty set");
        return out;
    }

    BellExpression make_expression() const {
        if (!expr_path.empty()) {
            return graphbell::expression_from_json(read_source(expr_path));
        }
        if (!tilted.empty()) {
            if (has_graph_source() || !subs.empty()) {
                throw graphbell::ValidationError("--tilted excludes graph sources");
            }
            const int n = static_cast<int>(tilted[0]);
            if (n != tilted[0]) {
                throw graphbell::ValidationError("--tilted N must be an integer");
            }
            return graphbell::build_tilted_ghz(n, tilted[1]);
        }
        const Graph g = make_graph();
        if (!subs.empty()) return graphbell::build_multi_substitution(g, parse_subs());
        return graphbell::build_graph_inequality(g);
    }
};

json input_block(const BellExpression& e) {
    const std::string canonical = graphbell::expression_to_json(e);
    json in;
    in["expression"] = json::parse(canonical);
    in["hash"] = fnv1a_hex(canonical);
    return in;
}

void deliver(const json& report, const std::string& out_path, bool to_stdout) {
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw graphbell::ValidationError("cannot write '" + out_path + "'");
        out << report.dump(2) << "\n";
    }
    if (to_stdout) std::cout << report.dump(2) << "\n";
}

json run_report(const std::string& command, const BellExpression& e, json results,
                std::uint64_t seed, double wall_seconds) {
    json r;
    r["command"] = command;
    r["inputs"] = input_block(e);
    r["results"] = std::move(results);
    r["seed"] = seed;
    r["versions"] = versions();
    r["wall_time_s"] = wall_seconds;
    return r;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_ = Clock::now();
};

int run_build(const SourceOptions& src, bool pretty) {
    const BellExpression e = src.make_expression();
    std::cout << graphbell::expression_to_json(e, pretty ? 2 : -1) << "\n";
    return kOk;
}

int run_bounds(const SourceOptions& src, graphbell::BoundCheckOptions opts, bool as_json,
               const std::string& out_path) {
    const Stopwatch timer;
    const BellExpression e = src.make_expression();
    const graphbell::BoundReport report = compute_bound_report(e, opts);

    if (as_json || !out_path.empty()) {
        json results = json::parse(bound_report_to_json(report));
        deliver(run_report("bounds", e, std::move(results), opts.eig.seed, timer.seconds()),
                out_path, as_json);
    }
    if (!as_json) {
        std::cout << "bounds (" << e.meta.kind << ", N=" << e.n_parties << ")\n"
                  << bound_report_table(report);
    }
    if (!report.consistent) {
        std::cerr << "cross-check mismatch: max delta " << report.max_delta << "\n";
        return kPropertyFailure;
    }
    return kOk;
}

int run_certify(const SourceOptions& src, int draws, std::uint64_t seed, double tol,
                int workers, bool as_json, const std::string& out_path) {
    const Stopwatch timer;
    const BellExpression e = src.make_expression();
    graphbell::CertificateReport report;
    if (e.meta.kind == "tilted") {
        report = graphbell::certify_tilted(e.n_parties, *e.meta.theta, draws, seed, tol, workers);
    } else if (e.meta.kind == "graph") {
        report = certify_graph(*e.meta.graph, draws, seed, tol, workers);
    } else {
        throw graphbell::ValidationError(
            "certificates cover the single-substitution graph family and the tilted "
            "family");
    }

    if (as_json || !out_path.empty()) {
        json results = json::parse(certificate_report_to_json(report));
        deliver(run_report("certify", e, std::move(results), seed, timer.seconds()),
                out_path, as_json);
    } else {
        std::cout << "certify " << report.family << ": max residual " << report.max_residual
                  << " over " << report.draws << " draws (tol " << report.tol << ") -> "
                  << (report.pass ? "pass" : "FAIL") << "\n";
    }
    return report.pass ? kOk : kPropertyFailure;
}

int run_selftest(const SourceOptions& src, double perturb, int perturb_party, double tol,
                 bool diag, bool as_json, const std::string& out_path) {
    const Stopwatch timer;
    const BellExpression e = src.make_expression();
    graphbell::ObservableSet obs = canonical_observables(e);
    if (perturb != 0.0) {
        if (perturb_party < 1 || perturb_party > e.n_parties) {
            throw graphbell::ValidationError("--perturb-party out of range");
        }
        obs = rotate_party(obs, perturb_party - 1, perturb);
    }
    const graphbell::StateVector psi = target_state(e);
    const graphbell::SelfTestReport report = selftest_report(e, psi, obs, tol, diag);

    if (as_json || !out_path.empty()) {
        json results = json::parse(selftest_report_to_json(report));
        if (perturb != 0.0) {
            results["perturbation"] = {{"epsilon", perturb}, {"party", perturb_party}};
        }
        deliver(run_report("selftest", e, std::move(results), 0, timer.seconds()), out_path,
                as_json);
    } else {
        std::cout << "selftest (" << e.meta.kind << ", N=" << e.n_parties << ")\n"
                  << "  fidelity          " << std::setprecision(15) << report.fidelity
                  << "\n";
        for (std::size_t p = 0; p < report.anticommutator_norms.size(); ++p) {
            std::cout << "  ||{X,Z} psi|| [" << (p + 1) << "]  "
                      << report.anticommutator_norms[p] << "\n";
        }
        std::cout << "  pass              " << (report.pass ? "yes" : "no") << "\n";
    }
    return report.pass ? kOk : kPropertyFailure;
}

int run_robust(const SourceOptions& src, graphbell::MuSearchConfig cfg, int points,
               int draws, std::uint64_t seed, const std::string& csv_path, bool as_json,
               const std::string& report_path) {
    const Stopwatch timer;
    const Graph g = src.make_graph();
    const BellExpression e = graphbell::build_graph_inequality(g);

    const graphbell::RobustnessBound bound = optimal_slope(g, cfg);
    const double margin = validity_margin(g, bound, draws, seed, cfg.workers);
    const auto curve = fidelity_curve(bound, points);

    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw graphbell::ValidationError("cannot write '" + csv_path + "'");
        graphbell::write_curve_csv(out, curve);
    } else if (!as_json) {
        graphbell::write_curve_csv(std::cout, curve);
    }

    json results = json::parse(robustness_bound_to_json(bound));
    results["validity"] = {{"draws", draws}, {"seed", seed}, {"min_margin", margin}};
    const bool sound = margin >= -1e-8 &&
                       std::abs(bound.tightness - 1.0) <= bound.tight_tol;
    results["pass"] = sound;
    if (as_json || !report_path.empty()) {
        deliver(run_report("robust", e, std::move(results), seed, timer.seconds()),
                report_path, as_json);
    } else {
        std::cerr << "robust: slope " << bound.slope << ", mu " << bound.mu
                  << ", tightness " << bound.tightness << ", validity margin " << margin
                  << " -> " << (sound ? "pass" : "FAIL") << "\n";
    }
    return sound ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scalable Bell inequalities for qubit graph states: construction, "
                 "bounds, optimality certificates, self-tests and robustness curves"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int workers = 0;
    app.add_option("--workers", workers,
                   "worker threads for parallel sweeps (default: GRAPHBELL_WORKERS "
                   "or all cores)");

    // build
    SourceOptions build_src;
    bool pretty = false;
    auto* build = app.add_subcommand("build", "construct a Bell expression as JSON");
    build_src.add_graph_flags(build, true);
    build_src.add_tilted_flag(build);
    build->add_flag("--pretty", pretty, "indent the output");

    // bounds
    SourceOptions bounds_src;
    graphbell::BoundCheckOptions bound_opts;
    bool bounds_json = false;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds", "classical and quantum bounds with "
                                                "cross-checks");
    bounds_src.add_graph_flags(bounds, true);
    bounds_src.add_tilted_flag(bounds);
    bounds->add_option("--expr", bounds_src.expr_path, "expression JSON file ('-' stdin)");
    bounds->add_flag("--bruteforce", bound_opts.with_bruteforce,
                     "run the exhaustive deterministic-strategy oracle");
    bounds->add_flag("--eig", bound_opts.with_eigenvalue,
                     "run the extremal-eigenvalue solver (plus a dense cross-check "
                     "when N <= 8)");
    bounds->add_option("--seed", bound_opts.eig.seed, "seed for the random restart");
    bounds->add_option("--classical-tol", bound_opts.classical_tol,
                       "tolerance for the classical cross-check");
    bounds->add_option("--quantum-tol", bound_opts.quantum_tol,
                       "tolerance for the quantum cross-checks");
    bounds->add_flag("--json", bounds_json, "emit a JSON run report instead of the table");
    bounds->add_option("--out", bounds_out, "also write the JSON run report to a file");

    // certify
    SourceOptions certify_src;
    int draws = 100;
    std::uint64_t cert_seed = 1;
    double cert_tol = 1e-9;
    bool cert_json = false;
    std::string cert_out;
    auto* certify = app.add_subcommand("certify", "verify the sum-of-squares optimality "
                                                  "certificate over random observables");
    certify_src.add_graph_flags(certify, false);
    certify_src.add_tilted_flag(certify);
    certify->add_option("--draws", draws, "number of random observable draws");
    certify->add_option("--seed", cert_seed, "draw seed");
    certify->add_option("--tol", cert_tol, "residual tolerance");
    certify->add_flag("--json", cert_json, "emit a JSON run report");
    certify->add_option("--out", cert_out, "write the JSON run report to a file");

    // selftest
    SourceOptions selftest_src;
    double perturb = 0.0;
    int perturb_party = 1;
    double selftest_tol = 1e-10;
    bool diag = false;
    bool st_json = false;
    std::string st_out;
    auto* selftest = app.add_subcommand("selftest", "run the extraction-circuit self-test");
    selftest_src.add_graph_flags(selftest, false);
    selftest_src.add_tilted_flag(selftest);
    selftest->add_option("--perturb", perturb,
                         "rotate one party's observables by this angle before testing");
    selftest->add_option("--perturb-party", perturb_party, "1-indexed party to perturb");
    selftest->add_option("--tol", selftest_tol, "pass tolerance");
    selftest->add_flag("--diag", diag, "include the ancilla spectrum in the report");
    selftest->add_flag("--json", st_json, "emit a JSON run report");
    selftest->add_option("--out", st_out, "write the JSON run report to a file");

    // robust
    SourceOptions robust_src;
    graphbell::MuSearchConfig mu_cfg;
    int points = 101;
    int validity_draws = 500;
    std::uint64_t robust_seed = 1;
    std::string csv_out;
    bool robust_json = false;
    std::string robust_report;
    auto* robust = app.add_subcommand("robust", "fidelity-vs-violation bound: slope "
                                                "search plus curve emission");
    robust_src.add_graph_flags(robust, false);
    robust->add_option("--grid", mu_cfg.grid_points, "grid points per angle axis");
    robust->add_option("--simplex-iters", mu_cfg.simplex_max_iters,
                       "refinement iterations per start");
    robust->add_option("--restarts", mu_cfg.refine_starts, "refinement starts");
    robust->add_flag("--symmetric", mu_cfg.symmetric_grid,
                     "share one angle across parties 2..N during the grid stage");
    robust->add_option("--points", points, "rows in the emitted curve");
    robust->add_option("--draws", validity_draws, "fresh draws for the validity check");
    robust->add_option("--seed", robust_seed, "validity draw seed");
    robust->add_option("--out", csv_out, "write the curve CSV to a file");
    robust->add_flag("--json", robust_json, "emit a JSON run report");
    robust->add_option("--report", robust_report, "write the JSON run report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error(kValidation, "usage", e.what());
        return kValidation;
    }

    bound_opts.workers = workers;
    mu_cfg.workers = workers;

    try {
        if (build->parsed()) return run_build(build_src, pretty);
        if (bounds->parsed()) return run_bounds(bounds_src, bound_opts, bounds_json, bounds_out);
        if (certify->parsed()) {
            return run_certify(certify_src, draws, cert_seed, cert_tol, workers, cert_json,
                               cert_out);
        }
        if (selftest->parsed()) {
            return run_selftest(selftest_src, perturb, perturb_party, selftest_tol, diag,
                                st_json, st_out);
        }
        if (robust->parsed()) {
            return run_robust(robust_src, mu_cfg, points, validity_draws, robust_seed,
                              csv_out, robust_json, robust_report);
        }
    } catch (const graphbell::ValidationError& e) {
        emit_error(kValidation, "validation", e.what());
        return kValidation;
    } catch (const graphbell::ResourceLimitError& e) {
        emit_error(kResourceGuard, "resource_guard", e.what());
        return kResourceGuard;
    } catch (const graphbell::ConvergenceError& e) {
        emit_error(kPropertyFailure, "convergence", e.what());
        return kPropertyFailure;
    }
    return kOk;
}
