#include "graphbell/selftesting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "graphbell/errors.hpp"

namespace graphbell {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

Eigen::Matrix2cd regularize(const Eigen::Matrix2cd& m) {
    const Eigen::Matrix2cd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(sym);
    Eigen::Vector2d signs;
    for (int i = 0; i < 2; ++i) {
        signs(i) = solver.eigenvalues()(i) >= 0.0 ? 1.0 : -1.0;
    }
    return solver.eigenvectors() * signs.asDiagonal() *
           solver.eigenvectors().adjoint();
}

ExtractedOps extracted_operators(const ObservableSet& obs, const std::string& kind,
                                 std::optional<double> theta) {
    ExtractedOps ops;
    ops.kind = kind;
    double sum_den = kSqrt2;
    double diff_den = kSqrt2;
    if (kind == "graph") {
        ops.mu = std::numbers::pi / 4;
    } else if (kind == "tilted") {
        if (!theta) throw ValidationError("tilted extraction requires theta");
        if (*theta <= 0.0 || *theta > std::numbers::pi / 4 + 1e-12) {
            throw ValidationError("tilted extraction: theta must lie in (0, pi/4]");
        }
        ops.mu = std::asin(std::sin(2 * *theta) / kSqrt2);
        sum_den = 2 * std::sin(ops.mu);
        diff_den = 2 * std::cos(ops.mu);
        if (sum_den < 1e-12 || diff_den < 1e-12) {
            throw ValidationError("tilted extraction: degenerate mu");
        }
    } else {
        throw ValidationError("extraction kind must be 'graph' or 'tilted', got '" +
                              kind + "'");
    }

    for (int p = 0; p < obs.num_parties(); ++p) {
        if (p == 0) {
            ops.x_ops.push_back(regularize(obs.setting_matrix(0, Setting::Sum) / sum_den));
            ops.z_ops.push_back(regularize(obs.setting_matrix(0, Setting::Diff) / diff_den));
        } else {
            ops.x_ops.push_back(obs.get(p, 0));
            ops.z_ops.push_back(obs.get(p, 1));
        }
    }
    return ops;
}

StateVector swap_isometry_output(const StateVector& v, const ExtractedOps& ops,
                                 int max_qubits) {
    const int n = v.num_qubits;
    if (n > max_qubits) {
        throw ResourceLimitError("swap isometry output has 4^" + std::to_string(n) +
                                 " amplitudes; guard is N <= " + std::to_string(max_qubits));
    }
    if (ops.num_parties() != n) {
        throw ValidationError("extraction operator count mismatch");
    }
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();

    StateVector out;
    out.num_qubits = 2 * n;
    out.amps.assign(std::size_t{1} << (2 * n), 0.0);
    const std::size_t source_dim = std::size_t{1} << n;

    for (std::size_t tau = 0; tau < source_dim; ++tau) {
        StateVector branch = v;
        for (int j = 0; j < n; ++j) {
            const int bit = (tau >> (n - 1 - j)) & 1;
            const double z_sign = bit ? -1.0 : 1.0;
            const Eigen::Matrix2cd half_proj =
                0.5 * (id + z_sign * ops.z_ops[static_cast<std::size_t>(j)]);
            apply_one_qubit(half_proj, j, branch);
            if (bit) apply_one_qubit(ops.x_ops[static_cast<std::size_t>(j)], j, branch);
        }
        std::copy(branch.amps.begin(), branch.amps.end(),
                  out.amps.begin() + static_cast<std::ptrdiff_t>(tau * source_dim));
    }
    out.normalize();
    return out;
}

double extraction_fidelity(const StateVector& out, const StateVector& target) {
    const int n = target.num_qubits;
    if (out.num_qubits != 2 * n) {
        throw ValidationError("extraction_fidelity: output register must hold 2N qubits");
    }
    const std::size_t dim = std::size_t{1} << n;
    double fidelity = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        cplx overlap = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
            overlap += std::conj(target.amps[a]) * out.amps[a * dim + s];
        }
        fidelity += std::norm(overlap);
    }
    return fidelity;
}

std::vector<double> schmidt_singular_values(const StateVector& out) {
    if (out.num_qubits % 2 != 0) {
        throw ValidationError("schmidt cut expects an even register");
    }
    const int n = out.num_qubits / 2;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index s = 0; s < dim; ++s) {
            m(a, s) = out.amps[static_cast<std::size_t>(a * dim + s)];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    std::vector<double> values(svd.singularValues().data(),
                               svd.singularValues().data() + dim);
    return values;
}

double anticommutator_norm(const StateVector& v, const Eigen::Matrix2cd& x,
                           const Eigen::Matrix2cd& z, int site) {
    StateVector xz = v;
    apply_one_qubit(z, site, xz);
    apply_one_qubit(x, site, xz);
    StateVector zx = v;
    apply_one_qubit(x, site, zx);
    apply_one_qubit(z, site, zx);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < xz.dim(); ++i) {
        norm_sq += std::norm(xz.amps[i] + zx.amps[i]);
    }
    return std::sqrt(norm_sq);
}

SelfTestReport selftest_report(const BellExpression& e, const StateVector& v,
                               const ObservableSet& obs, double tol,
                               bool with_spectrum) {
    StateVector target;
    ExtractedOps ops;
    if (e.meta.kind == "graph") {
        if (!e.meta.graph) throw ValidationError("graph expression carries no graph");
        if (!e.meta.graph->connected()) {
            throw ValidationError(
                "self-test refuses disconnected graphs: the anticommutation chain "
                "walks the graph");
        }
        target = graph_state(*e.meta.graph);
        ops = extracted_operators(obs, "graph");
    } else if (e.meta.kind == "tilted") {
        if (!e.meta.theta) throw ValidationError("tilted expression carries no theta");
        target = ghz_state(e.n_parties, *e.meta.theta);
        ops = extracted_operators(obs, "tilted", e.meta.theta);
    } else {
        throw ValidationError("self-test supports the single-substitution graph family "
                              "and the tilted family, not '" + e.meta.kind + "'");
    }

    SelfTestReport report;
    report.tol = tol;
    report.permutation = e.meta.permutation;
    for (int p = 0; p < e.n_parties; ++p) {
        report.anticommutator_norms.push_back(
            anticommutator_norm(v, ops.x_ops[static_cast<std::size_t>(p)],
                                ops.z_ops[static_cast<std::size_t>(p)], p));
    }
    const StateVector out = swap_isometry_output(v, ops);
    report.fidelity = extraction_fidelity(out, target);
    if (with_spectrum) {
        for (double s : schmidt_singular_values(out)) {
            report.ancilla_spectrum.push_back(s * s);
        }
    }
    report.pass = report.fidelity > 1.0 - tol &&
                  std::all_of(report.anticommutator_norms.begin(),
                              report.anticommutator_norms.end(),
                              [tol](double x) { return x < tol; });
    return report;
}

std::string selftest_report_to_json(const SelfTestReport& r, int indent) {
    nlohmann::json j;
    j["fidelity"] = r.fidelity;
    j["anticommutator_norms"] = r.anticommutator_norms;
    j["pass"] = r.pass;
    j["tol"] = r.tol;
    if (!r.permutation.empty()) {
        auto perm = nlohmann::json::array();
        for (int v : r.permutation) perm.push_back(v + 1);
        j["permutation"] = std::move(perm);
    }
    if (!r.ancilla_spectrum.empty()) j["ancilla_spectrum"] = r.ancilla_spectrum;
    return j.dump(indent);
}

}  // namespace graphbell
