#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphbell/bounds.hpp"
#include "graphbell/expression.hpp"
#include "graphbell/observables.hpp"
#include "graphbell/pauli.hpp"

namespace graphbell {

/// Hermitian-unitary part of a Hermitian 2x2 matrix: eigenvalue signs with
/// the fixed convention sign(0) = +1, so the zero matrix maps to identity.
/// Scale-invariant under positive rescaling of the input.
Eigen::Matrix2cd regularize(const Eigen::Matrix2cd& m);

/// Per-party extraction operators built from an observable set.
/// Graph construction: X_1 = reg((A0+A1)/sqrt(2)), Z_1 = reg((A0-A1)/sqrt(2));
/// tilted construction uses denominators 2 sin(mu), 2 cos(mu). Parties >= 2
/// take X_i = A0, Z_i = A1 unmodified.
struct ExtractedOps {
    std::vector<Eigen::Matrix2cd> x_ops;
    std::vector<Eigen::Matrix2cd> z_ops;
    std::string kind;  // "graph" or "tilted"
    double mu = 0.0;

    int num_parties() const { return static_cast<int>(x_ops.size()); }
};

ExtractedOps extracted_operators(const ObservableSet& obs, const std::string& kind,
                                 std::optional<double> theta = std::nullopt);

/// Output of the local SWAP extraction circuit on |+>^N (x) |v>:
/// sum_t |t> (x) prod_j X_j^{t_j} Z_j^{(t_j)} |v>, normalized, with the
/// ancilla register in the first N qubits. Guarded at max_qubits inputs.
StateVector swap_isometry_output(const StateVector& v, const ExtractedOps& ops,
                                 int max_qubits = 10);

/// <target| rho_anc |target> where rho_anc traces out the source register
/// (last N qubits) of the pure 2N-qubit state `out`.
double extraction_fidelity(const StateVector& out, const StateVector& target);

/// Singular values across the (ancilla | source) register cut, descending.
std::vector<double> schmidt_singular_values(const StateVector& out);

/// || (X Z + Z X) |v> || with both 2x2 operators acting on `site`.
double anticommutator_norm(const StateVector& v, const Eigen::Matrix2cd& x,
                           const Eigen::Matrix2cd& z, int site);

struct SelfTestReport {
    double fidelity = 0.0;
    std::vector<double> anticommutator_norms;
    bool pass = false;
    double tol = 1e-10;
    std::vector<int> permutation;          // from the expression meta
    std::vector<double> ancilla_spectrum;  // rho_anc eigenvalues, on request
};

/// Runs the extraction for the expression's family against its target state
/// (graph state, or tilted GHZ). Disconnected graphs are refused; so are
/// multi-substitution expressions, whose extraction is not defined here.
SelfTestReport selftest_report(const BellExpression& e, const StateVector& v,
                               const ObservableSet& obs, double tol = 1e-10,
                               bool with_spectrum = false);

std::string selftest_report_to_json(const SelfTestReport& r, int indent = -1);

}  // namespace graphbell
