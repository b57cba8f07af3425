#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphbell/expression.hpp"
#include "graphbell/observables.hpp"
#include "graphbell/pauli.hpp"

namespace graphbell {

/// Local deterministic assignment: signs[p] = {value of A0, value of A1},
/// each +/-1.
struct DeterministicStrategy {
    std::vector<std::array<int, 2>> signs;
};

/// Closed-form classical bound for the known families; nullopt asks the
/// caller to fall back to the brute-force oracle.
std::optional<double> classical_bound_formula(const BellExpression& e);
std::optional<double> quantum_bound_formula(const BellExpression& e);

double evaluate_strategy(const BellExpression& e, const DeterministicStrategy& s);

struct BruteForceResult {
    double value = 0.0;
    DeterministicStrategy strategy;  // lowest-index maximizer, deterministic
};

/// Exact maximum over all 4^N local deterministic assignments. Guarded at
/// max_parties (default 13, ~10^8 cheap evaluations).
BruteForceResult classical_bound_bruteforce(const BellExpression& e, int workers = 0,
                                            int max_parties = 13);

/// Sum over terms of coeff * <v| (x) factors |v>, matrix-free.
double evaluate_expression(const BellExpression& e, const StateVector& v,
                           const ObservableSet& obs);

/// B(obs) |v>, matrix-free.
StateVector apply_bell_operator(const BellExpression& e, const ObservableSet& obs,
                                const StateVector& v);

/// Sum of |coeff| * product of factor operator norms; upper bound on ||B||.
double bell_operator_norm_bound(const BellExpression& e, const ObservableSet& obs);

struct PowerIterOptions {
    double rel_tol = 1e-10;
    long max_iterations = 200000;
    std::uint64_t seed = 1;
    bool allow_unconverged = false;
    int matrix_free_limit = 12;
};

struct ExtremalEigResult {
    double value = 0.0;
    long iterations = 0;
    bool converged = false;
};

/// Largest eigenvalue of B(obs) by power iteration on the shifted positive
/// operator B + c*1, run from the normalized all-ones vector and from one
/// seeded random restart (best of the two). The Rayleigh estimate never
/// exceeds the true maximum.
ExtremalEigResult max_eigenvalue(const BellExpression& e, const ObservableSet& obs,
                                 const PowerIterOptions& opts = {});

/// Dense Bell operator, guarded at dense_limit qubits (default 8).
Eigen::MatrixXcd dense_bell_operator(const BellExpression& e, const ObservableSet& obs,
                                     int dense_limit = 8);

/// Independent cross-check for max_eigenvalue via a full Hermitian solve.
double max_eigenvalue_dense(const BellExpression& e, const ObservableSet& obs,
                            int dense_limit = 8);

/// The state the family is built around: the graph state for graph-like
/// kinds, the tilted GHZ state for the tilted family.
StateVector target_state(const BellExpression& e);

struct BoundCheckOptions {
    bool with_bruteforce = false;
    bool with_eigenvalue = false;
    int workers = 0;
    PowerIterOptions eig;
    double classical_tol = 1e-9;
    double quantum_tol = 1e-8;
};

struct BoundReport {
    std::optional<double> beta_c_formula;
    std::optional<double> beta_q_formula;
    std::optional<double> beta_c_bruteforce;
    std::optional<double> state_expectation;  // <psi|B|psi>, canonical observables
    std::optional<double> lambda_max;
    std::optional<double> lambda_max_dense;
    std::optional<double> ratio;  // beta_q / beta_c (formula)
    std::optional<DeterministicStrategy> strategy;
    double max_delta = 0.0;  // worst cross-check disagreement seen
    bool consistent = true;  // all cross-checks within tolerance
};

BoundReport compute_bound_report(const BellExpression& e, const BoundCheckOptions& opts);

std::string bound_report_to_json(const BoundReport& r, int indent = -1);
std::string bound_report_table(const BoundReport& r);

}  // namespace graphbell
