#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphbell/graph.hpp"
#include "graphbell/observables.hpp"

namespace graphbell {

struct WeightedOperator {
    double weight;
    Eigen::MatrixXcd op;
};

/// Squared-term operators of the shifted-Bell-operator decomposition for the
/// single-pivot graph family, with the pivot brought to party 1 (same
/// relabeling as build_graph_inequality). Weights: deg(pivot)/sqrt(2) for
/// the Sum operator, 1/sqrt(2) per pivot neighbor, 1/2 per remaining vertex.
/// Dense operators; guarded at 8 qubits.
std::vector<WeightedOperator> graph_sos_terms(const Graph& g, const ObservableSet& obs);

/// Frobenius norm of beta_Q*1 - B(obs) - sum_i w_i (1 - P_i)^2. Vanishes
/// (< 1e-9) for every observable set whose members square to one; a large
/// value flags a violated precondition rather than an error.
double sos_residual(const Graph& g, const ObservableSet& obs);

/// Tilted-family analogue: Frobenius norm of
/// 2*(beta_Q*1 - B) - [sqrt(2)(N-1)(1 - S_1)^2 + sqrt(2) sum_i (1 - S_i)^2]
/// with the stabilizers rebuilt from obs through the mu-substitution.
double tilted_sos_residual(int n, double theta, const ObservableSet& obs);

struct CertificateReport {
    std::string family;
    int draws = 0;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::vector<double> weights;  // decomposition weights of the family
    double max_residual = 0.0;
    std::vector<double> residuals;
    bool pass = false;
};

CertificateReport certify_graph(const Graph& g, int draws, std::uint64_t seed,
                                double tol = 1e-9, int workers = 0);
CertificateReport certify_tilted(int n, double theta, int draws, std::uint64_t seed,
                                 double tol = 1e-9, int workers = 0);

std::string certificate_report_to_json(const CertificateReport& r, int indent = -1);

}  // namespace graphbell
