#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphbell/expression.hpp"
#include "graphbell/graph.hpp"

namespace graphbell {

/// Channel mixing gain g(x) = (1 + sqrt(2)) (sin x + cos x - 1) on [0, pi/2];
/// equals 1 at x = pi/4 (the channel becomes the identity there).
double gain(double x);

/// Extraction unitary per party: X / Z for party 1, H / V otherwise, the
/// first branch when x <= pi/4 (boundary inclusive).
Eigen::Matrix2cd extraction_operator(int party, double x);

/// K(angles) = image of |psi_G><psi_G| under the product of the per-party
/// self-dual mixing channels. Expects the pivot already at vertex 1 (the
/// search entry points relabel before calling). Dense; guarded at 7 qubits.
Eigen::MatrixXcd dressed_target(const Graph& g, const std::vector<double>& angles);

struct MuSearchConfig {
    int grid_points = 9;          // per axis on [0, pi/2]; odd keeps pi/4 on the grid
    int simplex_max_iters = 200;
    int refine_starts = 3;
    bool symmetric_grid = false;  // single shared angle for parties >= 2 (grid only)
    int workers = 0;
};

struct MuResult {
    double grid_min = 0.0;
    double refined_min = 0.0;
    std::vector<double> argmin;
};

/// mu(s) = min over angle vectors of lambda_min(K(a) - s * B(a)), located by
/// a coarse grid plus simplex descent from the best grid points. Returns
/// both the certified grid minimum and the refined minimum.
MuResult mu_for_slope(const Graph& g, double s, const MuSearchConfig& cfg = {});

struct RobustnessBound {
    double slope = 0.0;
    double mu = 0.0;
    double tightness = 0.0;  // slope * beta_q + mu, 1 within tolerance
    double beta_c = 0.0;
    double beta_q = 0.0;
    double tight_tol = 1e-6;
    int mu_evaluations = 0;
    MuSearchConfig cfg;
};

/// Smallest slope for which slope * beta_q + mu(slope) >= 1 - tight_tol,
/// found by bracket scan plus bisection. Throws ConvergenceError when no
/// bracket exists in the scanned interval.
RobustnessBound optimal_slope(const Graph& g, const MuSearchConfig& cfg = {},
                              double tight_tol = 1e-6);

/// Minimum over fresh random angle draws of lambda_min(K - sB) - mu; the
/// bound is sound on the sample when this is >= -1e-8.
double validity_margin(const Graph& g, const RobustnessBound& bound, int draws,
                       std::uint64_t seed, int workers = 0);

/// Rows ((beta - beta_c) / (beta_q - beta_c), slope * beta + mu) for beta
/// sweeping [beta_c, beta_q].
std::vector<std::pair<double, double>> fidelity_curve(const RobustnessBound& bound,
                                                      int points);

void write_curve_csv(std::ostream& out,
                     const std::vector<std::pair<double, double>>& curve);

std::string robustness_bound_to_json(const RobustnessBound& bound, int indent = -1);

}  // namespace graphbell
