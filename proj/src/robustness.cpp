#include "graphbell/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "graphbell/bounds.hpp"
#include "graphbell/builders.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/observables.hpp"
#include "graphbell/parallel.hpp"

namespace graphbell {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr int kDenseLimit = 7;

double lambda_min(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// Single-qubit conjugation rho -> (I..G..I) rho (I..G..I) without forming
/// the full product operator.
Eigen::MatrixXcd conjugate_site(const Eigen::MatrixXcd& rho, const Eigen::Matrix2cd& op,
                                int site, int n) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Constant(1, 1, 1.0);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (int p = 0; p < n; ++p) {
        const Eigen::Matrix2cd& factor = (p == site) ? op : id;
        Eigen::MatrixXcd next(full.rows() * 2, full.cols() * 2);
        for (Eigen::Index i = 0; i < full.rows(); ++i) {
            for (Eigen::Index j = 0; j < full.cols(); ++j) {
                next.block<2, 2>(2 * i, 2 * j) = full(i, j) * factor;
            }
        }
        full = std::move(next);
    }
    return full * rho * full;
}

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
};

/// Nelder-Mead descent with coordinates clamped to [0, pi/2].
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, double step, int max_iters) {
    const std::size_t n = x0.size();
    auto clamp = [](std::vector<double>& x) {
        for (double& c : x) c = std::clamp(c, 0.0, kHalfPi);
    };
    clamp(x0);

    std::vector<std::pair<double, std::vector<double>>> simplex;
    simplex.reserve(n + 1);
    simplex.emplace_back(f(x0), x0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += (x[i] + step <= kHalfPi) ? step : -step;
        clamp(x);
        simplex.emplace_back(f(x), x);
    }

    for (int iter = 0; iter < max_iters; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t v = 0; v < n; ++v) centroid[i] += simplex[v].second[i];
            centroid[i] /= static_cast<double>(n);
        }
        auto& worst = simplex.back();

        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = centroid[i] + t * (centroid[i] - worst.second[i]);
            }
            clamp(x);
            return x;
        };

        const std::vector<double> reflected = blend(1.0);
        const double fr = f(reflected);
        if (fr < simplex.front().first) {
            const std::vector<double> expanded = blend(2.0);
            const double fe = f(expanded);
            worst = (fe < fr) ? std::make_pair(fe, expanded) : std::make_pair(fr, reflected);
        } else if (fr < simplex[n - 1].first) {
            worst = {fr, reflected};
        } else {
            const std::vector<double> contracted = blend(-0.5);
            const double fc = f(contracted);
            if (fc < worst.first) {
                worst = {fc, contracted};
            } else {
                for (std::size_t v = 1; v <= n; ++v) {
                    for (std::size_t i = 0; i < n; ++i) {
                        simplex[v].second[i] =
                            0.5 * (simplex[v].second[i] + simplex[0].second[i]);
                    }
                    simplex[v].first = f(simplex[v].second);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return {simplex.front().second, simplex.front().first};
}

struct SearchContext {
    Graph graph;
    BellExpression expr;

    explicit SearchContext(const Graph& g)
        : graph(relabel(g, pivot_to_front_permutation(g))),
          expr(build_graph_inequality(g)) {}

    double objective(double s, const std::vector<double>& angles) const {
        const Eigen::MatrixXcd k = dressed_target(graph, angles);
        const Eigen::MatrixXcd b =
            dense_bell_operator(expr, jordan_observables(angles), kDenseLimit);
        return lambda_min(k - s * b);
    }
};

}  // namespace

double gain(double x) {
    return (1.0 + std::numbers::sqrt2) * (std::sin(x) + std::cos(x) - 1.0);
}

Eigen::Matrix2cd extraction_operator(int party, double x) {
    if (x < 0.0 || x > kHalfPi + 1e-12) {
        throw ValidationError("extraction_operator: angle out of [0, pi/2]");
    }
    const bool first_branch = (x <= std::numbers::pi / 4);
    if (party == 0) return first_branch ? pauli_x() : pauli_z();
    return first_branch ? pauli_h() : pauli_v();
}

Eigen::MatrixXcd dressed_target(const Graph& g, const std::vector<double>& angles) {
    const int n = g.num_vertices();
    if (n > kDenseLimit) {
        throw ResourceLimitError("dressed_target guard: N <= " + std::to_string(kDenseLimit));
    }
    if (static_cast<int>(angles.size()) != n) {
        throw ValidationError("dressed_target: one angle per vertex required");
    }
    const StateVector psi = graph_state(g);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            rho(i, j) = psi.amps[static_cast<std::size_t>(i)] *
                        std::conj(psi.amps[static_cast<std::size_t>(j)]);
        }
    }
    for (int p = 0; p < n; ++p) {
        const double gp = gain(angles[static_cast<std::size_t>(p)]);
        const Eigen::MatrixXcd flipped =
            conjugate_site(rho, extraction_operator(p, angles[static_cast<std::size_t>(p)]),
                           p, n);
        rho = 0.5 * (1.0 + gp) * rho + 0.5 * (1.0 - gp) * flipped;
    }
    return rho;
}

MuResult mu_for_slope(const Graph& g, double s, const MuSearchConfig& cfg) {
    if (s < 0.0) throw ValidationError("mu_for_slope: slope must be nonnegative");
    if (cfg.grid_points < 2) throw ValidationError("mu_for_slope: grid needs >= 2 points");
    const SearchContext ctx(g);
    const int n = ctx.graph.num_vertices();

    const int gp = cfg.grid_points;
    const int axes = cfg.symmetric_grid ? std::min(n, 2) : n;
    std::int64_t total = 1;
    for (int a = 0; a < axes; ++a) total *= gp;

    auto grid_angles = [&](std::int64_t idx) {
        std::vector<double> axis_values(static_cast<std::size_t>(axes));
        for (int a = 0; a < axes; ++a) {
            axis_values[static_cast<std::size_t>(a)] =
                kHalfPi * static_cast<double>(idx % gp) / (gp - 1);
            idx /= gp;
        }
        std::vector<double> angles(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) {
            angles[static_cast<std::size_t>(p)] =
                axis_values[static_cast<std::size_t>(std::min(p, axes - 1))];
        }
        return angles;
    };

    struct Candidate {
        double value = std::numeric_limits<double>::infinity();
        std::int64_t index = -1;
    };
    const int workers = resolve_worker_count(cfg.workers);
    const int keep = std::max(1, cfg.refine_starts);
    std::vector<std::vector<Candidate>> kept(
        static_cast<std::size_t>(workers),
        std::vector<Candidate>(static_cast<std::size_t>(keep)));

    parallel_chunks(total, workers, [&](int w, std::int64_t begin, std::int64_t end) {
        auto& local = kept[static_cast<std::size_t>(w)];
        for (std::int64_t idx = begin; idx < end; ++idx) {
            const double value = ctx.objective(s, grid_angles(idx));
            if (value < local.back().value) {
                local.back() = {value, idx};
                std::sort(local.begin(), local.end(),
                          [](const Candidate& a, const Candidate& b) {
                              return a.value < b.value;
                          });
            }
        }
    });

    std::vector<Candidate> best;
    for (const auto& local : kept) {
        for (const Candidate& c : local) {
            if (c.index >= 0) best.push_back(c);
        }
    }
    std::sort(best.begin(), best.end(),
              [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    if (best.empty()) throw ValidationError("mu_for_slope: empty grid");
    best.resize(std::min<std::size_t>(best.size(), static_cast<std::size_t>(keep)));

    MuResult result;
    result.grid_min = best.front().value;
    result.refined_min = best.front().value;
    result.argmin = grid_angles(best.front().index);

    const double step = 0.5 * kHalfPi / (gp - 1);
    for (const Candidate& c : best) {
        const SimplexResult refined = nelder_mead(
            [&](const std::vector<double>& angles) { return ctx.objective(s, angles); },
            grid_angles(c.index), step, cfg.simplex_max_iters);
        if (refined.value < result.refined_min) {
            result.refined_min = refined.value;
            result.argmin = refined.x;
        }
    }
    return result;
}

RobustnessBound optimal_slope(const Graph& g, const MuSearchConfig& cfg, double tight_tol) {
    const BellExpression e = build_graph_inequality(g);
    const double beta_q = *quantum_bound_formula(e);
    const double beta_c = *classical_bound_formula(e);

    RobustnessBound bound;
    bound.beta_c = beta_c;
    bound.beta_q = beta_q;
    bound.tight_tol = tight_tol;
    bound.cfg = cfg;

    int evaluations = 0;
    auto tightness = [&](double s) {
        ++evaluations;
        return s * beta_q + mu_for_slope(g, s, cfg).refined_min;
    };

    // Bracket: grow s until the bound is tight at the ideal point.
    double lo = 0.0;
    double hi = 0.25 / beta_q;
    bool bracketed = false;
    for (int k = 0; k < 12; ++k) {
        if (tightness(hi) >= 1.0 - tight_tol) {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if (!bracketed) {
        throw ConvergenceError("optimal_slope: no tight slope in [0, " +
                               std::to_string(hi) + "]");
    }
    while (hi - lo > 1e-4 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (tightness(mid) >= 1.0 - tight_tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    bound.slope = hi;
    bound.mu = mu_for_slope(g, hi, cfg).refined_min;
    bound.tightness = bound.slope * beta_q + bound.mu;
    bound.mu_evaluations = evaluations;
    return bound;
}

double validity_margin(const Graph& g, const RobustnessBound& bound, int draws,
                       std::uint64_t seed, int workers) {
    const SearchContext ctx(g);
    const int n = ctx.graph.num_vertices();

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> samples;
    samples.reserve(static_cast<std::size_t>(draws));
    for (int d = 0; d < draws; ++d) samples.push_back(random_jordan_angles(n, rng));

    std::vector<double> margins(static_cast<std::size_t>(draws), 0.0);
    parallel_chunks(draws, resolve_worker_count(workers),
                    [&](int, std::int64_t begin, std::int64_t end) {
                        for (std::int64_t d = begin; d < end; ++d) {
                            margins[static_cast<std::size_t>(d)] =
                                ctx.objective(bound.slope,
                                              samples[static_cast<std::size_t>(d)]) -
                                bound.mu;
                        }
                    });
    return *std::min_element(margins.begin(), margins.end());
}

std::vector<std::pair<double, double>> fidelity_curve(const RobustnessBound& bound,
                                                      int points) {
    if (points < 2) throw ValidationError("fidelity_curve needs at least 2 points");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double rel = static_cast<double>(i) / (points - 1);
        const double beta = bound.beta_c + rel * (bound.beta_q - bound.beta_c);
        curve.emplace_back(rel, bound.slope * beta + bound.mu);
    }
    return curve;
}

void write_curve_csv(std::ostream& out,
                     const std::vector<std::pair<double, double>>& curve) {
    out << "relative_violation,fidelity_bound\n";
    out.precision(17);
    for (const auto& [rel, fid] : curve) {
        out << rel << "," << fid << "\n";
    }
}

std::string robustness_bound_to_json(const RobustnessBound& bound, int indent) {
    nlohmann::json j;
    j["slope"] = bound.slope;
    j["mu"] = bound.mu;
    j["tightness"] = bound.tightness;
    j["beta_c"] = bound.beta_c;
    j["beta_q"] = bound.beta_q;
    j["tight_tol"] = bound.tight_tol;
    j["mu_evaluations"] = bound.mu_evaluations;
    j["grid_points"] = bound.cfg.grid_points;
    j["simplex_max_iters"] = bound.cfg.simplex_max_iters;
    j["refine_starts"] = bound.cfg.refine_starts;
    j["symmetric_grid"] = bound.cfg.symmetric_grid;
    return j.dump(indent);
}

}  // namespace graphbell
