#include "graphbell/certificates.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

#include "graphbell/bounds.hpp"
#include "graphbell/builders.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/parallel.hpp"

namespace graphbell {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kDenseLimit = 8;

Eigen::MatrixXcd dense_product(int n, const std::map<int, Eigen::Matrix2cd>& sites) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Constant(1, 1, 1.0);
    for (int p = 0; p < n; ++p) {
        const auto it = sites.find(p);
        const Eigen::Matrix2cd& factor = (it == sites.end()) ? id : it->second;
        Eigen::MatrixXcd next(op.rows() * 2, op.cols() * 2);
        for (Eigen::Index i = 0; i < op.rows(); ++i) {
            for (Eigen::Index j = 0; j < op.cols(); ++j) {
                next.block<2, 2>(2 * i, 2 * j) = op(i, j) * factor;
            }
        }
        op = std::move(next);
    }
    return op;
}

void check_size(int n, const ObservableSet& obs) {
    if (n > kDenseLimit) {
        throw ResourceLimitError("certificates materialize dense operators; guard is N <= " +
                                 std::to_string(kDenseLimit));
    }
    if (obs.num_parties() != n) {
        throw ValidationError("observable set size mismatch");
    }
}

}  // namespace

std::vector<WeightedOperator> graph_sos_terms(const Graph& g, const ObservableSet& obs) {
    const int n = g.num_vertices();
    check_size(n, obs);
    const Graph r = relabel(g, pivot_to_front_permutation(g));
    const auto& pivot_nb = r.neighborhood(0);
    const double n_max = static_cast<double>(r.degree(0));

    std::vector<WeightedOperator> out;
    out.reserve(static_cast<std::size_t>(n));

    std::map<int, Eigen::Matrix2cd> sites;
    sites[0] = obs.setting_matrix(0, Setting::Sum) / kSqrt2;
    for (int i : pivot_nb) sites[i] = obs.get(i, 1);
    out.push_back({n_max / kSqrt2, dense_product(n, sites)});

    for (int i : pivot_nb) {
        sites.clear();
        sites[0] = obs.setting_matrix(0, Setting::Diff) / kSqrt2;
        sites[i] = obs.get(i, 0);
        for (int j : r.neighborhood(i)) {
            if (j != 0) sites[j] = obs.get(j, 1);
        }
        out.push_back({1.0 / kSqrt2, dense_product(n, sites)});
    }

    for (int i = 1; i < n; ++i) {
        if (std::binary_search(pivot_nb.begin(), pivot_nb.end(), i)) continue;
        sites.clear();
        sites[i] = obs.get(i, 0);
        for (int j : r.neighborhood(i)) sites[j] = obs.get(j, 1);
        out.push_back({0.5, dense_product(n, sites)});
    }
    return out;
}

double sos_residual(const Graph& g, const ObservableSet& obs) {
    const int n = g.num_vertices();
    check_size(n, obs);
    const BellExpression e = build_graph_inequality(g);
    const double beta_q = *quantum_bound_formula(e);
    const Eigen::Index dim = Eigen::Index{1} << n;

    Eigen::MatrixXcd lhs =
        beta_q * Eigen::MatrixXcd::Identity(dim, dim) - dense_bell_operator(e, obs);
    for (const WeightedOperator& term : graph_sos_terms(g, obs)) {
        const Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(dim, dim) - term.op;
        lhs -= term.weight * (d * d);
    }
    return lhs.norm();
}

double tilted_sos_residual(int n, double theta, const ObservableSet& obs) {
    check_size(n, obs);
    if (theta <= 0.0 || theta > std::numbers::pi / 4 + 1e-12) {
        throw ValidationError("tilted_sos_residual: theta must lie in (0, pi/4]");
    }
    const double mu = std::asin(std::sin(2 * theta) / kSqrt2);
    const double sin_mu = std::sin(mu);
    const double cos_mu = std::cos(mu);
    if (sin_mu < 1e-12 || cos_mu < 1e-12) {
        throw ValidationError("tilted_sos_residual: degenerate mu");
    }

    const Eigen::Matrix2cd x1 = obs.setting_matrix(0, Setting::Sum) / (2 * sin_mu);
    const Eigen::Matrix2cd z1 = obs.setting_matrix(0, Setting::Diff) / (2 * cos_mu);

    const Eigen::Index dim = Eigen::Index{1} << n;
    std::map<int, Eigen::Matrix2cd> sites;

    sites[0] = std::sin(2 * theta) * x1;
    for (int i = 1; i < n; ++i) sites[i] = obs.get(i, 0);
    Eigen::MatrixXcd s1 = dense_product(n, sites);
    sites.clear();
    sites[0] = std::cos(2 * theta) * z1;
    s1 += dense_product(n, sites);

    const BellExpression e = build_tilted_ghz(n, theta);
    const double beta_q = *quantum_bound_formula(e);
    Eigen::MatrixXcd lhs = 2.0 * (beta_q * Eigen::MatrixXcd::Identity(dim, dim) -
                                  dense_bell_operator(e, obs));

    const Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Identity(dim, dim) - s1;
    lhs -= kSqrt2 * (n - 1) * (d1 * d1);
    for (int i = 1; i < n; ++i) {
        sites.clear();
        sites[0] = z1;
        sites[i] = obs.get(i, 1);
        const Eigen::MatrixXcd si = dense_product(n, sites);
        const Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(dim, dim) - si;
        lhs -= kSqrt2 * (d * d);
    }
    return lhs.norm();
}

namespace {

CertificateReport run_draws(const std::string& family, int n, int draws,
                            std::uint64_t seed, double tol, int workers,
                            const std::function<double(const ObservableSet&)>& residual) {
    CertificateReport report;
    report.family = family;
    report.draws = draws;
    report.seed = seed;
    report.tol = tol;
    report.residuals.assign(static_cast<std::size_t>(draws), 0.0);

    // Angle vectors come from one sequential stream so the report is
    // independent of the worker count.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> angle_sets;
    angle_sets.reserve(static_cast<std::size_t>(draws));
    for (int d = 0; d < draws; ++d) angle_sets.push_back(random_jordan_angles(n, rng));

    parallel_chunks(draws, resolve_worker_count(workers),
                    [&](int, std::int64_t begin, std::int64_t end) {
                        for (std::int64_t d = begin; d < end; ++d) {
                            const ObservableSet obs =
                                jordan_observables(angle_sets[static_cast<std::size_t>(d)]);
                            report.residuals[static_cast<std::size_t>(d)] = residual(obs);
                        }
                    });

    for (double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
    report.pass = report.max_residual < tol;
    return report;
}

}  // namespace

CertificateReport certify_graph(const Graph& g, int draws, std::uint64_t seed, double tol,
                                int workers) {
    CertificateReport report =
        run_draws("graph n=" + std::to_string(g.num_vertices()), g.num_vertices(), draws,
                  seed, tol, workers,
                  [&g](const ObservableSet& obs) { return sos_residual(g, obs); });
    const Graph r = relabel(g, pivot_to_front_permutation(g));
    report.weights.push_back(r.degree(0) / kSqrt2);
    for (int i = 0; i < r.degree(0); ++i) report.weights.push_back(1.0 / kSqrt2);
    for (int i = 0; i < r.num_vertices() - r.degree(0) - 1; ++i) {
        report.weights.push_back(0.5);
    }
    return report;
}

CertificateReport certify_tilted(int n, double theta, int draws, std::uint64_t seed,
                                 double tol, int workers) {
    CertificateReport report =
        run_draws("tilted n=" + std::to_string(n) + " theta=" + std::to_string(theta), n,
                  draws, seed, tol, workers, [n, theta](const ObservableSet& obs) {
                      return tilted_sos_residual(n, theta, obs);
                  });
    report.weights.push_back(kSqrt2 * (n - 1));
    for (int i = 1; i < n; ++i) report.weights.push_back(kSqrt2);
    return report;
}

std::string certificate_report_to_json(const CertificateReport& r, int indent) {
    nlohmann::json j;
    j["family"] = r.family;
    j["draws"] = r.draws;
    j["seed"] = r.seed;
    j["tol"] = r.tol;
    j["weights"] = r.weights;
    j["max_residual"] = r.max_residual;
    j["residuals"] = r.residuals;
    j["pass"] = r.pass;
    return j.dump(indent);
}

}  // namespace graphbell
