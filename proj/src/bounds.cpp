#include "graphbell/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "graphbell/errors.hpp"
#include "graphbell/parallel.hpp"

namespace graphbell {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int substituted_degree_sum(const BellExpression& e) {
    int sum = 0;
    for (int v : e.meta.substitutions) sum += e.meta.graph->degree(v);
    return sum;
}

bool graph_like(const BellExpression& e) {
    return (e.meta.kind == "graph" || e.meta.kind == "multi") && e.meta.graph &&
           !e.meta.substitutions.empty();
}

void check_observables(const BellExpression& e, const ObservableSet& obs) {
    if (obs.num_parties() != e.n_parties) {
        throw ValidationError("observable set has " + std::to_string(obs.num_parties()) +
                              " parties, expression has " + std::to_string(e.n_parties));
    }
}

}  // namespace

std::optional<double> classical_bound_formula(const BellExpression& e) {
    if (graph_like(e)) {
        const int n = e.n_parties;
        const int k = static_cast<int>(e.meta.substitutions.size());
        return static_cast<double>(n - k + substituted_degree_sum(e));
    }
    if (e.meta.kind == "tilted" && e.meta.theta) {
        const double c = std::cos(2 * *e.meta.theta);
        return 2.0 * (e.n_parties - 1) * (1.0 + c) / std::sqrt(1.0 + c * c);
    }
    return std::nullopt;
}

std::optional<double> quantum_bound_formula(const BellExpression& e) {
    if (graph_like(e)) {
        const int n = e.n_parties;
        const int k = static_cast<int>(e.meta.substitutions.size());
        return (2 * kSqrt2 - 1) * substituted_degree_sum(e) + n - k;
    }
    if (e.meta.kind == "tilted") {
        return 2.0 * kSqrt2 * (e.n_parties - 1);
    }
    return std::nullopt;
}

double evaluate_strategy(const BellExpression& e, const DeterministicStrategy& s) {
    if (static_cast<int>(s.signs.size()) != e.n_parties) {
        throw ValidationError("strategy size mismatch");
    }
    double total = 0.0;
    for (const Term& t : e.terms) {
        double prod = t.coeff;
        for (const auto& [party, setting] : t.factors) {
            const auto& [a0, a1] = s.signs[static_cast<std::size_t>(party)];
            switch (setting) {
                case Setting::A0: prod *= a0; break;
                case Setting::A1: prod *= a1; break;
                case Setting::Sum: prod *= a0 + a1; break;
                case Setting::Diff: prod *= a0 - a1; break;
            }
            if (prod == 0.0) break;
        }
        total += prod;
    }
    return total;
}

BruteForceResult classical_bound_bruteforce(const BellExpression& e, int workers,
                                            int max_parties) {
    const int n = e.n_parties;
    if (n > max_parties) {
        throw ResourceLimitError("brute force enumerates 4^" + std::to_string(n) +
                                 " strategies; guard is N <= " + std::to_string(max_parties));
    }

    struct FlatFactor {
        int party;
        Setting setting;
    };
    struct FlatTerm {
        double coeff;
        std::vector<FlatFactor> factors;
    };
    std::vector<FlatTerm> flat;
    flat.reserve(e.terms.size());
    for (const Term& t : e.terms) {
        FlatTerm ft{t.coeff, {}};
        for (const auto& [party, setting] : t.factors) ft.factors.push_back({party, setting});
        flat.push_back(std::move(ft));
    }

    const std::int64_t total = std::int64_t{1} << (2 * n);
    workers = resolve_worker_count(workers);

    struct Best {
        double value = -std::numeric_limits<double>::infinity();
        std::int64_t index = -1;
    };
    std::vector<Best> bests(static_cast<std::size_t>(workers));

    parallel_chunks(total, workers, [&](int w, std::int64_t begin, std::int64_t end) {
        Best local;
        std::array<int, 2> signs[16];
        for (std::int64_t idx = begin; idx < end; ++idx) {
            for (int p = 0; p < n; ++p) {
                signs[p][0] = (idx >> (2 * p)) & 1 ? 1 : -1;
                signs[p][1] = (idx >> (2 * p + 1)) & 1 ? 1 : -1;
            }
            double value = 0.0;
            for (const FlatTerm& t : flat) {
                double prod = t.coeff;
                for (const FlatFactor& f : t.factors) {
                    switch (f.setting) {
                        case Setting::A0: prod *= signs[f.party][0]; break;
                        case Setting::A1: prod *= signs[f.party][1]; break;
                        case Setting::Sum: prod *= signs[f.party][0] + signs[f.party][1]; break;
                        case Setting::Diff: prod *= signs[f.party][0] - signs[f.party][1]; break;
                    }
                    if (prod == 0.0) break;
                }
                value += prod;
            }
            if (value > local.value || (value == local.value && idx < local.index)) {
                local = {value, idx};
            }
        }
        bests[static_cast<std::size_t>(w)] = local;
    });

    Best overall;
    for (const Best& b : bests) {
        if (b.index < 0) continue;
        if (b.value > overall.value ||
            (b.value == overall.value && b.index < overall.index)) {
            overall = b;
        }
    }

    BruteForceResult result;
    result.value = overall.value;
    result.strategy.signs.resize(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        result.strategy.signs[static_cast<std::size_t>(p)] = {
            (overall.index >> (2 * p)) & 1 ? 1 : -1,
            (overall.index >> (2 * p + 1)) & 1 ? 1 : -1};
    }
    return result;
}

double evaluate_expression(const BellExpression& e, const StateVector& v,
                           const ObservableSet& obs) {
    check_observables(e, obs);
    if (v.num_qubits != e.n_parties) {
        throw ValidationError("state has " + std::to_string(v.num_qubits) +
                              " qubits, expression has " + std::to_string(e.n_parties) +
                              " parties");
    }
    cplx acc = 0.0;
    double scale = 0.0;
    for (const Term& t : e.terms) {
        StateVector w = v;
        for (const auto& [party, setting] : t.factors) {
            apply_one_qubit(obs.setting_matrix(party, setting), party, w);
        }
        acc += t.coeff * inner_product(v, w);
        scale += std::abs(t.coeff);
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, scale)) {
        throw ValidationError("Bell value has imaginary residue " +
                              std::to_string(acc.imag()) + "; observables not Hermitian?");
    }
    return acc.real();
}

StateVector apply_bell_operator(const BellExpression& e, const ObservableSet& obs,
                                const StateVector& v) {
    check_observables(e, obs);
    StateVector out;
    out.num_qubits = v.num_qubits;
    out.amps.assign(v.dim(), 0.0);
    for (const Term& t : e.terms) {
        StateVector w = v;
        for (const auto& [party, setting] : t.factors) {
            apply_one_qubit(obs.setting_matrix(party, setting), party, w);
        }
        for (std::size_t i = 0; i < out.dim(); ++i) out.amps[i] += t.coeff * w.amps[i];
    }
    return out;
}

double bell_operator_norm_bound(const BellExpression& e, const ObservableSet& obs) {
    check_observables(e, obs);
    double bound = 0.0;
    for (const Term& t : e.terms) {
        double prod = std::abs(t.coeff);
        for (const auto& [party, setting] : t.factors) {
            prod *= obs.setting_matrix(party, setting).operatorNorm();
        }
        bound += prod;
    }
    return bound;
}

namespace {

struct PowerRun {
    double value = -std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = false;
};

PowerRun power_iterate(const BellExpression& e, const ObservableSet& obs, double shift,
                       StateVector v, const PowerIterOptions& opts) {
    v.normalize();
    PowerRun run;
    double lambda = 0.0;
    for (long iter = 1; iter <= opts.max_iterations; ++iter) {
        StateVector w = apply_bell_operator(e, obs, v);
        for (std::size_t i = 0; i < w.dim(); ++i) w.amps[i] += shift * v.amps[i];
        lambda = inner_product(v, w).real();
        double residual_sq = 0.0;
        for (std::size_t i = 0; i < w.dim(); ++i) {
            residual_sq += std::norm(w.amps[i] - lambda * v.amps[i]);
        }
        run.iterations = iter;
        if (std::sqrt(residual_sq) <= opts.rel_tol * std::max(std::abs(lambda), 1.0)) {
            run.converged = true;
            break;
        }
        const double wnorm = w.norm();
        if (wnorm == 0.0) break;  // annihilated; restart handles it
        for (std::size_t i = 0; i < w.dim(); ++i) w.amps[i] /= wnorm;
        v = std::move(w);
    }
    run.value = lambda - shift;
    return run;
}

}  // namespace

ExtremalEigResult max_eigenvalue(const BellExpression& e, const ObservableSet& obs,
                                 const PowerIterOptions& opts) {
    const int n = e.n_parties;
    if (n > opts.matrix_free_limit) {
        throw ResourceLimitError("max_eigenvalue guard: N <= " +
                                 std::to_string(opts.matrix_free_limit));
    }
    check_observables(e, obs);
    const double shift = bell_operator_norm_bound(e, obs);

    StateVector ones;
    ones.num_qubits = n;
    ones.amps.assign(std::size_t{1} << n, 1.0);

    StateVector random_seed;
    random_seed.num_qubits = n;
    random_seed.amps.resize(std::size_t{1} << n);
    std::mt19937_64 rng(opts.seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (cplx& a : random_seed.amps) a = cplx(2 * unit() - 1, 2 * unit() - 1);

    const PowerRun a = power_iterate(e, obs, shift, std::move(ones), opts);
    const PowerRun b = power_iterate(e, obs, shift, std::move(random_seed), opts);
    const PowerRun& best = (a.value >= b.value) ? a : b;

    if (!best.converged && !opts.allow_unconverged) {
        throw ConvergenceError("power iteration did not reach tolerance " +
                               std::to_string(opts.rel_tol) + " within " +
                               std::to_string(opts.max_iterations) + " iterations");
    }
    return {best.value, a.iterations + b.iterations, best.converged};
}

namespace {

Eigen::MatrixXcd kron_with_2x2(const Eigen::MatrixXcd& a, const Eigen::Matrix2cd& b) {
    Eigen::MatrixXcd out(a.rows() * 2, a.cols() * 2);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd dense_bell_operator(const BellExpression& e, const ObservableSet& obs,
                                     int dense_limit) {
    const int n = e.n_parties;
    if (n > dense_limit) {
        throw ResourceLimitError("dense Bell operator guard: N <= " +
                                 std::to_string(dense_limit));
    }
    check_observables(e, obs);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const Term& t : e.terms) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Constant(1, 1, t.coeff);
        for (int p = 0; p < n; ++p) {
            const auto it = t.factors.find(p);
            op = kron_with_2x2(op, it == t.factors.end()
                                       ? id
                                       : obs.setting_matrix(p, it->second).eval());
        }
        total += op;
    }
    return total;
}

double max_eigenvalue_dense(const BellExpression& e, const ObservableSet& obs,
                            int dense_limit) {
    const Eigen::MatrixXcd b = dense_bell_operator(e, obs, dense_limit);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(b, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
}

StateVector target_state(const BellExpression& e) {
    if (graph_like(e)) return graph_state(*e.meta.graph);
    if (e.meta.kind == "tilted" && e.meta.theta) {
        return ghz_state(e.n_parties, *e.meta.theta);
    }
    throw ValidationError("no target state for expression kind '" + e.meta.kind + "'");
}

BoundReport compute_bound_report(const BellExpression& e, const BoundCheckOptions& opts) {
    BoundReport r;
    r.beta_c_formula = classical_bound_formula(e);
    r.beta_q_formula = quantum_bound_formula(e);
    if (r.beta_c_formula && r.beta_q_formula && *r.beta_c_formula != 0.0) {
        r.ratio = *r.beta_q_formula / *r.beta_c_formula;
    }

    auto record = [&r](double delta, double tol) {
        r.max_delta = std::max(r.max_delta, std::abs(delta));
        if (std::abs(delta) > tol) r.consistent = false;
    };

    if (opts.with_bruteforce) {
        BruteForceResult bf = classical_bound_bruteforce(e, opts.workers);
        r.beta_c_bruteforce = bf.value;
        r.strategy = std::move(bf.strategy);
        if (r.beta_c_formula) record(bf.value - *r.beta_c_formula, opts.classical_tol);
    }

    const bool has_canonical =
        graph_like(e) || (e.meta.kind == "tilted" && e.meta.theta.has_value());
    if (has_canonical) {
        const ObservableSet obs = canonical_observables(e);
        const StateVector psi = target_state(e);
        r.state_expectation = evaluate_expression(e, psi, obs);
        if (r.beta_q_formula) {
            record(*r.state_expectation - *r.beta_q_formula, opts.quantum_tol);
        }
        if (opts.with_eigenvalue) {
            r.lambda_max = max_eigenvalue(e, obs, opts.eig).value;
            if (r.beta_q_formula) record(*r.lambda_max - *r.beta_q_formula, opts.quantum_tol);
            if (e.n_parties <= 8) {
                r.lambda_max_dense = max_eigenvalue_dense(e, obs);
                record(*r.lambda_max_dense - *r.lambda_max, opts.quantum_tol);
            }
        }
    }
    return r;
}

std::string bound_report_to_json(const BoundReport& r, int indent) {
    nlohmann::json j;
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("beta_c_formula", r.beta_c_formula);
    put("beta_q_formula", r.beta_q_formula);
    put("beta_c_bruteforce", r.beta_c_bruteforce);
    put("state_expectation", r.state_expectation);
    put("lambda_max", r.lambda_max);
    put("lambda_max_dense", r.lambda_max_dense);
    put("ratio", r.ratio);
    if (r.strategy) {
        auto signs = nlohmann::json::array();
        for (const auto& [a0, a1] : r.strategy->signs) signs.push_back({a0, a1});
        j["argmax_strategy"] = std::move(signs);
    }
    j["max_delta"] = r.max_delta;
    j["consistent"] = r.consistent;
    return j.dump(indent);
}

std::string bound_report_table(const BoundReport& r) {
    std::ostringstream out;
    out << std::left;
    auto row = [&out](const std::string& label, const std::optional<double>& value) {
        if (!value) return;
        out << "  " << std::setw(24) << label << std::setprecision(15) << *value << "\n";
    };
    row("beta_c (formula)", r.beta_c_formula);
    row("beta_c (brute force)", r.beta_c_bruteforce);
    row("beta_q (formula)", r.beta_q_formula);
    row("<psi|B|psi>", r.state_expectation);
    row("lambda_max (iterative)", r.lambda_max);
    row("lambda_max (dense)", r.lambda_max_dense);
    row("ratio beta_q/beta_c", r.ratio);
    out << "  " << std::setw(24) << "max cross-check delta" << r.max_delta << "\n";
    out << "  " << std::setw(24) << "consistent" << (r.consistent ? "yes" : "no") << "\n";
    return out.str();
}

}  // namespace graphbell
