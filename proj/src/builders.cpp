#include "graphbell/builders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "graphbell/errors.hpp"

namespace graphbell {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

/// Sum/Diff block for one substitution vertex j: a Sum term weighted by
/// deg(j) over the neighborhood, plus one Diff term per neighbor.
void emit_block(const Graph& g, int j, std::vector<Term>& terms) {
    Term sum_term;
    sum_term.coeff = static_cast<double>(g.degree(j));
    sum_term.factors[j] = Setting::Sum;
    for (int i : g.neighborhood(j)) sum_term.factors[i] = Setting::A1;
    terms.push_back(std::move(sum_term));

    for (int i : g.neighborhood(j)) {
        Term diff_term;
        diff_term.coeff = 1.0;
        diff_term.factors[j] = Setting::Diff;
        diff_term.factors[i] = Setting::A0;
        for (int k : g.neighborhood(i)) {
            if (k != j) diff_term.factors[k] = Setting::A1;
        }
        terms.push_back(std::move(diff_term));
    }
}

}  // namespace

BellExpression build_multi_substitution(const Graph& g, std::vector<int> subs) {
    const int n = g.num_vertices();
    const std::vector<int> perm = pivot_to_front_permutation(g);
    const Graph relabeled = relabel(g, perm);

    for (int& v : subs) {
        if (v < 0 || v >= n) {
            throw ValidationError("substitution vertex " + std::to_string(v + 1) +
                                  " out of range");
        }
        v = perm[static_cast<std::size_t>(v)];
    }
    std::sort(subs.begin(), subs.end());
    if (std::adjacent_find(subs.begin(), subs.end()) != subs.end()) {
        throw ValidationError("substitution vertices must be distinct");
    }
    if (subs.empty() || subs.front() != 0) {
        throw ValidationError("substitution set must contain the pivot vertex");
    }
    for (std::size_t a = 0; a < subs.size(); ++a) {
        for (std::size_t b = a + 1; b < subs.size(); ++b) {
            const int j = subs[a];
            const int k = subs[b];
            const auto& nj = relabeled.neighborhood(j);
            const auto& nk = relabeled.neighborhood(k);
            if (std::binary_search(nk.begin(), nk.end(), j)) {
                throw ValidationError("substitution vertices " + std::to_string(j + 1) +
                                      " and " + std::to_string(k + 1) + " are adjacent");
            }
            std::vector<int> shared;
            std::set_intersection(nj.begin(), nj.end(), nk.begin(), nk.end(),
                                  std::back_inserter(shared));
            if (!shared.empty()) {
                throw ValidationError("substitution vertices " + std::to_string(j + 1) +
                                      " and " + std::to_string(k + 1) +
                                      " share neighbor " + std::to_string(shared.front() + 1));
            }
        }
    }

    BellExpression e;
    e.n_parties = n;
    std::set<int> covered;
    for (int j : subs) {
        emit_block(relabeled, j, e.terms);
        covered.insert(j);
        for (int i : relabeled.neighborhood(j)) covered.insert(i);
    }
    for (int i = 0; i < n; ++i) {
        if (covered.count(i)) continue;
        Term plain;
        plain.coeff = 1.0;
        plain.factors[i] = Setting::A0;
        for (int j : relabeled.neighborhood(i)) plain.factors[j] = Setting::A1;
        e.terms.push_back(std::move(plain));
    }

    const int k = static_cast<int>(subs.size());
    int degree_sum = 0;
    for (int j : subs) degree_sum += relabeled.degree(j);

    e.meta.kind = (k == 1) ? "graph" : "multi";
    e.meta.graph = relabeled;
    e.meta.substitutions = subs;
    e.meta.permutation = perm;
    e.meta.beta_c = static_cast<double>(n - k + degree_sum);
    e.meta.beta_q = (2 * kSqrt2 - 1) * degree_sum + n - k;
    canonicalize(e);
    return e;
}

BellExpression build_graph_inequality(const Graph& g) {
    return build_multi_substitution(g, {pivot_vertex(g)});
}

BellExpression build_ring_max(int L) {
    if (L < 1) throw ValidationError("build_ring_max requires L >= 1");
    std::vector<int> subs;
    for (int i = 0; i < L; ++i) subs.push_back(3 * i);
    return build_multi_substitution(builtin_graph(BuiltinKind::Ring, 3 * L), subs);
}

BellExpression build_tilted_ghz(int n, double theta) {
    if (n < 2) throw ValidationError("build_tilted_ghz requires n >= 2");
    if (theta <= 0.0 || theta > std::numbers::pi / 4 + 1e-12) {
        throw ValidationError("build_tilted_ghz: theta must lie in (0, pi/4]");
    }
    double cos2t = std::cos(2 * theta);
    if (std::abs(cos2t) < 1e-15) cos2t = 0.0;  // theta = pi/4 in doubles
    const double root = std::sqrt(1.0 + cos2t * cos2t);
    const double single = (n - 1) * cos2t / root;

    BellExpression e;
    e.n_parties = n;

    Term sum_term;
    sum_term.coeff = static_cast<double>(n - 1);
    sum_term.factors[0] = Setting::Sum;
    for (int i = 1; i < n; ++i) sum_term.factors[i] = Setting::A0;
    e.terms.push_back(std::move(sum_term));

    e.terms.push_back(Term{single, {{0, Setting::A0}}});
    e.terms.push_back(Term{-single, {{0, Setting::A1}}});

    for (int i = 1; i < n; ++i) {
        Term pair;
        pair.coeff = 1.0 / root;
        pair.factors[0] = Setting::Diff;
        pair.factors[i] = Setting::A1;
        e.terms.push_back(std::move(pair));
    }

    e.meta.kind = "tilted";
    e.meta.theta = theta;
    e.meta.mu = std::asin(std::sin(2 * theta) / kSqrt2);
    e.meta.substitutions = {0};
    e.meta.beta_c = 2.0 * (n - 1) * (1.0 + cos2t) / root;
    e.meta.beta_q = 2.0 * kSqrt2 * (n - 1);
    canonicalize(e);
    return e;
}

}  // namespace graphbell
