#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graphbell/builders.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/expression.hpp"

using namespace graphbell;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

const Term* find_term(const BellExpression& e, const std::map<int, Setting>& factors) {
    for (const Term& t : e.terms) {
        if (t.factors == factors) return &t;
    }
    return nullptr;
}

int count_setting(const BellExpression& e, Setting s) {
    int count = 0;
    for (const Term& t : e.terms) {
        for (const auto& [party, setting] : t.factors) {
            (void)party;
            if (setting == s) ++count;
        }
    }
    return count;
}

/// The local Hadamards taking the star graph state to GHZ swap the roles of
/// A0 and A1 at every party but the pivot.
BellExpression swap_settings_off_pivot(BellExpression e) {
    for (Term& t : e.terms) {
        std::map<int, Setting> mapped;
        for (auto [party, setting] : t.factors) {
            if (party != 0) {
                if (setting == Setting::A0) setting = Setting::A1;
                else if (setting == Setting::A1) setting = Setting::A0;
            }
            mapped[party] = setting;
        }
        t.factors = std::move(mapped);
    }
    canonicalize(e);
    return e;
}

}  // namespace

TEST_CASE("complete-2 reduces to the two-setting two-party expression") {
    const BellExpression e = build_graph_inequality(builtin_graph(BuiltinKind::Complete, 2));
    REQUIRE(e.terms.size() == 2);
    const Term* sum = find_term(e, {{0, Setting::Sum}, {1, Setting::A1}});
    const Term* diff = find_term(e, {{0, Setting::Diff}, {1, Setting::A0}});
    REQUIRE(sum != nullptr);
    REQUIRE(diff != nullptr);
    CHECK(sum->coeff == 1.0);
    CHECK(diff->coeff == 1.0);
    CHECK(*e.meta.beta_c == 2.0);
    CHECK(*e.meta.beta_q == doctest::Approx(2 * kSqrt2).epsilon(1e-15));

    const auto atoms = expand_atomic(e);
    REQUIRE(atoms.size() == 4);
    for (const auto& [coeff, factors] : atoms) {
        CHECK(std::abs(coeff) == 1.0);
        CHECK(factors.size() == 2);
    }
}

TEST_CASE("star family structure") {
    for (int n : {3, 5, 8}) {
        const BellExpression e = build_graph_inequality(builtin_graph(BuiltinKind::Star, n));
        REQUIRE(static_cast<int>(e.terms.size()) == n);

        std::map<int, Setting> sum_factors{{0, Setting::Sum}};
        for (int i = 1; i < n; ++i) sum_factors[i] = Setting::A1;
        const Term* sum = find_term(e, sum_factors);
        REQUIRE(sum != nullptr);
        CHECK(sum->coeff == static_cast<double>(n - 1));

        for (int i = 1; i < n; ++i) {
            const Term* diff = find_term(e, {{0, Setting::Diff}, {i, Setting::A0}});
            REQUIRE(diff != nullptr);
            CHECK(diff->coeff == 1.0);
        }

        CHECK(*e.meta.beta_c == 2.0 * (n - 1));
        CHECK(*e.meta.beta_q == doctest::Approx(2 * kSqrt2 * (n - 1)).epsilon(1e-15));
        CHECK(expand_atomic(e).size() == static_cast<std::size_t>(2 * n));
    }
}

TEST_CASE("ring family has only three-body nearest-neighbour terms") {
    const int n = 7;
    const BellExpression e = build_graph_inequality(builtin_graph(BuiltinKind::Ring, n));
    REQUIRE(static_cast<int>(e.terms.size()) == n);

    const Term* sum =
        find_term(e, {{0, Setting::Sum}, {1, Setting::A1}, {n - 1, Setting::A1}});
    REQUIRE(sum != nullptr);
    CHECK(sum->coeff == 2.0);

    CHECK(find_term(e, {{0, Setting::Diff}, {1, Setting::A0}, {2, Setting::A1}}) != nullptr);
    CHECK(find_term(e, {{0, Setting::Diff}, {n - 1, Setting::A0}, {n - 2, Setting::A1}}) !=
          nullptr);
    for (int i = 2; i < n - 1; ++i) {
        const Term* plain = find_term(
            e, {{i - 1, Setting::A1}, {i, Setting::A0}, {i + 1, Setting::A1}});
        REQUIRE(plain != nullptr);
        CHECK(plain->coeff == 1.0);
    }
    for (const Term& t : e.terms) CHECK(t.factors.size() == 3);

    CHECK(*e.meta.beta_c == static_cast<double>(n + 1));
    CHECK(*e.meta.beta_q == doctest::Approx(n + 4 * kSqrt2 - 3).epsilon(1e-15));
    CHECK(expand_atomic(e).size() == static_cast<std::size_t>(n + 3));
}

TEST_CASE("line pivot is relabeled to party 1") {
    const BellExpression e = build_graph_inequality(builtin_graph(BuiltinKind::Line, 4));
    CHECK(e.meta.permutation == std::vector<int>{1, 0, 2, 3});
    REQUIRE(e.meta.graph.has_value());
    CHECK(e.meta.graph->degree(0) == 2);
    CHECK(*e.meta.beta_c == 5.0);  // N + n_max - 1
    CHECK(expand_atomic(e).size() == 7);
}

TEST_CASE("multi-substitution validity") {
    const Graph ring6 = builtin_graph(BuiltinKind::Ring, 6);

    const BellExpression two = build_multi_substitution(ring6, {0, 3});
    CHECK(two.meta.kind == "multi");
    CHECK(*two.meta.beta_c == 8.0);  // N + 2
    CHECK(*two.meta.beta_q == doctest::Approx(6 - 6 + 8 * kSqrt2).epsilon(1e-14));
    CHECK(count_setting(two, Setting::Sum) == 2);
    CHECK(count_setting(two, Setting::Diff) == 4);

    // Single substitution at the pivot reproduces the base construction.
    CHECK(build_multi_substitution(ring6, {0}) == build_graph_inequality(ring6));

    CHECK_THROWS_WITH_AS((void)build_multi_substitution(ring6, {0, 2}),
                         "substitution vertices 1 and 3 share neighbor 2",
                         ValidationError);
    CHECK_THROWS_AS((void)build_multi_substitution(ring6, {0, 1}), ValidationError);
    CHECK_THROWS_AS((void)build_multi_substitution(ring6, {3}), ValidationError);
    CHECK_THROWS_AS((void)build_multi_substitution(ring6, {0, 0}), ValidationError);
    CHECK_THROWS_AS((void)build_multi_substitution(ring6, {0, 9}), ValidationError);
}

TEST_CASE("two-substitution ring expression, term by term") {
    // N = 7, substitutions at vertices 1 and 4 (1-indexed): two weighted Sum
    // blocks, four Diff correlators, one plain nearest-neighbour correlator.
    const int n = 7;
    const BellExpression e =
        build_multi_substitution(builtin_graph(BuiltinKind::Ring, n), {0, 3});
    REQUIRE(e.terms.size() == 7);

    struct Expected {
        double coeff;
        std::map<int, Setting> factors;
    };
    const std::vector<Expected> expected = {
        {2.0, {{6, Setting::A1}, {0, Setting::Sum}, {1, Setting::A1}}},
        {1.0, {{0, Setting::Diff}, {1, Setting::A0}, {2, Setting::A1}}},
        {1.0, {{5, Setting::A1}, {6, Setting::A0}, {0, Setting::Diff}}},
        {2.0, {{2, Setting::A1}, {3, Setting::Sum}, {4, Setting::A1}}},
        {1.0, {{3, Setting::Diff}, {4, Setting::A0}, {5, Setting::A1}}},
        {1.0, {{1, Setting::A1}, {2, Setting::A0}, {3, Setting::Diff}}},
        {1.0, {{4, Setting::A1}, {5, Setting::A0}, {6, Setting::A1}}},
    };
    for (const Expected& want : expected) {
        const Term* term = find_term(e, want.factors);
        REQUIRE(term != nullptr);
        CHECK(term->coeff == want.coeff);
    }
}

TEST_CASE("ring maximal-ratio family") {
    const BellExpression l1 = build_ring_max(1);
    CHECK(l1.n_parties == 3);
    CHECK(*l1.meta.beta_c == 4.0);
    CHECK(*l1.meta.beta_q == doctest::Approx(4 * kSqrt2).epsilon(1e-15));
    CHECK(*l1.meta.beta_q / *l1.meta.beta_c == doctest::Approx(kSqrt2).epsilon(1e-15));

    const BellExpression l2 = build_ring_max(2);
    CHECK(l2.n_parties == 6);
    CHECK(*l2.meta.beta_c == 8.0);
    CHECK(*l2.meta.beta_q == doctest::Approx(6 + (4 * kSqrt2 - 3) * 2).epsilon(1e-14));
    CHECK(l2 == build_multi_substitution(builtin_graph(BuiltinKind::Ring, 6), {0, 3}));

    // The ratio grows with each added substitution and caps at sqrt(2).
    const int n = 9;
    double previous = 0.0;
    for (int k = 1; k <= 3; ++k) {
        std::vector<int> subs;
        for (int i = 0; i < k; ++i) subs.push_back(3 * i);
        const BellExpression e =
            build_multi_substitution(builtin_graph(BuiltinKind::Ring, n), subs);
        CHECK(*e.meta.beta_c == static_cast<double>(n + k));
        CHECK(*e.meta.beta_q == doctest::Approx(n + (4 * kSqrt2 - 3) * k).epsilon(1e-14));
        const double ratio = *e.meta.beta_q / *e.meta.beta_c;
        CHECK(ratio > previous);
        CHECK(ratio < kSqrt2 + 1e-12);
        previous = ratio;
    }
    const BellExpression l3 = build_ring_max(3);
    CHECK(std::abs(*l3.meta.beta_q / *l3.meta.beta_c - kSqrt2) < 1e-10);

    CHECK_THROWS_AS(build_ring_max(0), ValidationError);
}

TEST_CASE("tilted family construction") {
    const int n = 4;
    const double theta = kPi / 6;
    const BellExpression e = build_tilted_ghz(n, theta);
    const double cos2t = std::cos(2 * theta);
    const double root = std::sqrt(1 + cos2t * cos2t);

    std::map<int, Setting> sum_factors{{0, Setting::Sum}};
    for (int i = 1; i < n; ++i) sum_factors[i] = Setting::A0;
    const Term* sum = find_term(e, sum_factors);
    REQUIRE(sum != nullptr);
    CHECK(sum->coeff == static_cast<double>(n - 1));

    const Term* single0 = find_term(e, {{0, Setting::A0}});
    const Term* single1 = find_term(e, {{0, Setting::A1}});
    REQUIRE(single0 != nullptr);
    REQUIRE(single1 != nullptr);
    CHECK(single0->coeff == doctest::Approx((n - 1) * cos2t / root).epsilon(1e-15));
    CHECK(single1->coeff == doctest::Approx(-(n - 1) * cos2t / root).epsilon(1e-15));

    for (int i = 1; i < n; ++i) {
        const Term* pair = find_term(e, {{0, Setting::Diff}, {i, Setting::A1}});
        REQUIRE(pair != nullptr);
        CHECK(pair->coeff == doctest::Approx(1.0 / root).epsilon(1e-15));
    }

    CHECK(*e.meta.beta_c ==
          doctest::Approx(2.0 * (n - 1) * (1 + cos2t) / root).epsilon(1e-15));
    CHECK(*e.meta.beta_q == doctest::Approx(2 * kSqrt2 * (n - 1)).epsilon(1e-15));
    CHECK(*e.meta.mu == doctest::Approx(std::asin(std::sqrt(3.0 / 8.0))).epsilon(1e-14));
    CHECK(expand_atomic(e).size() == static_cast<std::size_t>(2 * n + 2));

    CHECK_THROWS_AS(build_tilted_ghz(3, 0.0), ValidationError);
    CHECK_THROWS_AS(build_tilted_ghz(3, 1.0), ValidationError);
    CHECK_THROWS_AS(build_tilted_ghz(1, 0.3), ValidationError);
}

TEST_CASE("tilted family at pi/4 matches the star expression across the frame map") {
    for (int n : {2, 3, 5}) {
        const BellExpression tilted = build_tilted_ghz(n, kPi / 4);
        // Single-body terms vanish at pi/4.
        CHECK(find_term(tilted, {{0, Setting::A0}}) == nullptr);
        CHECK(find_term(tilted, {{0, Setting::A1}}) == nullptr);
        REQUIRE(static_cast<int>(tilted.terms.size()) == n);

        const BellExpression star =
            build_graph_inequality(builtin_graph(BuiltinKind::Star, n));
        const BellExpression mapped = swap_settings_off_pivot(star);
        REQUIRE(mapped.terms.size() == tilted.terms.size());
        for (std::size_t i = 0; i < mapped.terms.size(); ++i) {
            CHECK(mapped.terms[i].factors == tilted.terms[i].factors);
            CHECK(mapped.terms[i].coeff == tilted.terms[i].coeff);
        }
    }

    CHECK(*build_tilted_ghz(5, kPi / 4).meta.beta_c == doctest::Approx(8.0).epsilon(1e-14));
    // Small-theta limit of the classical bound approaches the quantum value.
    CHECK(*build_tilted_ghz(5, 1e-8).meta.beta_c ==
          doctest::Approx(2 * kSqrt2 * 4).epsilon(1e-7));
}

TEST_CASE("atomic correlator count is linear across builtin families") {
    for (int n = 2; n <= 10; ++n) {
        for (BuiltinKind kind : {BuiltinKind::Star, BuiltinKind::Ring, BuiltinKind::Line,
                                 BuiltinKind::Complete}) {
            if (kind == BuiltinKind::Ring && n < 3) continue;
            const Graph g = builtin_graph(kind, n);
            const BellExpression e = build_graph_inequality(g);
            const int n_max = g.max_degree();
            CHECK(expand_atomic(e).size() == static_cast<std::size_t>(n + n_max + 1));
        }
    }
}

TEST_CASE("expression canonicalization") {
    BellExpression e;
    e.n_parties = 2;
    e.terms.push_back(Term{1.0, {{0, Setting::A0}}});
    e.terms.push_back(Term{2.0, {{0, Setting::A0}}});
    e.terms.push_back(Term{1.0, {{1, Setting::A1}}});
    e.terms.push_back(Term{-1.0, {{1, Setting::A1}}});
    canonicalize(e);
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].coeff == 3.0);

    BellExpression bad;
    bad.n_parties = 2;
    bad.terms.push_back(Term{1.0, {}});
    CHECK_THROWS_AS(canonicalize(bad), ValidationError);

    BellExpression out_of_range;
    out_of_range.n_parties = 2;
    out_of_range.terms.push_back(Term{1.0, {{5, Setting::A0}}});
    CHECK_THROWS_AS(canonicalize(out_of_range), ValidationError);
}

TEST_CASE("expression json round-trip") {
    const std::vector<BellExpression> samples = {
        build_graph_inequality(builtin_graph(BuiltinKind::Complete, 2)),
        build_graph_inequality(builtin_graph(BuiltinKind::Ring, 5)),
        build_graph_inequality(builtin_graph(BuiltinKind::Line, 4)),
        build_multi_substitution(builtin_graph(BuiltinKind::Ring, 7), {0, 3}),
        build_tilted_ghz(3, kPi / 6),
    };
    for (const BellExpression& e : samples) {
        const std::string text = expression_to_json(e);
        const BellExpression back = expression_from_json(text);
        CHECK(back == e);
        CHECK(expression_to_json(back) == text);  // stable emission
    }

    CHECK_THROWS_AS(expression_from_json("{"), ValidationError);
    CHECK_THROWS_AS(expression_from_json(R"({"n":2})"), ValidationError);
    CHECK_THROWS_AS(
        expression_from_json(R"({"n":2,"terms":[{"coeff":1,"factors":{"1":"A7"}}]})"),
        ValidationError);
    CHECK_THROWS_AS(
        expression_from_json(R"({"n":2,"terms":[{"coeff":1,"factors":{"x":"A0"}}]})"),
        ValidationError);
}
