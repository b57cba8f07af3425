#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphbell/graph.hpp"

namespace graphbell {

/// Per-party symbolic measurement slot. Sum means A0 + A1 and Diff means
/// A0 - A1; these appear only at substitution vertices.
enum class Setting : std::uint8_t { A0, A1, Sum, Diff };

std::string to_string(Setting s);
Setting setting_from_string(const std::string& name);

/// One weighted product correlator. Parties absent from `factors` carry the
/// identity. Invariants: at least one factor, nonzero coefficient.
struct Term {
    double coeff = 0.0;
    std::map<int, Setting> factors;  // party (0-indexed) -> setting

    bool operator==(const Term&) const = default;
};

struct ExprMeta {
    std::string kind = "custom";  // graph | multi | tilted | custom
    std::optional<Graph> graph;        // the (relabeled) source graph
    std::vector<int> substitutions;    // vertices carrying Sum/Diff, 0-indexed
    std::optional<double> theta;       // tilted family only
    std::optional<double> mu;          // tilted family only
    std::optional<double> beta_c;      // analytic bounds when known
    std::optional<double> beta_q;
    std::vector<int> permutation;      // perm[original] = position used here

    bool operator==(const ExprMeta&) const = default;
};

struct BellExpression {
    int n_parties = 0;
    std::vector<Term> terms;
    ExprMeta meta;

    bool operator==(const BellExpression&) const = default;
};

/// Merges terms with identical factor maps, drops zero coefficients and
/// sorts terms by factor map; validates party indices and factor presence.
void canonicalize(BellExpression& e);

/// Atomic correlator: every factor is A0 or A1.
using AtomicTerm = std::pair<double, std::map<int, Setting>>;

/// Distributes Sum/Diff into atomic correlators and merges like terms.
std::vector<AtomicTerm> expand_atomic(const BellExpression& e);

BellExpression expression_from_json(const std::string& text);
std::string expression_to_json(const BellExpression& e, int indent = -1);

}  // namespace graphbell
