#pragma once

#include <vector>

#include "graphbell/expression.hpp"
#include "graphbell/graph.hpp"

namespace graphbell {

/// One weighted Sum block around the pivot vertex, one Diff block per pivot
/// neighbor, plain correlators elsewhere. The pivot is brought to party 1
/// internally; the permutation used is recorded in the meta block together
/// with the analytic bounds.
BellExpression build_graph_inequality(const Graph& g);

/// Sum/Diff blocks around every vertex in `subs` (which must contain the
/// pivot; vertices are given in the labels of `g`). Valid only when no two
/// substitution vertices are adjacent or share a neighbor.
BellExpression build_multi_substitution(const Graph& g, std::vector<int> subs);

/// Ring on 3L vertices with substitutions at parties 1, 4, ..., 3L-2; the
/// member of the ring family with the largest quantum/classical ratio.
BellExpression build_ring_max(int L);

/// Family for the partially entangled GHZ state with angle theta in
/// (0, pi/4]; theta = pi/4 reduces to the star/GHZ expression.
BellExpression build_tilted_ghz(int n, double theta);

}  // namespace graphbell
