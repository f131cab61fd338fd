#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "best2cop/core.hpp"
#include "best2cop/srgraph.hpp"

namespace best2cop::oracle {

/// A walk in the SR graph. Walks may revisit nodes, like segment lists.
struct OraclePath {
  std::vector<std::uint32_t> edges;  // indices into SrGraph::edges()
  unsigned m0 = 0;
  DelayUnits m1 = 0;
  IgpCost m2 = 0;
};

struct OracleOptions {
  std::uint64_t extension_budget = 50'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kNoLengthBound = kUnboundedSegments;

/// Depth-first enumeration of every non-empty walk from `source` with at
/// most `max_len` edges and running delay at most `delay_cap`. Throws
/// BudgetExceeded once more than `extension_budget` edges were tried.
std::vector<OraclePath> enumerate_paths(const SrGraph& graph, NodeIndex source, unsigned max_len,
                                        DelayUnits delay_cap, const OracleOptions& options = {});

/// Per destination, the Pareto front of all walks with at most c0 edges and
/// delay at most gamma = min(c1, c0 * max_edge_delay), each point carrying the
/// fewest edges reaching exactly that distance. The source row is {(0, 0, 0)}.
std::vector<Front> oracle_fronts(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1,
                                 const OracleOptions& options = {});

/// Fronts for every length bound 0..max_len from a single enumeration:
/// result[i][v] is the front of walks with at most i edges.
std::vector<std::vector<Front>> oracle_fronts_by_length(const SrGraph& graph, NodeIndex source, unsigned max_len,
                                                        DelayUnits delay_cap, const OracleOptions& options = {});

}  // namespace best2cop::oracle
