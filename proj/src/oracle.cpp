#include "best2cop/oracle.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace best2cop::oracle {

namespace {

struct Walker {
  const SrGraph& graph;
  unsigned max_len;
  DelayUnits delay_cap;
  std::uint64_t budget;
  std::vector<std::vector<std::uint32_t>> out;  // edge indices by source node
  std::vector<std::uint32_t> stack;
  std::uint64_t tried = 0;

  Walker(const SrGraph& g, unsigned len, DelayUnits cap, std::uint64_t b)
      : graph(g), max_len(len), delay_cap(cap), budget(b), out(g.node_count()) {
    const auto edges = g.edges();
    for (std::uint32_t i = 0; i < edges.size(); ++i) out[edges[i].src].push_back(i);
  }

  template <typename Visit>
  void run(NodeIndex u, DelayUnits delay, IgpCost cost, Visit&& visit) {
    if (stack.size() >= max_len) return;
    for (std::uint32_t ei : out[u]) {
      if (++tried > budget) throw BudgetExceeded("oracle enumeration exceeded its extension budget");
      const SrEdge& e = graph.edge(ei);
      if (delay + e.w1 > delay_cap) continue;
      stack.push_back(ei);
      visit(static_cast<const std::vector<std::uint32_t>&>(stack), e.dst, delay + e.w1, cost + e.w2);
      run(e.dst, delay + e.w1, cost + e.w2, visit);
      stack.pop_back();
    }
  }
};

// (delay, cost) -> fewest edges, then brute-force Pareto filter.
using Distances = std::map<std::pair<DelayUnits, IgpCost>, unsigned>;

void record(Distances& d, DelayUnits delay, IgpCost cost, unsigned len) {
  auto [it, inserted] = d.emplace(std::make_pair(delay, cost), len);
  if (!inserted) it->second = std::min(it->second, len);
}

Front pareto(const Distances& d) {
  // Cheapest witness per delay first; the map is ordered by (delay, cost).
  std::vector<FrontPoint> per_delay;
  for (const auto& [key, len] : d)
    if (per_delay.empty() || per_delay.back().delay != key.first) per_delay.push_back({key.first, key.second, len});
  Front out;
  for (const auto& p : per_delay) {
    bool dominated = false;
    for (const auto& q : per_delay) {
      if (q.delay < p.delay && q.cost <= p.cost) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<OraclePath> enumerate_paths(const SrGraph& graph, NodeIndex source, unsigned max_len,
                                        DelayUnits delay_cap, const OracleOptions& options) {
  if (source >= graph.node_count()) throw std::invalid_argument("source is not a node of the SR graph");
  Walker walker(graph, max_len, delay_cap, options.extension_budget);
  std::vector<OraclePath> paths;
  walker.run(source, 0, 0, [&](const std::vector<std::uint32_t>& edges, NodeIndex, DelayUnits d, IgpCost c) {
    paths.push_back({edges, static_cast<unsigned>(edges.size()), d, c});
  });
  return paths;
}

std::vector<std::vector<Front>> oracle_fronts_by_length(const SrGraph& graph, NodeIndex source, unsigned max_len,
                                                        DelayUnits delay_cap, const OracleOptions& options) {
  if (source >= graph.node_count()) throw std::invalid_argument("source is not a node of the SR graph");
  const std::size_t n = graph.node_count();
  Walker walker(graph, max_len, delay_cap, options.extension_budget);
  // All distances per destination with their shortest witness length.
  std::vector<Distances> seen(n);
  record(seen[source], 0, 0, 0);
  unsigned longest = 0;
  walker.run(source, 0, 0, [&](const std::vector<std::uint32_t>& edges, NodeIndex v, DelayUnits d, IgpCost c) {
    const auto len = static_cast<unsigned>(edges.size());
    longest = std::max(longest, len);
    record(seen[v], d, c, len);
  });

  const unsigned rows = max_len == kNoLengthBound ? longest : max_len;
  std::vector<std::vector<Front>> fronts(rows + 1, std::vector<Front>(n));
  for (unsigned i = 0; i <= rows; ++i) {
    for (std::size_t v = 0; v < n; ++v) {
      Distances bounded;
      for (const auto& [key, len] : seen[v])
        if (len <= i) bounded.emplace(key, len);
      fronts[i][v] = pareto(bounded);
    }
  }
  return fronts;
}

std::vector<Front> oracle_fronts(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1,
                                 const OracleOptions& options) {
  const DelayUnits cap = compute_gamma(c0, c1, graph);
  auto by_length = oracle_fronts_by_length(graph, source, c0, cap, options);
  return std::move(by_length.back());
}

}  // namespace best2cop::oracle
