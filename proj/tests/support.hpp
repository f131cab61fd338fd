#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "best2cop/core.hpp"
#include "best2cop/srgraph.hpp"

namespace best2cop::test_support {

struct RandomSrSpec {
  std::size_t nodes = 6;
  unsigned max_parallel = 2;     // L: edges per ordered pair
  DelayUnits min_delay = 1;
  DelayUnits max_delay = 30;
  IgpCost max_cost = 10;
  double density = 0.5;          // probability that an ordered pair has edges
};

/// Random multigraph in SR-graph form: each present pair gets one node
/// segment and up to L - 1 adjacencies. No domination filtering, so
/// dominated and tied parallel edges show up too.
inline SrGraph random_sr_graph(const RandomSrSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<DelayUnits> delay(spec.min_delay, spec.max_delay);
  std::uniform_int_distribution<IgpCost> cost(1, spec.max_cost);
  std::uniform_int_distribution<unsigned> parallel(1, spec.max_parallel);
  std::bernoulli_distribution present(spec.density);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < spec.nodes; ++i) labels.push_back("v" + std::to_string(i));
  std::vector<SrEdge> edges;
  for (NodeIndex u = 0; u < spec.nodes; ++u) {
    for (NodeIndex v = 0; v < spec.nodes; ++v) {
      if (u == v || !present(rng)) continue;
      const unsigned k = parallel(rng);
      edges.push_back({u, v, SegmentKind::Node, 0, delay(rng), cost(rng)});
      for (unsigned j = 1; j < k; ++j) edges.push_back({u, v, SegmentKind::Adjacency, j, delay(rng), cost(rng)});
    }
  }
  return SrGraph::from_edges(std::move(labels), std::move(edges), AccuracyGrain(10));
}

/// Best cost at every delay index 0..gamma of a front (kInfiniteCost if none).
inline std::vector<IgpCost> step_costs(const Front& front, DelayUnits gamma) {
  std::vector<IgpCost> out(gamma + 1, kInfiniteCost);
  for (const auto& p : front)
    if (p.delay <= gamma) out[p.delay] = std::min(out[p.delay], p.cost);
  for (std::size_t d = 1; d < out.size(); ++d) out[d] = std::min(out[d], out[d - 1]);
  return out;
}

}  // namespace best2cop::test_support
