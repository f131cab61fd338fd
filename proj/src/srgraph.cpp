#include "best2cop/srgraph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace best2cop {

std::string format_units_ms(DelayUnits units, AccuracyGrain grain) {
  const std::uint64_t whole = units / grain.per_ms;
  std::uint64_t rem = units % grain.per_ms;
  std::string out = std::to_string(whole);
  if (rem == 0) return out;
  // Exact when t divides a power of ten; otherwise six digits, trimmed.
  std::string digits;
  for (int i = 0; i < 6 && rem != 0; ++i) {
    rem *= 10;
    digits += static_cast<char>('0' + rem / grain.per_ms);
    rem %= grain.per_ms;
  }
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  return digits.empty() ? out : out + '.' + digits;
}

EcmpTree ecmp_from(const RawTopology& topology, NodeIndex source, AccuracyGrain grain) {
  const std::size_t n = topology.node_count();
  std::vector<std::vector<std::uint32_t>> out(n);
  const auto links = topology.links();
  for (std::uint32_t i = 0; i < links.size(); ++i) out[links[i].src].push_back(i);

  EcmpTree tree{std::vector<std::optional<IgpCost>>(n), std::vector<DelayUnits>(n, 0)};
  using Item = std::pair<IgpCost, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<char> settled(n, 0);
  std::vector<NodeIndex> order;
  order.reserve(n);
  tree.cost[source] = 0;
  queue.emplace(0, source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    order.push_back(u);
    for (auto li : out[u]) {
      const auto& link = links[li];
      IgpCost nd = d + link.igp_cost;
      auto& cur = tree.cost[link.dst];
      if (!cur || nd < *cur) {
        cur = nd;
        queue.emplace(nd, link.dst);
      }
    }
  }

  // IGP costs are >= 1, so settle order is a topological order of the ECMP DAG.
  for (NodeIndex u : order) {
    for (auto li : out[u]) {
      const auto& link = links[li];
      if (*tree.cost[u] + link.igp_cost != *tree.cost[link.dst]) continue;
      tree.max_delay[link.dst] =
          std::max(tree.max_delay[link.dst], tree.max_delay[u] + round_delay(link.delay, grain));
    }
  }
  return tree;
}

EcmpTable apsp_ecmp(const RawTopology& topology, AccuracyGrain grain, unsigned workers) {
  const std::size_t n = topology.node_count();
  EcmpTable table(n);
  auto run = [&](unsigned worker, unsigned stride) {
    for (std::size_t s = worker; s < n; s += stride) {
      auto source = static_cast<NodeIndex>(s);
      EcmpTree tree = ecmp_from(topology, source, grain);
      for (NodeIndex v = 0; v < n; ++v) {
        if (v == source || !tree.cost[v]) continue;
        table.at(source, v) = EcmpRecord{*tree.cost[v], tree.max_delay[v]};
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }
  return table;
}

SrGraph SrGraph::from_edges(std::vector<std::string> labels, std::vector<SrEdge> edges, AccuracyGrain grain) {
  const std::size_t n = labels.size();
  if (edges.size() >= std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("too many SR edges");
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n) throw std::invalid_argument("SR edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("SR graph cannot contain self-edges");
  }
  std::sort(edges.begin(), edges.end(), [](const SrEdge& a, const SrEdge& b) {
    return std::tie(a.dst, a.src, a.kind, a.interface) < std::tie(b.dst, b.src, b.kind, b.interface);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const auto& a = edges[i - 1];
    const auto& b = edges[i];
    if (a.src != b.src || a.dst != b.dst || a.kind != b.kind) continue;
    if (a.kind == SegmentKind::Node)
      throw std::invalid_argument("more than one node segment for an ordered pair");
    if (a.interface == b.interface) throw std::invalid_argument("duplicate adjacency segment");
  }

  SrGraph g;
  g.labels_ = std::move(labels);
  g.edges_ = std::move(edges);
  g.grain_ = grain;
  g.in_offsets_.assign(n + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.in_offsets_[e.dst + 1];
    g.max_edge_delay_ = std::max(g.max_edge_delay_, e.w1);
  }
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  return g;
}

std::optional<NodeIndex> SrGraph::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - labels_.begin());
}

std::span<const SrEdge> SrGraph::edges_between(NodeIndex u, NodeIndex v) const {
  auto in = in_edges(v);
  auto lo = std::lower_bound(in.begin(), in.end(), u, [](const SrEdge& e, NodeIndex s) { return e.src < s; });
  auto hi = std::upper_bound(lo, in.end(), u, [](NodeIndex s, const SrEdge& e) { return s < e.src; });
  return in.subspan(static_cast<std::size_t>(lo - in.begin()), static_cast<std::size_t>(hi - lo));
}

std::optional<std::uint32_t> SrGraph::find_edge(NodeIndex u, NodeIndex v, SegmentKind kind,
                                                std::uint32_t interface) const {
  if (u >= node_count() || v >= node_count()) return std::nullopt;
  for (const auto& e : edges_between(u, v)) {
    if (e.kind == kind && (kind == SegmentKind::Node || e.interface == interface))
      return static_cast<std::uint32_t>(&e - edges_.data());
  }
  return std::nullopt;
}

SrGraph build_sr_graph(const RawTopology& topology, AccuracyGrain grain, unsigned workers) {
  const std::size_t n = topology.node_count();
  EcmpTable table = apsp_ecmp(topology, grain, workers);

  std::vector<std::vector<const RawLink*>> out(n);
  for (const auto& link : topology.links()) out[link.src].push_back(&link);

  std::vector<SrEdge> edges;
  struct Candidate {
    DelayUnits w1;
    IgpCost w2;
    std::uint32_t interface;
  };
  std::vector<std::vector<Candidate>> by_dst(n);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (const auto& rec = table.at(u, v)) edges.push_back({u, v, SegmentKind::Node, 0, rec->max_delay, rec->best_cost});
    }
    for (const RawLink* link : out[u])
      by_dst[link->dst].push_back({round_delay(link->delay, grain), link->igp_cost, link->interface});
    for (NodeIndex v = 0; v < n; ++v) {
      auto& cands = by_dst[v];
      if (cands.empty()) continue;
      const EcmpRecord& node_seg = *table.at(u, v);
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.w1, a.w2, a.interface) < std::tie(b.w1, b.w2, b.interface);
      });
      IgpCost best_w2 = std::numeric_limits<IgpCost>::max();
      for (const auto& c : cands) {
        const bool by_node = node_seg.max_delay <= c.w1 && node_seg.best_cost <= c.w2;
        if (!by_node && c.w2 < best_w2) edges.push_back({u, v, SegmentKind::Adjacency, c.interface, c.w1, c.w2});
        best_w2 = std::min(best_w2, c.w2);
      }
      cands.clear();
    }
  }
  std::vector<std::string> labels(topology.labels().begin(), topology.labels().end());
  return SrGraph::from_edges(std::move(labels), std::move(edges), grain);
}

SrGraph generate_random_sr_graph(std::size_t n_nodes, DelayUnits spreading, std::uint64_t seed,
                                 AccuracyGrain grain) {
  if (n_nodes < 2) throw std::invalid_argument("a random SR graph needs at least two nodes");
  if (spreading < 1) throw std::invalid_argument("spreading must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<DelayUnits> delay(1, spreading);
  std::uniform_int_distribution<IgpCost> cost(1, kMaxIgpCost);
  std::vector<SrEdge> edges;
  edges.reserve(2 * n_nodes * (n_nodes - 1));
  for (NodeIndex u = 0; u < n_nodes; ++u) {
    for (NodeIndex v = 0; v < n_nodes; ++v) {
      if (u == v) continue;
      DelayUnits w1 = delay(rng);
      IgpCost w2 = cost(rng);
      edges.push_back({u, v, SegmentKind::Node, 0, w1, w2});
      w1 = delay(rng);
      w2 = cost(rng);
      edges.push_back({u, v, SegmentKind::Adjacency, 0, w1, w2});
    }
  }
  std::vector<std::string> labels;
  labels.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) labels.push_back("v" + std::to_string(i));
  return SrGraph::from_edges(std::move(labels), std::move(edges), grain);
}

void write_sr_graph(const SrGraph& graph, std::ostream& out) {
  std::vector<const SrEdge*> order;
  order.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const SrEdge* a, const SrEdge* b) {
    return std::tie(a->src, a->dst, a->kind, a->interface) < std::tie(b->src, b->dst, b->kind, b->interface);
  });
  for (const SrEdge* e : order) {
    out << graph.label(e->src) << ' ' << graph.label(e->dst) << ' ';
    if (e->kind == SegmentKind::Node)
      out << 'N';
    else
      out << "A:" << e->interface;
    out << ' ' << e->w1 << ' ' << e->w2 << '\n';
  }
}

}  // namespace best2cop
