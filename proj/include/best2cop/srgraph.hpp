#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "best2cop/topology.hpp"

namespace best2cop {

/// Delay in units of 1/t ms, t being the accuracy grain.
using DelayUnits = std::uint64_t;

/// Inverse of the delay grain: t = 10 means 0.1 ms units.
struct AccuracyGrain {
  std::uint32_t per_ms = 10;

  explicit constexpr AccuracyGrain(std::uint32_t t = 10) : per_ms(t) {
    if (t == 0) throw std::invalid_argument("accuracy grain must be at least 1");
  }
  bool operator==(const AccuracyGrain&) const = default;
};

/// ceil(delay_ms * t), computed on the exact microsecond value. Never
/// understates the delay.
constexpr DelayUnits round_delay(DelayMicros delay, AccuracyGrain grain) {
  const std::uint64_t scaled = delay.value * grain.per_ms;
  return scaled / 1000 + (scaled % 1000 != 0 ? 1 : 0);
}

/// Renders units back to milliseconds ("4.7" for 47 units at t = 10).
std::string format_units_ms(DelayUnits units, AccuracyGrain grain);

struct EcmpRecord {
  IgpCost best_cost = 0;
  DelayUnits max_delay = 0;  // worst quantized delay over all IGP-optimal paths

  bool operator==(const EcmpRecord&) const = default;
};

/// All-pairs IGP distances with the worst ECMP delay per ordered pair.
class EcmpTable {
 public:
  explicit EcmpTable(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t node_count() const { return n_; }
  const std::optional<EcmpRecord>& at(NodeIndex u, NodeIndex v) const { return cells_[u * n_ + v]; }
  std::optional<EcmpRecord>& at(NodeIndex u, NodeIndex v) { return cells_[u * n_ + v]; }

 private:
  std::size_t n_;
  std::vector<std::optional<EcmpRecord>> cells_;
};

/// Single-source IGP shortest paths with ECMP delay aggregation. Per-link
/// delays are quantized before being summed.
struct EcmpTree {
  std::vector<std::optional<IgpCost>> cost;
  std::vector<DelayUnits> max_delay;
};
EcmpTree ecmp_from(const RawTopology& topology, NodeIndex source, AccuracyGrain grain);

EcmpTable apsp_ecmp(const RawTopology& topology, AccuracyGrain grain, unsigned workers = 1);

enum class SegmentKind : std::uint8_t { Node = 0, Adjacency = 1 };

struct SrEdge {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  SegmentKind kind = SegmentKind::Node;
  std::uint32_t interface = 0;  // meaningful for adjacency segments only
  DelayUnits w1 = 0;            // quantized delay
  IgpCost w2 = 0;               // IGP cost

  bool operator==(const SrEdge&) const = default;
};

/// The segment multigraph. Edges are stored grouped by destination and,
/// within a destination, ordered by (src, kind, interface); that order is
/// also the deterministic scan order of the solver.
class SrGraph {
 public:
  SrGraph() = default;

  /// Validates (no self-edges, at most one node segment per ordered pair,
  /// endpoints in range) and sorts the edges.
  static SrGraph from_edges(std::vector<std::string> labels, std::vector<SrEdge> edges, AccuracyGrain grain);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const std::string> labels() const { return labels_; }
  const std::string& label(NodeIndex v) const { return labels_.at(v); }
  std::optional<NodeIndex> find(std::string_view label) const;

  std::span<const SrEdge> edges() const { return edges_; }
  const SrEdge& edge(std::uint32_t index) const { return edges_[index]; }
  std::span<const SrEdge> in_edges(NodeIndex v) const {
    return std::span<const SrEdge>(edges_).subspan(in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]);
  }
  std::uint32_t in_offset(NodeIndex v) const { return in_offsets_[v]; }
  /// E'(u, v), node segment first.
  std::span<const SrEdge> edges_between(NodeIndex u, NodeIndex v) const;
  /// Index of the edge matching kind/interface on (u, v), if present.
  std::optional<std::uint32_t> find_edge(NodeIndex u, NodeIndex v, SegmentKind kind,
                                         std::uint32_t interface = 0) const;

  AccuracyGrain grain() const { return grain_; }
  /// Largest w1 over all edges.
  DelayUnits max_edge_delay() const { return max_edge_delay_; }

 private:
  std::vector<std::string> labels_;
  std::vector<SrEdge> edges_;
  std::vector<std::uint32_t> in_offsets_;
  AccuracyGrain grain_;
  DelayUnits max_edge_delay_ = 0;
};

/// One node segment per reachable ordered pair plus every raw link that no
/// other edge of E'(u, v) weakly dominates. Equal adjacency candidates keep
/// the lowest interface.
SrGraph build_sr_graph(const RawTopology& topology, AccuracyGrain grain, unsigned workers = 1);

/// Double full mesh: each ordered pair gets one node segment and one
/// adjacency segment (interface 0), w1 uniform in [1, spreading] units and
/// w2 uniform in [1, 2^24]. No dominance filtering is applied.
SrGraph generate_random_sr_graph(std::size_t n_nodes, DelayUnits spreading, std::uint64_t seed,
                                 AccuracyGrain grain = AccuracyGrain{10});

/// Text dump, one edge per line: `<u> <v> <N|A:iface> <w1-units> <w2>`.
void write_sr_graph(const SrGraph& graph, std::ostream& out);

}  // namespace best2cop
