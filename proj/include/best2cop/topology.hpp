#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace best2cop {

using NodeIndex = std::uint32_t;
using IgpCost = std::uint64_t;

inline constexpr IgpCost kMaxIgpCost = IgpCost{1} << 24;

/// A non-negative delay held exactly as an integer number of microseconds
/// (0.001 ms), so decimal millisecond inputs never pick up binary drift.
struct DelayMicros {
  std::uint64_t value = 0;

  static constexpr DelayMicros from_ms(std::uint64_t ms) { return {ms * 1000}; }
  auto operator<=>(const DelayMicros&) const = default;
};

/// Parses a decimal millisecond string ("2.15", "7", "0.001").
/// At most three fractional digits are accepted. Throws std::invalid_argument.
DelayMicros parse_delay_ms(std::string_view text);

/// Shortest decimal rendering in milliseconds ("2.15", "7", "0").
std::string format_delay_ms(DelayMicros delay);

struct RawLink {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::uint32_t interface = 0;  // local link number at src for the (src, dst) pair
  DelayMicros delay;
  IgpCost igp_cost = 1;

  bool operator==(const RawLink&) const = default;
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& what, std::size_t line = 0);

  /// 1-based line of the offending record, 0 when not tied to input text.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Directed two-metric multigraph. Node indices are dense and assigned in
/// insertion order; parallel links between a pair are distinguished by
/// their interface number.
class RawTopology {
 public:
  NodeIndex add_node(std::string label);
  /// Returns the existing index for `label`, adding the node if needed.
  NodeIndex node(std::string_view label);
  void add_link(const RawLink& link);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::span<const RawLink> links() const { return links_; }
  const std::string& label(NodeIndex v) const { return labels_.at(v); }
  std::span<const std::string> labels() const { return labels_; }
  std::optional<NodeIndex> find(std::string_view label) const;
  bool has_link(NodeIndex src, NodeIndex dst, std::uint32_t interface) const;
  /// Smallest interface number strictly above every one used on (src, dst).
  std::uint32_t next_interface(NodeIndex src, NodeIndex dst) const;

  bool operator==(const RawTopology& other) const {
    return labels_ == other.labels_ && links_ == other.links_;
  }

 private:
  static std::uint64_t pair_key(NodeIndex src, NodeIndex dst) {
    return (std::uint64_t{src} << 32) | dst;
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<RawLink> links_;
  std::unordered_map<std::uint64_t, std::unordered_set<std::uint32_t>> interfaces_;
  std::unordered_map<std::uint64_t, std::uint32_t> next_interface_;
};

enum class TopologyFormat { EdgeList };

/// Edge-list grammar, one record per line:
///   <src> <dst> [<interface>] <delay-ms> <igp-cost>
/// `#` starts a comment, `@undirected` (before any record) mirrors every
/// record, and `@node <label>` declares a node ahead of its first use.
/// Throws TopologyError carrying the line number.
RawTopology parse_topology(std::istream& in, TopologyFormat format = TopologyFormat::EdgeList);
RawTopology parse_topology_text(std::string_view text);
RawTopology load_topology(const std::string& path);

/// Writes a header, one `@node` line per node in index order, then one
/// record per directed link. parse_topology reads it back unchanged.
void write_topology(const RawTopology& topology, std::ostream& out);
std::string write_topology_text(const RawTopology& topology);

/// Random strongly connected multigraph: a random Hamiltonian cycle plus
/// `n_links - n_nodes` random chords. Costs are uniform in [1, 2^24] and
/// delays uniform in (0, max_delay] at microsecond resolution. Structure and
/// costs depend only on `seed`, so sweeping `max_delay` with a fixed seed
/// re-weights one fixed graph.
RawTopology generate_random_raw(std::size_t n_nodes, std::size_t n_links, DelayMicros max_delay,
                                std::uint64_t seed);

bool is_strongly_connected(const RawTopology& topology);

}  // namespace best2cop
