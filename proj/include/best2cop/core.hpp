#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "best2cop/srgraph.hpp"
#include "best2cop/topology.hpp"

namespace best2cop {

inline constexpr unsigned kUnboundedSegments = std::numeric_limits<unsigned>::max();
inline constexpr IgpCost kInfiniteCost = std::numeric_limits<IgpCost>::max();
inline constexpr std::uint32_t kNoEdge = std::numeric_limits<std::uint32_t>::max();

enum class Objective { MinSegments, MinDelay, MinCost };

struct Query {
  NodeIndex source = 0;
  unsigned c0 = 10;                // segment budget
  DelayUnits c1 = 0;               // delay constraint
  std::optional<IgpCost> c2;       // optional cost constraint, applied at extraction only
  Objective objective = Objective::MinCost;
};

/// Number of delay indices beyond 0 the fronts must hold:
/// min(c1, c0 * max_edge_delay). Saturates instead of overflowing.
DelayUnits compute_gamma(unsigned c0, DelayUnits c1, DelayUnits max_edge_delay);
inline DelayUnits compute_gamma(unsigned c0, DelayUnits c1, const SrGraph& graph) {
  return compute_gamma(c0, c1, graph.max_edge_delay());
}
inline DelayUnits compute_gamma(const Query& q, const SrGraph& graph) { return compute_gamma(q.c0, q.c1, graph); }

/// One (delay, cost) distance of a front, with the fewest segments that
/// reach it.
struct FrontPoint {
  DelayUnits delay = 0;
  IgpCost cost = 0;
  unsigned segments = 0;

  auto operator<=>(const FrontPoint&) const = default;
};

/// Increasing delay, strictly decreasing cost.
using Front = std::vector<FrontPoint>;

struct FrontierEntry {
  std::uint32_t delay = 0;
  IgpCost cost = 0;
};

/// How an entry was reached: the SR edge taken and the delay index of the
/// entry it extended at the previous iteration.
struct Predecessor {
  std::uint32_t edge = kNoEdge;
  std::uint32_t prev_delay = 0;
};

/// Delay-indexed best-cost array with capacity gamma + 1. Serves as the
/// per-destination candidate buffer of one iteration.
class ParetoFront {
 public:
  explicit ParetoFront(DelayUnits gamma);

  DelayUnits gamma() const { return costs_.size() - 1; }
  IgpCost cost(std::size_t delay) const { return costs_[delay]; }
  bool has(std::size_t delay) const { return costs_[delay] != kInfiniteCost; }
  const Predecessor& pred(std::size_t delay) const { return preds_[delay]; }
  /// Overwrites the slot; callers check improvement first.
  void set(std::size_t delay, IgpCost cost, Predecessor pred) {
    costs_[delay] = cost;
    preds_[delay] = pred;
    touched_lo_ = std::min(touched_lo_, delay);
    touched_hi_ = std::max(touched_hi_, delay);
  }
  bool empty() const { return touched_lo_ > touched_hi_; }
  std::size_t lowest_touched() const { return touched_lo_; }
  std::size_t highest_touched() const { return touched_hi_; }
  void clear();
  std::size_t size() const;

 private:
  std::vector<IgpCost> costs_;
  std::vector<Predecessor> preds_;
  std::size_t touched_lo_;
  std::size_t touched_hi_ = 0;
};

/// Extends every entry of `frontier` (sorted by delay) across `edge` into
/// `candidates`. Results beyond gamma are pruned and a result that does not
/// beat both the cumulative cost and the pending candidate at its own delay
/// index is discarded. Returns the number of candidate slots written.
std::size_t extend_front(std::span<const FrontierEntry> frontier, const SrEdge& edge, std::uint32_t edge_index,
                         std::span<const IgpCost> cumulative, ParetoFront& candidates);

/// Increasing-delay sweep over the candidates: a candidate (d, c) survives
/// iff c is strictly below every cumulative and surviving cost at delays
/// <= d. Survivors are written into `cumulative` and appended to the output
/// frontier. Leaves `candidates` empty.
void filter_candidates(ParetoFront& candidates, std::span<IgpCost> cumulative,
                       std::vector<FrontierEntry>& frontier_out, std::vector<Predecessor>& preds_out);

struct Best2copOptions {
  unsigned workers = 1;
  /// When false the run continues to the segment budget even after an
  /// iteration settles nothing (always true in unbounded mode).
  bool stop_when_quiescent = true;
};

class Best2copResult {
 public:
  NodeIndex source() const { return source_; }
  std::size_t node_count() const { return node_count_; }
  unsigned budget() const { return budget_; }
  DelayUnits c1() const { return c1_; }
  DelayUnits gamma() const { return gamma_; }
  /// Index of the last iteration computed (iteration 0 holds the source).
  unsigned iterations_run() const { return static_cast<unsigned>(layers_.size() - 1); }
  /// True when some iteration settled no new distance.
  bool quiescent() const { return quiescent_; }
  bool reachable(NodeIndex v) const { return reachable_[v] != 0; }

  /// Entries newly settled for `v` at `iteration`, sorted by delay.
  std::span<const FrontierEntry> settled(NodeIndex v, unsigned iteration) const;
  std::span<const Predecessor> settled_preds(NodeIndex v, unsigned iteration) const;
  std::size_t frontier_size(NodeIndex v, unsigned iteration) const { return settled(v, iteration).size(); }

  /// Cumulative front F[v][i]: best cost per delay over walks of at most i
  /// segments. Iterations past the last computed one are allowed only for a
  /// quiescent run.
  Front front(NodeIndex v, unsigned iteration) const;
  Front final_front(NodeIndex v) const { return front(v, iterations_run()); }

  /// Whether every walk with at most c0 segments and delay at most c1 is
  /// represented in this result.
  bool covers(unsigned c0, DelayUnits c1) const;

 private:
  friend Best2copResult best2cop(const SrGraph&, NodeIndex, unsigned, DelayUnits, const Best2copOptions&);

  struct Layer {
    std::vector<std::uint32_t> offsets;
    std::vector<FrontierEntry> entries;
    std::vector<Predecessor> preds;
  };
  const Layer& layer(unsigned iteration) const;

  NodeIndex source_ = 0;
  std::size_t node_count_ = 0;
  unsigned budget_ = 0;
  DelayUnits c1_ = 0;
  DelayUnits gamma_ = 0;
  DelayUnits max_edge_delay_ = 0;
  bool quiescent_ = false;
  std::vector<Layer> layers_;
  std::vector<char> reachable_;
};

/// Segment-by-segment Pareto exploration of the SR graph from `source`.
/// Iteration i settles every distance encodable in exactly i segments that
/// improves on all distances with fewer segments. Stops after c0 iterations
/// or on quiescence; pass kUnboundedSegments to run until quiescence.
Best2copResult best2cop(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1,
                        const Best2copOptions& options = {});

struct Segment {
  SegmentKind kind = SegmentKind::Node;
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::uint32_t interface = 0;

  bool operator==(const Segment&) const = default;
};

struct SegmentList {
  std::vector<Segment> segments;
  unsigned m0 = 0;
  DelayUnits m1 = 0;
  IgpCost m2 = 0;
};

enum class Infeasibility { Unreachable, ConstraintsTooStrict };

using Solution = std::variant<SegmentList, Infeasibility>;

/// Picks the best entry for `dest` under the query constraints and rebuilds
/// its segment list. Ties: MinCost by (delay, segments), MinDelay by
/// (cost, segments), MinSegments by (cost, delay). Throws
/// std::invalid_argument when the result does not cover the query.
Solution extract_solution(const Best2copResult& result, const SrGraph& graph, NodeIndex dest, const Query& q);

/// Human-readable list: "N:r,A:n:1:o" ("-" when empty).
std::string format_segment_list(const SegmentList& list, const SrGraph& graph);

class StaleSegmentList : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicalPath {
  std::vector<std::size_t> links;  // indices into RawTopology::links()
  DelayUnits delay = 0;            // sum of quantized link delays
  IgpCost cost = 0;
};

/// Every physical path a packet carrying `list` may follow: node segments
/// expand to their full ECMP path set, adjacency segments to their link.
/// Throws StaleSegmentList when a segment no longer exists in `graph` or
/// `raw`, and std::length_error past `max_paths`.
std::vector<PhysicalPath> decode_segment_list(const SegmentList& list, const RawTopology& raw, const SrGraph& graph,
                                              std::size_t max_paths = 1'000'000);

enum class CoverageClass { Perfect, Imperfect, HiddenBySegmax, Infeasible };
std::string_view to_string(CoverageClass cls);

struct CoverageRecord {
  NodeIndex dest = 0;
  std::optional<unsigned> iters_needed;  // iterations until the front stops changing
  CoverageClass cls = CoverageClass::Infeasible;
};

/// Runs the exploration without a segment budget and compares, for each
/// destination other than the source, the least cost reachable within
/// `segmax` segments against the unbounded least cost.
std::vector<CoverageRecord> coverage_analysis(const SrGraph& graph, NodeIndex source, DelayUnits c1,
                                              unsigned segmax, unsigned workers = 1);

/// Same classification from an existing unbounded run.
std::vector<CoverageRecord> classify_coverage(const Best2copResult& unbounded, unsigned segmax);

}  // namespace best2cop
