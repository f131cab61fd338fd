#include "best2cop/core.hpp"

#include <functional>
#include <thread>
#include <tuple>

namespace best2cop {

DelayUnits compute_gamma(unsigned c0, DelayUnits c1, DelayUnits max_edge_delay) {
  if (c0 == kUnboundedSegments) return c1;
  if (max_edge_delay != 0 && c0 > std::numeric_limits<DelayUnits>::max() / max_edge_delay) return c1;
  return std::min(c1, DelayUnits{c0} * max_edge_delay);
}

ParetoFront::ParetoFront(DelayUnits gamma)
    : costs_(gamma + 1, kInfiniteCost), preds_(gamma + 1), touched_lo_(gamma + 1) {}

void ParetoFront::clear() {
  if (!empty()) std::fill(costs_.begin() + touched_lo_, costs_.begin() + touched_hi_ + 1, kInfiniteCost);
  touched_lo_ = costs_.size();
  touched_hi_ = 0;
}

std::size_t ParetoFront::size() const {
  if (empty()) return 0;
  return static_cast<std::size_t>(std::count_if(costs_.begin() + touched_lo_, costs_.begin() + touched_hi_ + 1,
                                                [](IgpCost c) { return c != kInfiniteCost; }));
}

std::size_t extend_front(std::span<const FrontierEntry> frontier, const SrEdge& edge, std::uint32_t edge_index,
                         std::span<const IgpCost> cumulative, ParetoFront& candidates) {
  const DelayUnits gamma = candidates.gamma();
  if (edge.w1 > gamma) return 0;
  const DelayUnits room = gamma - edge.w1;
  std::size_t written = 0;
  for (const auto& entry : frontier) {
    if (entry.delay > room) break;
    const std::size_t d = entry.delay + edge.w1;
    const IgpCost c = entry.cost + edge.w2;
    if (c < cumulative[d] && c < candidates.cost(d)) {
      candidates.set(d, c, Predecessor{edge_index, entry.delay});
      ++written;
    }
  }
  return written;
}

void filter_candidates(ParetoFront& candidates, std::span<IgpCost> cumulative,
                       std::vector<FrontierEntry>& frontier_out, std::vector<Predecessor>& preds_out) {
  if (candidates.empty()) return;
  const std::size_t lo = candidates.lowest_touched();
  const std::size_t hi = candidates.highest_touched();
  IgpCost running = kInfiniteCost;
  for (std::size_t d = 0; d < lo; ++d) running = std::min(running, cumulative[d]);
  for (std::size_t d = lo; d <= hi; ++d) {
    // A pending candidate never exceeds the cumulative cost at its index.
    const IgpCost c = std::min(candidates.cost(d), cumulative[d]);
    if (c < running) {
      running = c;
      if (candidates.cost(d) < cumulative[d]) {
        cumulative[d] = c;
        frontier_out.push_back({static_cast<std::uint32_t>(d), c});
        preds_out.push_back(candidates.pred(d));
      }
    }
  }
  candidates.clear();
}

const Best2copResult::Layer& Best2copResult::layer(unsigned iteration) const {
  if (iteration >= layers_.size()) throw std::out_of_range("iteration beyond the computed range");
  return layers_[iteration];
}

std::span<const FrontierEntry> Best2copResult::settled(NodeIndex v, unsigned iteration) const {
  if (iteration >= layers_.size() && quiescent_) return {};
  const Layer& l = layer(iteration);
  return std::span<const FrontierEntry>(l.entries).subspan(l.offsets[v], l.offsets[v + 1] - l.offsets[v]);
}

std::span<const Predecessor> Best2copResult::settled_preds(NodeIndex v, unsigned iteration) const {
  if (iteration >= layers_.size() && quiescent_) return {};
  const Layer& l = layer(iteration);
  return std::span<const Predecessor>(l.preds).subspan(l.offsets[v], l.offsets[v + 1] - l.offsets[v]);
}

Front Best2copResult::front(NodeIndex v, unsigned iteration) const {
  if (iteration >= layers_.size()) {
    if (!quiescent_) throw std::out_of_range("iteration beyond the computed range");
    iteration = iterations_run();
  }
  // Entries settled later are strictly better at their delay than anything
  // earlier, so the per-delay minimum keeps the fewest-segment witness.
  std::vector<FrontPoint> points;
  for (unsigned i = 0; i <= iteration; ++i)
    for (const auto& e : settled(v, i)) points.push_back({e.delay, e.cost, i});
  std::sort(points.begin(), points.end(), [](const FrontPoint& a, const FrontPoint& b) {
    return std::tie(a.delay, a.cost, a.segments) < std::tie(b.delay, b.cost, b.segments);
  });
  Front out;
  for (const auto& p : points) {
    if (out.empty() || p.cost < out.back().cost) {
      if (!out.empty() && out.back().delay == p.delay) continue;
      out.push_back(p);
    }
  }
  return out;
}

bool Best2copResult::covers(unsigned c0, DelayUnits c1) const {
  const bool clipped_by_budget = budget_ != kUnboundedSegments && gamma_ < c1_;
  if (c0 <= budget_) return c1 <= gamma_ || clipped_by_budget;
  return quiescent_ && !clipped_by_budget && c1 <= gamma_;
}

namespace {

std::vector<char> reachable_from(const SrGraph& graph, NodeIndex source) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<NodeIndex>> out(n);
  for (const auto& e : graph.edges()) out[e.src].push_back(e.dst);
  std::vector<char> seen(n, 0);
  std::vector<NodeIndex> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    for (NodeIndex v : out[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Best2copResult best2cop(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1,
                        const Best2copOptions& options) {
  const std::size_t n = graph.node_count();
  if (source >= n) throw std::invalid_argument("source is not a node of the SR graph");
  if (c0 < 1) throw std::invalid_argument("segment budget c0 must be at least 1");
  const DelayUnits gamma = compute_gamma(c0, c1, graph);
  if (gamma >= std::numeric_limits<std::uint32_t>::max() || (gamma + 1) * n > (std::size_t{1} << 32))
    throw std::length_error("delay bound gamma too large for the front arrays");

  Best2copResult result;
  result.source_ = source;
  result.node_count_ = n;
  result.budget_ = c0;
  result.c1_ = c1;
  result.gamma_ = gamma;
  result.max_edge_delay_ = graph.max_edge_delay();
  result.reachable_ = reachable_from(graph, source);

  const std::size_t width = gamma + 1;
  std::vector<IgpCost> cumulative(n * width, kInfiniteCost);
  cumulative[source * width] = 0;

  Best2copResult::Layer first;
  first.offsets.assign(n + 1, 0);
  for (std::size_t v = source + 1; v <= n; ++v) first.offsets[v] = 1;
  first.entries.push_back({0, 0});
  first.preds.push_back({});
  result.layers_.push_back(std::move(first));

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));
  std::vector<ParetoFront> scratch(workers, ParetoFront(gamma));
  struct WorkerOutput {
    std::vector<std::uint32_t> counts;
    std::vector<FrontierEntry> entries;
    std::vector<Predecessor> preds;
  };
  std::vector<WorkerOutput> outputs(workers);

  const bool stop_when_quiescent = options.stop_when_quiescent || c0 == kUnboundedSegments;
  for (unsigned iteration = 1; c0 == kUnboundedSegments || iteration <= c0; ++iteration) {
    const Best2copResult::Layer& prev = result.layers_.back();

    auto work = [&](unsigned w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      ParetoFront& candidates = scratch[w];
      WorkerOutput& out = outputs[w];
      out.counts.assign(end - begin, 0);
      out.entries.clear();
      out.preds.clear();
      for (std::size_t v = begin; v < end; ++v) {
        // Nothing beats the empty path at the source.
        if (v == source) continue;
        std::span<IgpCost> dist(cumulative.data() + v * width, width);
        const std::uint32_t base = graph.in_offset(static_cast<NodeIndex>(v));
        const auto in = graph.in_edges(static_cast<NodeIndex>(v));
        for (std::uint32_t k = 0; k < in.size(); ++k) {
          const SrEdge& e = in[k];
          const std::uint32_t lo = prev.offsets[e.src];
          const std::uint32_t hi = prev.offsets[e.src + 1];
          if (lo == hi || e.w1 > gamma) continue;
          extend_front(std::span<const FrontierEntry>(prev.entries.data() + lo, hi - lo), e, base + k, dist,
                       candidates);
        }
        const std::size_t before = out.entries.size();
        filter_candidates(candidates, dist, out.entries, out.preds);
        out.counts[v - begin] = static_cast<std::uint32_t>(out.entries.size() - before);
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    Best2copResult::Layer next;
    next.offsets.assign(n + 1, 0);
    std::size_t v = 0;
    for (const auto& out : outputs) {
      for (std::uint32_t count : out.counts) {
        next.offsets[v + 1] = next.offsets[v] + count;
        ++v;
      }
      next.entries.insert(next.entries.end(), out.entries.begin(), out.entries.end());
      next.preds.insert(next.preds.end(), out.preds.begin(), out.preds.end());
    }
    const bool settled_nothing = next.entries.empty();
    result.layers_.push_back(std::move(next));
    if (settled_nothing) {
      result.quiescent_ = true;
      if (stop_when_quiescent) break;
    }
  }
  return result;
}

namespace {

Segment to_segment(const SrEdge& e) { return Segment{e.kind, e.src, e.dst, e.interface}; }

}  // namespace

Solution extract_solution(const Best2copResult& result, const SrGraph& graph, NodeIndex dest, const Query& q) {
  if (q.source != result.source()) throw std::invalid_argument("query source differs from the computed source");
  if (dest >= result.node_count()) throw std::invalid_argument("destination is not a node of the SR graph");
  if (!result.covers(q.c0, q.c1)) throw std::invalid_argument("result does not cover the query constraints");

  const unsigned last = std::min(q.c0, result.iterations_run());
  struct Pick {
    unsigned iteration;
    std::size_t index;
    FrontierEntry entry;
  };
  auto key = [&](const Pick& p) {
    const DelayUnits d = p.entry.delay;
    const IgpCost c = p.entry.cost;
    const unsigned s = p.iteration;
    switch (q.objective) {
      case Objective::MinDelay:
        return std::make_tuple(DelayUnits{d}, IgpCost{c}, DelayUnits{s});
      case Objective::MinSegments:
        return std::make_tuple(DelayUnits{s}, IgpCost{c}, DelayUnits{d});
      case Objective::MinCost:
      default:
        return std::make_tuple(DelayUnits{c}, IgpCost{d}, DelayUnits{s});
    }
  };

  std::optional<Pick> best;
  for (unsigned i = 0; i <= last; ++i) {
    const auto entries = result.settled(dest, i);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      if (e.delay > q.c1 || (q.c2 && e.cost > *q.c2)) continue;
      Pick p{i, k, e};
      if (!best || key(p) < key(*best)) best = p;
    }
  }
  if (!best) return result.reachable(dest) ? Infeasibility::ConstraintsTooStrict : Infeasibility::Unreachable;

  SegmentList list;
  list.m0 = best->iteration;
  list.m1 = best->entry.delay;
  list.m2 = best->entry.cost;
  list.segments.resize(best->iteration);
  NodeIndex node = dest;
  std::size_t index = best->index;
  for (unsigned i = best->iteration; i > 0; --i) {
    const Predecessor& pred = result.settled_preds(node, i)[index];
    const SrEdge& e = graph.edge(pred.edge);
    list.segments[i - 1] = to_segment(e);
    const auto prev = result.settled(e.src, i - 1);
    auto it = std::lower_bound(prev.begin(), prev.end(), pred.prev_delay,
                               [](const FrontierEntry& fe, std::uint32_t d) { return fe.delay < d; });
    if (it == prev.end() || it->delay != pred.prev_delay)
      throw std::logic_error("broken predecessor chain");
    node = e.src;
    index = static_cast<std::size_t>(it - prev.begin());
  }
  return list;
}

std::string format_segment_list(const SegmentList& list, const SrGraph& graph) {
  if (list.segments.empty()) return "-";
  std::string out;
  for (const auto& s : list.segments) {
    if (!out.empty()) out += ',';
    if (s.kind == SegmentKind::Node)
      out += "N:" + graph.label(s.dst);
    else
      out += "A:" + graph.label(s.src) + ':' + std::to_string(s.interface) + ':' + graph.label(s.dst);
  }
  return out;
}

namespace {

// All IGP-optimal paths from `src` to `dst`, as raw link index sequences.
std::vector<PhysicalPath> ecmp_paths(const RawTopology& raw, NodeIndex src, NodeIndex dst, AccuracyGrain grain,
                                     std::size_t max_paths) {
  const EcmpTree tree = ecmp_from(raw, src, grain);
  if (!tree.cost[dst]) return {};
  const auto links = raw.links();
  std::vector<std::vector<std::size_t>> dag_in(raw.node_count());
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    if (tree.cost[l.src] && tree.cost[l.dst] && *tree.cost[l.src] + l.igp_cost == *tree.cost[l.dst])
      dag_in[l.dst].push_back(i);
  }
  std::vector<PhysicalPath> paths;
  std::vector<std::size_t> suffix;
  std::function<void(NodeIndex)> walk = [&](NodeIndex v) {
    if (v == src) {
      PhysicalPath p;
      p.links.assign(suffix.rbegin(), suffix.rend());
      for (auto li : p.links) {
        p.delay += round_delay(links[li].delay, grain);
        p.cost += links[li].igp_cost;
      }
      paths.push_back(std::move(p));
      if (paths.size() > max_paths) throw std::length_error("too many ECMP paths to decode");
      return;
    }
    for (auto li : dag_in[v]) {
      suffix.push_back(li);
      walk(links[li].src);
      suffix.pop_back();
    }
  };
  walk(dst);
  return paths;
}

}  // namespace

std::vector<PhysicalPath> decode_segment_list(const SegmentList& list, const RawTopology& raw, const SrGraph& graph,
                                              std::size_t max_paths) {
  std::vector<PhysicalPath> paths(1);
  const auto links = raw.links();
  for (const auto& s : list.segments) {
    if (!graph.find_edge(s.src, s.dst, s.kind, s.interface))
      throw StaleSegmentList("segment " + graph.label(s.src) + "->" + graph.label(s.dst) + " is not in the SR graph");
    std::vector<PhysicalPath> pieces;
    if (s.kind == SegmentKind::Node) {
      pieces = ecmp_paths(raw, s.src, s.dst, graph.grain(), max_paths);
      if (pieces.empty()) throw StaleSegmentList("node segment target unreachable in the topology");
    } else {
      auto it = std::find_if(links.begin(), links.end(), [&](const RawLink& l) {
        return l.src == s.src && l.dst == s.dst && l.interface == s.interface;
      });
      if (it == links.end()) throw StaleSegmentList("adjacency segment has no matching link");
      const auto li = static_cast<std::size_t>(it - links.begin());
      pieces.push_back({{li}, round_delay(it->delay, graph.grain()), it->igp_cost});
    }
    if (paths.size() * pieces.size() > max_paths) throw std::length_error("too many physical paths to decode");
    std::vector<PhysicalPath> next;
    next.reserve(paths.size() * pieces.size());
    for (const auto& head : paths) {
      for (const auto& tail : pieces) {
        PhysicalPath p = head;
        p.links.insert(p.links.end(), tail.links.begin(), tail.links.end());
        p.delay += tail.delay;
        p.cost += tail.cost;
        next.push_back(std::move(p));
      }
    }
    paths = std::move(next);
  }
  return paths;
}

std::string_view to_string(CoverageClass cls) {
  switch (cls) {
    case CoverageClass::Perfect:
      return "perfect";
    case CoverageClass::Imperfect:
      return "imperfect";
    case CoverageClass::HiddenBySegmax:
      return "hidden";
    case CoverageClass::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

std::vector<CoverageRecord> classify_coverage(const Best2copResult& unbounded, unsigned segmax) {
  if (!unbounded.quiescent()) throw std::invalid_argument("coverage needs a run that reached quiescence");
  std::vector<CoverageRecord> records;
  for (NodeIndex v = 0; v < unbounded.node_count(); ++v) {
    if (v == unbounded.source()) continue;
    CoverageRecord rec{v, std::nullopt, CoverageClass::Infeasible};
    IgpCost bounded = kInfiniteCost;
    IgpCost overall = kInfiniteCost;
    for (unsigned i = 1; i <= unbounded.iterations_run(); ++i) {
      for (const auto& e : unbounded.settled(v, i)) {
        overall = std::min(overall, e.cost);
        if (i <= segmax) bounded = std::min(bounded, e.cost);
      }
    }
    const Front final_front = unbounded.final_front(v);
    for (const auto& p : final_front)
      rec.iters_needed = std::max(rec.iters_needed.value_or(0), p.segments);
    if (bounded != kInfiniteCost)
      rec.cls = bounded == overall ? CoverageClass::Perfect : CoverageClass::Imperfect;
    else if (overall != kInfiniteCost)
      rec.cls = CoverageClass::HiddenBySegmax;
    records.push_back(rec);
  }
  return records;
}

std::vector<CoverageRecord> coverage_analysis(const SrGraph& graph, NodeIndex source, DelayUnits c1,
                                              unsigned segmax, unsigned workers) {
  Best2copOptions options;
  options.workers = workers;
  return classify_coverage(best2cop(graph, source, kUnboundedSegments, c1, options), segmax);
}

}  // namespace best2cop
