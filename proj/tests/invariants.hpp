#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "best2cop/core.hpp"
#include "best2cop/oracle.hpp"
#include "support.hpp"

namespace best2cop::test_support {

inline std::string describe(const Front& f) {
  std::ostringstream os;
  os << '{';
  for (const auto& p : f) os << '(' << p.delay << ',' << p.cost << ',' << p.segments << ')';
  os << '}';
  return os.str();
}

/// Compares F[v][i] with the oracle for every v and i <= c0. Returns the
/// first mismatch, or nullopt.
inline std::optional<std::string> compare_with_oracle(const SrGraph& g, NodeIndex source, unsigned c0,
                                                      DelayUnits c1, unsigned workers = 1) {
  Best2copOptions opt;
  opt.workers = workers;
  const Best2copResult r = best2cop(g, source, c0, c1, opt);
  const auto expected = oracle::oracle_fronts_by_length(g, source, c0, compute_gamma(c0, c1, g));
  for (unsigned i = 0; i <= c0; ++i) {
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      const Front got = r.front(v, i);
      if (got != expected[i][v]) {
        std::ostringstream os;
        os << "source " << source << " dest " << v << " iter " << i << ": best2cop " << describe(got) << " oracle "
           << describe(expected[i][v]);
        return os.str();
      }
    }
  }
  return std::nullopt;
}

inline double objective_value(const SegmentList& l, Objective o) {
  switch (o) {
    case Objective::MinSegments:
      return l.m0;
    case Objective::MinDelay:
      return static_cast<double>(l.m1);
    case Objective::MinCost:
    default:
      return static_cast<double>(l.m2);
  }
}

/// Checks the core invariants on one (graph, source, c0, c1) instance.
/// Returns every violation found.
inline std::vector<std::string> check_invariants(const SrGraph& g, NodeIndex source, unsigned c0, DelayUnits c1) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& what) { bad.push_back(what); };

  const Best2copResult r = best2cop(g, source, c0, c1);
  const DelayUnits gamma = r.gamma();
  if (gamma != compute_gamma(c0, c1, g)) fail("gamma mismatch");
  if (gamma > c1) fail("gamma exceeds c1");

  // Front capacity, non-domination, delays within gamma.
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    for (unsigned i = 0; i <= r.iterations_run(); ++i) {
      const Front f = r.front(v, i);
      if (f.size() > gamma + 1) fail("front capacity exceeded");
      if (r.settled(v, i).size() > gamma + 1) fail("frontier capacity exceeded");
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k].delay > gamma) fail("front delay beyond gamma");
        if (k > 0 && !(f[k].delay > f[k - 1].delay && f[k].cost < f[k - 1].cost)) fail("front is not non-dominated");
      }
      const auto s = r.settled(v, i);
      for (std::size_t k = 1; k < s.size(); ++k)
        if (!(s[k].delay > s[k - 1].delay && s[k].cost < s[k - 1].cost)) fail("frontier is not non-dominated");
      // Newly settled entries strictly beat everything with fewer segments.
      if (i > 0) {
        const auto before = step_costs(r.front(v, i - 1), gamma);
        for (const auto& e : s)
          if (e.cost >= before[e.delay]) fail("settled entry is dominated by an earlier iteration");
      }
    }
  }
  const Front src0 = r.front(source, 0);
  if (src0 != Front{{0, 0, 0}}) fail("source front at iteration 0 is not {(0,0)}");

  // Monotone cumulative fronts.
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    auto prev = step_costs(r.front(v, 0), gamma);
    for (unsigned i = 1; i <= c0; ++i) {
      auto cur = step_costs(r.front(v, i), gamma);
      for (std::size_t d = 0; d <= gamma; ++d)
        if (cur[d] > prev[d]) {
          fail("cumulative front worsened");
          break;
        }
      prev = std::move(cur);
    }
  }

  // Quiescence is stable: forcing the remaining iterations changes nothing.
  if (r.quiescent()) {
    Best2copOptions keep_going;
    keep_going.stop_when_quiescent = false;
    const unsigned extra = std::max(c0, r.iterations_run() + 1);
    const Best2copResult full = best2cop(g, source, extra, c1, keep_going);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      for (unsigned i = r.iterations_run(); i <= extra; ++i)
        if (!full.settled(v, i).empty()) fail("an iteration after quiescence settled new distances");
      if (full.final_front(v) != r.final_front(v)) fail("front changed after quiescence");
    }
  }

  // Determinism across worker counts.
  {
    Best2copOptions four;
    four.workers = 4;
    const Best2copResult r4 = best2cop(g, source, c0, c1, four);
    if (r4.iterations_run() != r.iterations_run()) fail("iteration count depends on workers");
    for (NodeIndex v = 0; v < g.node_count() && r4.iterations_run() == r.iterations_run(); ++v) {
      for (unsigned i = 0; i <= r.iterations_run(); ++i) {
        const auto a = r.settled(v, i), b = r4.settled(v, i);
        const auto pa = r.settled_preds(v, i), pb = r4.settled_preds(v, i);
        bool same = a.size() == b.size() && pa.size() == pb.size();
        for (std::size_t k = 0; same && k < a.size(); ++k)
          same = a[k].delay == b[k].delay && a[k].cost == b[k].cost && pa[k].edge == pb[k].edge &&
                 pa[k].prev_delay == pb[k].prev_delay;
        if (!same) {
          fail("result depends on worker count");
          break;
        }
      }
    }
  }

  // Path reconstruction and constraint monotonicity.
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    for (Objective obj : {Objective::MinSegments, Objective::MinDelay, Objective::MinCost}) {
      Query q{source, c0, c1, std::nullopt, obj};
      const Solution loose = extract_solution(r, g, v, q);
      const auto* list = std::get_if<SegmentList>(&loose);
      if (list) {
        if (list->segments.size() != list->m0) fail("segment count differs from m0");
        if (list->m1 > c1 || list->m0 > c0) fail("solution violates its constraints");
        DelayUnits d = 0;
        IgpCost c = 0;
        NodeIndex at = source;
        for (const auto& s : list->segments) {
          if (s.src != at) fail("segment list is not a walk from the source");
          const auto idx = g.find_edge(s.src, s.dst, s.kind, s.interface);
          if (!idx) {
            fail("segment missing from the SR graph");
            continue;
          }
          d += g.edge(*idx).w1;
          c += g.edge(*idx).w2;
          at = s.dst;
        }
        if (at != v) fail("segment list does not end at the destination");
        if (d != list->m1 || c != list->m2) fail("segment list totals differ from edge weights");
        bool on_front = false;
        for (const auto& e : r.settled(v, list->m0)) on_front |= e.delay == list->m1 && e.cost == list->m2;
        if (!on_front) fail("solution is not a settled entry of its iteration");
      } else if (v == source) {
        fail("source reported infeasible");
      }

      std::vector<Query> tighter;
      if (c0 > 1) tighter.push_back({source, c0 - 1, c1, std::nullopt, obj});
      if (c1 > 0) tighter.push_back({source, c0, c1 / 2, std::nullopt, obj});
      if (list && list->m2 > 0) tighter.push_back({source, c0, c1, list->m2 - 1, obj});
      for (const Query& t : tighter) {
        const Best2copResult rt = best2cop(g, source, t.c0, t.c1);
        const Solution s = extract_solution(rt, g, v, t);
        const auto* tl = std::get_if<SegmentList>(&s);
        if (tl && !list) fail("tighter constraints made an infeasible destination feasible");
        if (tl && list && objective_value(*tl, obj) < objective_value(*list, obj))
          fail("tighter constraints improved the objective");
      }
    }
  }
  return bad;
}

}  // namespace best2cop::test_support
