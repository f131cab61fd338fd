#include "best2cop/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "best2cop/core.hpp"
#include "best2cop/experiments.hpp"
#include "best2cop/oracle.hpp"
#include "best2cop/srgraph.hpp"
#include "best2cop/topology.hpp"

namespace best2cop::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string topology;
  std::uint32_t grain = 10;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
  std::string dump_srgraph;
};

struct SolveFlags {
  std::string source;
  unsigned c0 = 10;
  std::string c1_ms;
  std::optional<IgpCost> c2;
  std::string objective = "m2";
  std::string dest;
  bool all_dests = false;
  std::string emit_front;
};

struct OracleFlags {
  std::string source;
  unsigned c0 = 10;
  std::string c1_ms;
};

struct BenchFlags {
  std::string kind;
  std::string config;
};

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  auto file = std::make_unique<std::ofstream>(path, std::ios::out | std::ios::trunc);
  if (!*file) throw InputError("cannot open output file '" + path + "'");
  return file;
}

RawTopology require_topology(const GlobalFlags& g) {
  if (g.topology.empty()) throw InputError("--topology is required");
  return load_topology(g.topology);
}

NodeIndex require_node(const SrGraph& graph, const std::string& label, const char* what) {
  auto v = graph.find(label);
  if (!v) throw InputError(std::string(what) + " '" + label + "' is not a node of the topology");
  return *v;
}

DelayUnits c1_units(const std::string& c1_ms, AccuracyGrain grain, std::ostream& err) {
  DelayMicros c1;
  try {
    c1 = parse_delay_ms(c1_ms);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--c1-ms: ") + e.what());
  }
  const DelayUnits units = round_delay(c1, grain);
  err << "c1 = " << format_delay_ms(c1) << " ms (" << units << " units at t = " << grain.per_ms << ")\n";
  return units;
}

SrGraph build_graph(const GlobalFlags& g, const RawTopology& raw) {
  SrGraph graph = build_sr_graph(raw, AccuracyGrain(g.grain), g.workers);
  if (!g.dump_srgraph.empty()) write_sr_graph(graph, *open_output(g.dump_srgraph));
  return graph;
}

// dest,iter,delay_units,cost for every iteration 0..c0.
void write_fronts_csv(std::ostream& out, const SrGraph& graph,
                      const std::vector<std::vector<Front>>& by_iteration) {
  out << "dest,iter,delay_units,cost\n";
  for (NodeIndex v = 0; v < graph.node_count(); ++v)
    for (std::size_t i = 0; i < by_iteration.size(); ++i)
      for (const auto& p : by_iteration[i][v])
        out << graph.label(v) << ',' << i << ',' << p.delay << ',' << p.cost << '\n';
}

int run_parse(const GlobalFlags& g, std::ostream& out, std::ostream& err) {
  const RawTopology raw = require_topology(g);
  err << raw.node_count() << " nodes, " << raw.link_count() << " links"
      << (is_strongly_connected(raw) ? "" : ", not strongly connected") << '\n';
  if (g.out.empty())
    write_topology(raw, out);
  else
    write_topology(raw, *open_output(g.out));
  return kExitOk;
}

int run_srgraph(const GlobalFlags& g, std::ostream& out, std::ostream& err) {
  const RawTopology raw = require_topology(g);
  const SrGraph graph = build_graph(g, raw);
  err << graph.node_count() << " nodes, " << graph.edge_count() << " SR edges, max edge delay "
      << graph.max_edge_delay() << " units (" << format_units_ms(graph.max_edge_delay(), graph.grain()) << " ms)\n";
  if (g.out.empty())
    write_sr_graph(graph, out);
  else
    write_sr_graph(graph, *open_output(g.out));
  return kExitOk;
}

Objective parse_objective(const std::string& name) {
  if (name == "m0") return Objective::MinSegments;
  if (name == "m1") return Objective::MinDelay;
  if (name == "m2") return Objective::MinCost;
  throw InputError("--objective must be one of m0, m1, m2");
}

int run_solve(const GlobalFlags& g, const SolveFlags& f, std::ostream& out, std::ostream& err) {
  const RawTopology raw = require_topology(g);
  const SrGraph graph = build_graph(g, raw);

  Query q;
  q.source = require_node(graph, f.source, "--source");
  q.c0 = f.c0;
  q.c1 = c1_units(f.c1_ms, graph.grain(), err);
  q.c2 = f.c2;
  q.objective = parse_objective(f.objective);

  std::vector<NodeIndex> dests;
  if (!f.dest.empty()) {
    dests.push_back(require_node(graph, f.dest, "--dest"));
  } else {
    for (NodeIndex v = 0; v < graph.node_count(); ++v)
      if (v != q.source) dests.push_back(v);
  }

  Best2copOptions options;
  options.workers = g.workers;
  const Best2copResult result = best2cop(graph, q.source, q.c0, q.c1, options);
  err << "gamma = " << result.gamma() << " units (" << format_units_ms(result.gamma(), graph.grain())
      << " ms), iterations = " << result.iterations_run() << '\n';

  std::unique_ptr<std::ofstream> file;
  if (!g.out.empty()) file = open_output(g.out);
  std::ostream& sink = file ? *file : out;

  bool any_feasible = false;
  for (NodeIndex v : dests) {
    const Solution sol = extract_solution(result, graph, v, q);
    if (const auto* list = std::get_if<SegmentList>(&sol)) {
      any_feasible = true;
      sink << graph.label(v) << ' ' << list->m0 << ' ' << format_units_ms(list->m1, graph.grain()) << ' '
           << list->m2 << ' ' << format_segment_list(*list, graph) << '\n';
    } else {
      sink << graph.label(v) << ' '
           << (std::get<Infeasibility>(sol) == Infeasibility::Unreachable ? "UNREACHABLE" : "INFEASIBLE") << '\n';
    }
  }

  if (!f.emit_front.empty()) {
    std::vector<std::vector<Front>> by_iteration(q.c0 + 1, std::vector<Front>(graph.node_count()));
    for (unsigned i = 0; i <= q.c0; ++i)
      for (NodeIndex v = 0; v < graph.node_count(); ++v) by_iteration[i][v] = result.front(v, i);
    write_fronts_csv(*open_output(f.emit_front), graph, by_iteration);
  }
  return dests.empty() || any_feasible ? kExitOk : kExitInfeasible;
}

int run_oracle(const GlobalFlags& g, const OracleFlags& f, std::ostream& out, std::ostream& err) {
  const RawTopology raw = require_topology(g);
  const SrGraph graph = build_graph(g, raw);
  const NodeIndex source = require_node(graph, f.source, "--source");
  const DelayUnits c1 = c1_units(f.c1_ms, graph.grain(), err);
  const DelayUnits cap = compute_gamma(f.c0, c1, graph);
  const auto fronts = oracle::oracle_fronts_by_length(graph, source, f.c0, cap);
  if (g.out.empty())
    write_fronts_csv(out, graph, fronts);
  else
    write_fronts_csv(*open_output(g.out), graph, fronts);
  return kExitOk;
}

SrGraph bench_graph(const GlobalFlags& g, const experiments::ExperimentConfig& cfg, std::ostream& err) {
  if (!g.topology.empty()) return build_sr_graph(load_topology(g.topology), cfg.grain, cfg.workers);
  err << "no --topology: generating a " << cfg.raw_nodes << "-node, " << cfg.raw_links << "-link stand-in (seed "
      << cfg.base_seed << ")\n";
  const RawTopology raw = generate_random_raw(cfg.raw_nodes, cfg.raw_links, cfg.raw_max_delay, cfg.base_seed);
  return build_sr_graph(raw, cfg.grain, cfg.workers);
}

int run_bench(const GlobalFlags& g, const BenchFlags& f, std::ostream& err) {
  if (g.out.empty()) throw InputError("bench requires --out");
  experiments::ExperimentConfig cfg;
  try {
    cfg = f.config.empty() ? experiments::ExperimentConfig{} : experiments::load_config(f.config);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (g.seed) cfg.base_seed = *g.seed;
  if (g.workers != 1) cfg.workers = g.workers;
  if (g.grain != 10) cfg.grain = AccuracyGrain(g.grain);

  auto file = open_output(g.out);
  std::ostream& csv = *file;
  if (f.kind == "coverage") {
    const SrGraph graph = bench_graph(g, cfg, err);
    auto c1_values = cfg.c1_values;
    if (c1_values.empty()) c1_values.push_back(cfg.c1);
    const auto sources = experiments::sample_sources(graph.node_count(), cfg.sources_fraction, cfg.base_seed);
    const auto study = experiments::run_coverage_study(graph, c1_values, cfg.segmax, sources, cfg.workers);
    experiments::write_coverage_csv(csv, study, graph);
    for (const auto& [cls, count] : study.counts) err << to_string(cls) << ": " << count << '\n';
    return kExitOk;
  }

  experiments::write_timing_header(csv);
  auto sink = [&](const experiments::TimingRecord& r) {
    experiments::write_timing_row(csv, r);
    csv.flush();
  };
  std::size_t rows = 0;
  if (f.kind == "fullmesh") {
    rows = experiments::run_fullmesh_suite(cfg, sink).size();
  } else if (f.kind == "spreading") {
    rows = experiments::run_spreading_sweep(experiments::SpreadingKind::OnSrGraph, cfg, sink).size();
  } else if (f.kind == "prespreading") {
    rows = experiments::run_spreading_sweep(experiments::SpreadingKind::PreSpreading, cfg, sink).size();
  } else if (f.kind == "constraint") {
    if (cfg.c1_values.empty()) throw InputError("constraint bench needs c1_values_ms in the config");
    const SrGraph graph = bench_graph(g, cfg, err);
    rows = experiments::run_constraint_sweep(graph, cfg, cfg.base_seed, sink).size();
  }
  err << rows << " timing rows written to " << g.out << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delay-constrained least-cost segment routing path computation", "best2cop"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--topology", g.topology, "Edge-list topology file");
  app.add_option("--grain", g.grain, "Delay units per millisecond")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed override for generated inputs");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--dump-srgraph", g.dump_srgraph, "Write the SR graph to this file");

  auto* parse_cmd = app.add_subcommand("parse", "Validate a topology and print it in normalized form");
  auto* srgraph_cmd = app.add_subcommand("srgraph", "Build and print the SR graph");

  SolveFlags sf;
  auto* solve_cmd = app.add_subcommand("solve", "Compute segment lists from one source");
  solve_cmd->add_option("--source", sf.source, "Source node label")->required();
  solve_cmd->add_option("--c0", sf.c0, "Maximum number of segments")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--c1-ms", sf.c1_ms, "Delay constraint in milliseconds")->required();
  solve_cmd->add_option("--c2", sf.c2, "Optional cost constraint");
  solve_cmd->add_option("--objective", sf.objective, "m0 (segments), m1 (delay) or m2 (cost)")
      ->check(CLI::IsMember({"m0", "m1", "m2"}));
  auto* dest_opt = solve_cmd->add_option("--dest", sf.dest, "Single destination label");
  solve_cmd->add_flag("--all-dests", sf.all_dests, "Every destination (default)")->excludes(dest_opt);
  solve_cmd->add_option("--emit-front", sf.emit_front, "Write every Pareto front as CSV");

  OracleFlags of;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force Pareto fronts by walk enumeration");
  oracle_cmd->add_option("--source", of.source, "Source node label")->required();
  oracle_cmd->add_option("--c0", of.c0, "Maximum number of segments")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--c1-ms", of.c1_ms, "Delay constraint in milliseconds")->required();

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "Timing and coverage experiments");
  bench_cmd->add_option("kind", bf.kind, "fullmesh, spreading, prespreading, constraint or coverage")
      ->required()
      ->check(CLI::IsMember({"fullmesh", "spreading", "prespreading", "constraint", "coverage"}));
  bench_cmd->add_option("--config", bf.config, "key = value experiment configuration");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }

  try {
    if (parse_cmd->parsed()) return run_parse(g, out, err);
    if (srgraph_cmd->parsed()) return run_srgraph(g, out, err);
    if (solve_cmd->parsed()) return run_solve(g, sf, out, err);
    if (oracle_cmd->parsed()) return run_oracle(g, of, out, err);
    if (bench_cmd->parsed()) return run_bench(g, bf, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const TopologyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const oracle::BudgetExceeded& e) {
    err << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::length_error& e) {
    err << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace best2cop::cli
