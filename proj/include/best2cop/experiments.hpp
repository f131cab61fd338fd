#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "best2cop/core.hpp"
#include "best2cop/srgraph.hpp"
#include "best2cop/topology.hpp"

namespace best2cop::experiments {

struct ExperimentConfig {
  std::vector<std::size_t> sizes{100};
  std::vector<DelayUnits> spreadings{100, 500, 1000};
  unsigned seeds_per_point = 1;
  double sources_fraction = 0.1;
  unsigned c0 = 10;
  DelayMicros c1 = DelayMicros::from_ms(100);
  AccuracyGrain grain{10};
  unsigned warmup_runs = 0;
  std::uint64_t base_seed = 1;
  unsigned workers = 1;

  // Pre-spreading stand-in topology, also used by coverage studies.
  std::size_t raw_nodes = 1100;
  std::size_t raw_links = 3000;
  DelayMicros raw_max_delay = DelayMicros{7000};

  // Constraint and coverage sweeps.
  std::vector<DelayMicros> c1_values;
  unsigned segmax = 10;

  void validate() const;
};

/// `key = value` lines, `#` comments. Lists are comma separated and accept
/// `a..b:step` ranges. Unknown keys are rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct TimingRecord {
  std::string experiment;
  std::size_t vertices = 0;
  std::uint64_t spreading = 0;
  std::uint64_t seed = 0;
  NodeIndex source = 0;
  unsigned c0 = 0;
  DelayUnits c1_units = 0;
  std::uint64_t time_ns = 0;
  unsigned iters = 0;
  std::size_t front_size = 0;
};

inline constexpr const char* kTimingHeader =
    "experiment,vertices,spreading,seed,source,c0,c1_units,time_ns,iters,front_size";
inline constexpr const char* kCoverageHeader = "experiment,source,dest,c1_units,iters_needed,class";

void write_timing_header(std::ostream& out);
void write_timing_row(std::ostream& out, const TimingRecord& record);

using TimingSink = std::function<void(const TimingRecord&)>;

/// Deterministic sample of max(1, round(n * fraction)) distinct sources.
std::vector<NodeIndex> sample_sources(std::size_t n, double fraction, std::uint64_t seed);

/// Times one best2cop run after `warmup_runs` unmeasured ones. Only the
/// solver call is inside the timed region.
TimingRecord time_best2cop(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1, unsigned warmup_runs,
                           unsigned workers = 1);

/// Double full meshes for every (size, spreading, seed).
std::vector<TimingRecord> run_fullmesh_suite(const ExperimentConfig& cfg, const TimingSink& sink = {});

enum class SpreadingKind { OnSrGraph, PreSpreading };

/// OnSrGraph sweeps the SR-graph delay spreading (`cfg.spreadings`, in
/// units) on double full meshes of `cfg.sizes`. PreSpreading sweeps the raw
/// maximum link delay (`cfg.spreadings`, in units of 1/t ms) on a
/// raw_nodes/raw_links stand-in whose structure is fixed per seed.
std::vector<TimingRecord> run_spreading_sweep(SpreadingKind kind, const ExperimentConfig& cfg,
                                              const TimingSink& sink = {});

/// Times best2cop on `graph` for each delay constraint of `cfg.c1_values`.
std::vector<TimingRecord> run_constraint_sweep(const SrGraph& graph, const ExperimentConfig& cfg,
                                               std::uint64_t seed = 0, const TimingSink& sink = {});

struct CoverageRow {
  NodeIndex source = 0;
  NodeIndex dest = 0;
  DelayUnits c1_units = 0;
  std::optional<unsigned> iters_needed;
  CoverageClass cls = CoverageClass::Infeasible;
};

struct CoverageStudy {
  std::vector<CoverageRow> rows;
  std::map<CoverageClass, std::size_t> counts;
  /// iters_needed over destinations with a path; `no_path` counts the rest.
  std::map<unsigned, std::size_t> iters_histogram;
  std::size_t no_path = 0;
};

CoverageStudy run_coverage_study(const SrGraph& graph, const std::vector<DelayMicros>& c1_values, unsigned segmax,
                                 const std::vector<NodeIndex>& sources, unsigned workers = 1);

void write_coverage_csv(std::ostream& out, const CoverageStudy& study, const SrGraph& graph,
                        const std::string& experiment = "coverage");

double median(std::vector<double> values);
/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace best2cop::experiments
