#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "best2cop/experiments.hpp"

using namespace best2cop;
namespace ex = best2cop::experiments;

TEST(Config, ParsesKeysListsAndRanges) {
  std::istringstream in(
      "# sweep\n"
      "sizes = 10, 20\n"
      "spreadings = 10..50:20, 100\n"
      "seeds_per_point = 3\n"
      "sources_fraction = 0.5\n"
      "c0 = 8\n"
      "c1_ms = 12.5\n"
      "grain = 100\n"
      "warmup_runs = 2\n"
      "seed = 99\n"
      "workers = 2\n"
      "raw_nodes = 30\n"
      "raw_links = 70\n"
      "raw_max_delay_ms = 3\n"
      "c1_values_ms = 10, 100\n"
      "segmax = 4  # trailing comment\n");
  const ex::ExperimentConfig cfg = ex::parse_config(in);
  EXPECT_EQ(cfg.sizes, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(cfg.spreadings, (std::vector<DelayUnits>{10, 30, 50, 100}));
  EXPECT_EQ(cfg.seeds_per_point, 3u);
  EXPECT_DOUBLE_EQ(cfg.sources_fraction, 0.5);
  EXPECT_EQ(cfg.c0, 8u);
  EXPECT_EQ(cfg.c1.value, 12500u);
  EXPECT_EQ(cfg.grain.per_ms, 100u);
  EXPECT_EQ(cfg.warmup_runs, 2u);
  EXPECT_EQ(cfg.base_seed, 99u);
  EXPECT_EQ(cfg.workers, 2u);
  EXPECT_EQ(cfg.raw_nodes, 30u);
  EXPECT_EQ(cfg.raw_links, 70u);
  EXPECT_EQ(cfg.raw_max_delay.value, 3000u);
  ASSERT_EQ(cfg.c1_values.size(), 2u);
  EXPECT_EQ(cfg.c1_values[1].value, 100000u);
  EXPECT_EQ(cfg.segmax, 4u);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {"bogus = 1\n", "c0 = -1\n", "c0 = x\n", "sizes = 5..1\n", "no equals sign\n",
                           "sources_fraction = 0\n", "c0 = 0\n", "grain = 0\n", "spreadings = 1..9:0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ex::parse_config(in), std::invalid_argument) << text;
  }
  EXPECT_THROW(ex::load_config("/nonexistent.cfg"), std::invalid_argument);
}

TEST(Sampling, SourcesAreDistinctAndDeterministic) {
  const auto a = ex::sample_sources(100, 0.1, 5);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(std::set<NodeIndex>(a.begin(), a.end()).size(), 10u);
  for (auto s : a) EXPECT_LT(s, 100u);
  EXPECT_EQ(a, ex::sample_sources(100, 0.1, 5));
  EXPECT_NE(a, ex::sample_sources(100, 0.1, 6));
  EXPECT_EQ(ex::sample_sources(5, 0.01, 1).size(), 1u);
  EXPECT_EQ(ex::sample_sources(5, 1.0, 1).size(), 5u);
}

TEST(Stats, MedianAndSpearman) {
  EXPECT_DOUBLE_EQ(ex::median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(ex::median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(ex::median({}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(ex::spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(ex::spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(ex::spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486833, 1e-6);
  EXPECT_THROW(ex::spearman({1}, {1}), std::invalid_argument);
}

TEST(Csv, TimingRows) {
  std::ostringstream os;
  ex::write_timing_header(os);
  ex::write_timing_row(os, {"fullmesh", 10, 500, 3, 4, 10, 1000, 12345, 7, 99});
  EXPECT_EQ(os.str(),
            "experiment,vertices,spreading,seed,source,c0,c1_units,time_ns,iters,front_size\n"
            "fullmesh,10,500,3,4,10,1000,12345,7,99\n");
}

TEST(Suites, FullmeshRowsAndSink) {
  ex::ExperimentConfig cfg;
  cfg.sizes = {20, 30};
  cfg.spreadings = {50, 500};
  cfg.seeds_per_point = 2;
  cfg.sources_fraction = 0.1;
  std::size_t streamed = 0;
  const auto rows = ex::run_fullmesh_suite(cfg, [&](const ex::TimingRecord&) { ++streamed; });
  EXPECT_EQ(rows.size(), (2u + 3u) * 2u * 2u);
  EXPECT_EQ(streamed, rows.size());
  for (const auto& r : rows) {
    EXPECT_EQ(r.experiment, "fullmesh");
    EXPECT_GT(r.time_ns, 0u);
    EXPECT_GE(r.iters, 1u);
    EXPECT_LE(r.iters, cfg.c0);
    EXPECT_GE(r.front_size, r.vertices);
    EXPECT_EQ(r.c1_units, 1000u);
  }
  // Identical seeds give identical non-timing columns.
  const auto again = ex::run_fullmesh_suite(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].seed, again[i].seed);
    EXPECT_EQ(rows[i].source, again[i].source);
    EXPECT_EQ(rows[i].front_size, again[i].front_size);
    EXPECT_EQ(rows[i].iters, again[i].iters);
  }
}

TEST(Suites, SpreadingSweeps) {
  ex::ExperimentConfig cfg;
  cfg.sizes = {25};
  cfg.spreadings = {10, 100};
  cfg.sources_fraction = 0.1;
  const auto on_sr = ex::run_spreading_sweep(ex::SpreadingKind::OnSrGraph, cfg);
  ASSERT_EQ(on_sr.size(), 2u * 3u);
  EXPECT_EQ(on_sr.front().experiment, "spreading_sr");
  EXPECT_EQ(on_sr.front().seed, on_sr.back().seed);

  cfg.raw_nodes = 40;
  cfg.raw_links = 100;
  const auto pre = ex::run_spreading_sweep(ex::SpreadingKind::PreSpreading, cfg);
  ASSERT_EQ(pre.size(), 2u * 4u);
  for (const auto& r : pre) {
    EXPECT_EQ(r.experiment, "prespreading");
    EXPECT_EQ(r.vertices, 40u);
  }
}

TEST(Suites, ConstraintSweep) {
  const SrGraph g = generate_random_sr_graph(30, 300, 4);
  ex::ExperimentConfig cfg;
  cfg.c1_values = {DelayMicros::from_ms(10), DelayMicros::from_ms(100)};
  cfg.sources_fraction = 0.1;
  const auto rows = ex::run_constraint_sweep(g, cfg, 4);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].c1_units, 100u);
  EXPECT_EQ(rows[5].c1_units, 1000u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(rows[i].front_size, rows[i + 3].front_size);
}

TEST(Suites, CoverageStudyAndCsv) {
  const RawTopology raw = generate_random_raw(30, 80, DelayMicros::from_ms(5), 2);
  const SrGraph g = build_sr_graph(raw, AccuracyGrain(10));
  const std::vector<NodeIndex> sources{0, 5};
  const auto study = ex::run_coverage_study(g, {DelayMicros::from_ms(8), DelayMicros::from_ms(100)}, 3, sources);
  EXPECT_EQ(study.rows.size(), 2u * 2u * 29u);
  std::size_t total = 0, hist = 0;
  for (const auto& [cls, n] : study.counts) total += n;
  for (const auto& [iters, n] : study.iters_histogram) hist += n;
  EXPECT_EQ(total, study.rows.size());
  EXPECT_EQ(hist + study.no_path, study.rows.size());

  std::ostringstream os;
  ex::write_coverage_csv(os, study, g);
  std::istringstream lines(os.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "experiment,source,dest,c1_units,iters_needed,class");
  EXPECT_EQ(first.rfind("coverage,v0,", 0), 0u);
}
