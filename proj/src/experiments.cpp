#include "best2cop/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace best2cop::experiments {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::uint64_t to_u64(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text.front() == '-')
    throw std::invalid_argument("config key '" + key + "': bad integer '" + text + "'");
  return v;
}

// "a..b:step" or a single integer.
std::vector<std::uint64_t> to_u64_list(const std::string& value, const std::string& key) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(value)) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_u64(item, key));
      continue;
    }
    auto colon = item.find(':', dots);
    std::uint64_t lo = to_u64(item.substr(0, dots), key);
    std::uint64_t hi = to_u64(item.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2), key);
    std::uint64_t step = colon == std::string::npos ? 1 : to_u64(item.substr(colon + 1), key);
    if (step == 0 || hi < lo) throw std::invalid_argument("config key '" + key + "': bad range '" + item + "'");
    for (std::uint64_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

DelayMicros to_delay(const std::string& text, const std::string& key) {
  try {
    return parse_delay_ms(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

std::size_t aggregate_front_size(const Best2copResult& r) {
  std::size_t total = 0;
  for (NodeIndex v = 0; v < r.node_count(); ++v) total += r.final_front(v).size();
  return total;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds_per_point < 1) throw std::invalid_argument("seeds_per_point must be at least 1");
  if (!(sources_fraction > 0.0 && sources_fraction <= 1.0))
    throw std::invalid_argument("sources_fraction must lie in (0, 1]");
  if (c0 < 1) throw std::invalid_argument("c0 must be at least 1");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "sizes") {
      cfg.sizes.clear();
      for (auto v : to_u64_list(value, key)) cfg.sizes.push_back(v);
    } else if (key == "spreadings") {
      cfg.spreadings = to_u64_list(value, key);
    } else if (key == "seeds_per_point" || key == "seeds") {
      cfg.seeds_per_point = static_cast<unsigned>(to_u64(value, key));
    } else if (key == "sources_fraction") {
      try {
        cfg.sources_fraction = std::stod(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("config key 'sources_fraction': bad number '" + value + "'");
      }
    } else if (key == "c0") {
      cfg.c0 = static_cast<unsigned>(to_u64(value, key));
    } else if (key == "c1_ms") {
      cfg.c1 = to_delay(value, key);
    } else if (key == "grain") {
      cfg.grain = AccuracyGrain(static_cast<std::uint32_t>(to_u64(value, key)));
    } else if (key == "warmup_runs") {
      cfg.warmup_runs = static_cast<unsigned>(to_u64(value, key));
    } else if (key == "seed") {
      cfg.base_seed = to_u64(value, key);
    } else if (key == "workers") {
      cfg.workers = static_cast<unsigned>(to_u64(value, key));
    } else if (key == "raw_nodes") {
      cfg.raw_nodes = to_u64(value, key);
    } else if (key == "raw_links") {
      cfg.raw_links = to_u64(value, key);
    } else if (key == "raw_max_delay_ms") {
      cfg.raw_max_delay = to_delay(value, key);
    } else if (key == "c1_values_ms") {
      cfg.c1_values.clear();
      for (const auto& item : split_list(value)) cfg.c1_values.push_back(to_delay(item, key));
    } else if (key == "segmax") {
      cfg.segmax = static_cast<unsigned>(to_u64(value, key));
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_timing_header(std::ostream& out) { out << kTimingHeader << '\n'; }

void write_timing_row(std::ostream& out, const TimingRecord& r) {
  out << r.experiment << ',' << r.vertices << ',' << r.spreading << ',' << r.seed << ',' << r.source << ',' << r.c0
      << ',' << r.c1_units << ',' << r.time_ns << ',' << r.iters << ',' << r.front_size << '\n';
}

std::vector<NodeIndex> sample_sources(std::size_t n, double fraction, std::uint64_t seed) {
  if (n == 0) return {};
  auto count = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
  count = std::clamp<std::size_t>(count, 1, n);
  std::vector<NodeIndex> all(n);
  std::iota(all.begin(), all.end(), NodeIndex{0});
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

TimingRecord time_best2cop(const SrGraph& graph, NodeIndex source, unsigned c0, DelayUnits c1, unsigned warmup_runs,
                           unsigned workers) {
  Best2copOptions options;
  options.workers = workers;
  for (unsigned i = 0; i < warmup_runs; ++i) (void)best2cop(graph, source, c0, c1, options);
  const auto start = std::chrono::steady_clock::now();
  Best2copResult result = best2cop(graph, source, c0, c1, options);
  const auto stop = std::chrono::steady_clock::now();
  TimingRecord rec;
  rec.vertices = graph.node_count();
  rec.source = source;
  rec.c0 = c0;
  rec.c1_units = c1;
  rec.time_ns = static_cast<std::uint64_t>(
      std::max<std::int64_t>(1, std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()));
  rec.iters = result.iterations_run();
  rec.front_size = aggregate_front_size(result);
  return rec;
}

namespace {

void emit(std::vector<TimingRecord>& records, TimingRecord rec, const TimingSink& sink) {
  if (sink) sink(rec);
  records.push_back(std::move(rec));
}

std::uint64_t point_seed(const ExperimentConfig& cfg, std::size_t point, unsigned k) {
  return cfg.base_seed + 1'000'003ULL * point + k;
}

}  // namespace

std::vector<TimingRecord> run_fullmesh_suite(const ExperimentConfig& cfg, const TimingSink& sink) {
  cfg.validate();
  std::vector<TimingRecord> records;
  const DelayUnits c1 = round_delay(cfg.c1, cfg.grain);
  std::size_t point = 0;
  for (std::size_t n : cfg.sizes) {
    for (DelayUnits spreading : cfg.spreadings) {
      for (unsigned k = 0; k < cfg.seeds_per_point; ++k) {
        const std::uint64_t seed = point_seed(cfg, point, k);
        const SrGraph graph = generate_random_sr_graph(n, spreading, seed, cfg.grain);
        for (NodeIndex s : sample_sources(n, cfg.sources_fraction, seed)) {
          TimingRecord rec = time_best2cop(graph, s, cfg.c0, c1, cfg.warmup_runs, cfg.workers);
          rec.experiment = "fullmesh";
          rec.spreading = spreading;
          rec.seed = seed;
          emit(records, std::move(rec), sink);
        }
      }
      ++point;
    }
  }
  return records;
}

std::vector<TimingRecord> run_spreading_sweep(SpreadingKind kind, const ExperimentConfig& cfg,
                                              const TimingSink& sink) {
  cfg.validate();
  std::vector<TimingRecord> records;
  const DelayUnits c1 = round_delay(cfg.c1, cfg.grain);
  if (kind == SpreadingKind::OnSrGraph) {
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
      const std::size_t n = cfg.sizes[si];
      for (unsigned k = 0; k < cfg.seeds_per_point; ++k) {
        // One seed per (size, k) so each spreading re-weights comparable graphs.
        const std::uint64_t seed = point_seed(cfg, si, k);
        for (DelayUnits spreading : cfg.spreadings) {
          const SrGraph graph = generate_random_sr_graph(n, spreading, seed, cfg.grain);
          for (NodeIndex s : sample_sources(n, cfg.sources_fraction, seed)) {
            TimingRecord rec = time_best2cop(graph, s, cfg.c0, c1, cfg.warmup_runs, cfg.workers);
            rec.experiment = "spreading_sr";
            rec.spreading = spreading;
            rec.seed = seed;
            emit(records, std::move(rec), sink);
          }
        }
      }
    }
    return records;
  }

  for (unsigned k = 0; k < cfg.seeds_per_point; ++k) {
    const std::uint64_t seed = point_seed(cfg, 0, k);
    for (DelayUnits s2 : cfg.spreadings) {
      // s2 is in units of 1/t ms; the raw generator wants microseconds.
      const DelayMicros max_delay{std::max<std::uint64_t>(1, s2 * 1000 / cfg.grain.per_ms)};
      const RawTopology raw = generate_random_raw(cfg.raw_nodes, cfg.raw_links, max_delay, seed);
      const SrGraph graph = build_sr_graph(raw, cfg.grain, cfg.workers);
      for (NodeIndex s : sample_sources(graph.node_count(), cfg.sources_fraction, seed)) {
        TimingRecord rec = time_best2cop(graph, s, cfg.c0, c1, cfg.warmup_runs, cfg.workers);
        rec.experiment = "prespreading";
        rec.spreading = s2;
        rec.seed = seed;
        emit(records, std::move(rec), sink);
      }
    }
  }
  return records;
}

std::vector<TimingRecord> run_constraint_sweep(const SrGraph& graph, const ExperimentConfig& cfg, std::uint64_t seed,
                                               const TimingSink& sink) {
  cfg.validate();
  std::vector<TimingRecord> records;
  const auto sources = sample_sources(graph.node_count(), cfg.sources_fraction, seed);
  for (DelayMicros c1_ms : cfg.c1_values) {
    const DelayUnits c1 = round_delay(c1_ms, cfg.grain);
    for (NodeIndex s : sources) {
      TimingRecord rec = time_best2cop(graph, s, cfg.c0, c1, cfg.warmup_runs, cfg.workers);
      rec.experiment = "constraint";
      rec.spreading = graph.max_edge_delay();
      rec.seed = seed;
      emit(records, std::move(rec), sink);
    }
  }
  return records;
}

CoverageStudy run_coverage_study(const SrGraph& graph, const std::vector<DelayMicros>& c1_values, unsigned segmax,
                                 const std::vector<NodeIndex>& sources, unsigned workers) {
  CoverageStudy study;
  for (auto cls : {CoverageClass::Perfect, CoverageClass::Imperfect, CoverageClass::HiddenBySegmax,
                   CoverageClass::Infeasible})
    study.counts[cls] = 0;
  for (DelayMicros c1_ms : c1_values) {
    const DelayUnits c1 = round_delay(c1_ms, graph.grain());
    for (NodeIndex s : sources) {
      for (const auto& rec : coverage_analysis(graph, s, c1, segmax, workers)) {
        study.rows.push_back({s, rec.dest, c1, rec.iters_needed, rec.cls});
        ++study.counts[rec.cls];
        if (rec.iters_needed)
          ++study.iters_histogram[*rec.iters_needed];
        else
          ++study.no_path;
      }
    }
  }
  return study;
}

void write_coverage_csv(std::ostream& out, const CoverageStudy& study, const SrGraph& graph,
                        const std::string& experiment) {
  out << kCoverageHeader << '\n';
  for (const auto& row : study.rows) {
    out << experiment << ',' << graph.label(row.source) << ',' << graph.label(row.dest) << ',' << row.c1_units << ',';
    if (row.iters_needed) out << *row.iters_needed;
    out << ',' << to_string(row.cls) << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace best2cop::experiments
