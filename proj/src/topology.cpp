#include "best2cop/topology.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

namespace best2cop {

namespace {

bool valid_label(std::string_view label) {
  if (label.empty() || label.front() == '@') return false;
  return std::none_of(label.begin(), label.end(),
                      [](char c) { return c == '#' || std::isspace(static_cast<unsigned char>(c)); });
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

DelayMicros parse_delay_ms(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty delay");
  if (text.front() == '-') throw std::invalid_argument("negative delay '" + std::string(text) + "'");
  if (text.front() == '+') text.remove_prefix(1);
  auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument("malformed delay '" + std::string(text) + "'");
  if (frac.size() > 3)
    throw std::invalid_argument("delay '" + std::string(text) + "' is finer than 0.001 ms");
  auto digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!digits(whole) || !digits(frac)) throw std::invalid_argument("malformed delay '" + std::string(text) + "'");

  std::uint64_t ms = 0;
  if (!whole.empty()) {
    auto parsed = parse_int<std::uint64_t>(whole);
    if (!parsed || *parsed > (UINT64_MAX / 1000) - 1000)
      throw std::invalid_argument("delay '" + std::string(text) + "' out of range");
    ms = *parsed;
  }
  std::uint64_t micros = 0;
  for (std::size_t i = 0; i < 3; ++i) micros = micros * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  return DelayMicros{ms * 1000 + micros};
}

std::string format_delay_ms(DelayMicros delay) {
  std::string out = std::to_string(delay.value / 1000);
  std::uint64_t frac = delay.value % 1000;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += '.' + digits;
  }
  return out;
}

TopologyError::TopologyError(const std::string& what, std::size_t line)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

NodeIndex RawTopology::add_node(std::string label) {
  if (!valid_label(label)) throw TopologyError("invalid node label '" + label + "'");
  if (index_.count(label)) throw TopologyError("duplicate node '" + label + "'");
  auto id = static_cast<NodeIndex>(labels_.size());
  index_.emplace(label, id);
  labels_.push_back(std::move(label));
  return id;
}

NodeIndex RawTopology::node(std::string_view label) {
  if (auto found = find(label)) return *found;
  return add_node(std::string(label));
}

std::optional<NodeIndex> RawTopology::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool RawTopology::has_link(NodeIndex src, NodeIndex dst, std::uint32_t interface) const {
  auto it = interfaces_.find(pair_key(src, dst));
  return it != interfaces_.end() && it->second.count(interface) != 0;
}

std::uint32_t RawTopology::next_interface(NodeIndex src, NodeIndex dst) const {
  auto it = next_interface_.find(pair_key(src, dst));
  return it == next_interface_.end() ? 0 : it->second;
}

void RawTopology::add_link(const RawLink& link) {
  if (link.src >= node_count() || link.dst >= node_count())
    throw TopologyError("link endpoint is not a node of the topology");
  if (link.src == link.dst) throw TopologyError("self-link on node '" + labels_[link.src] + "'");
  if (link.igp_cost < 1 || link.igp_cost > kMaxIgpCost)
    throw TopologyError("IGP cost " + std::to_string(link.igp_cost) + " outside [1, 2^24]");
  auto key = pair_key(link.src, link.dst);
  if (!interfaces_[key].insert(link.interface).second)
    throw TopologyError("duplicate link " + labels_[link.src] + " -> " + labels_[link.dst] + " interface " +
                        std::to_string(link.interface));
  auto& next = next_interface_[key];
  next = std::max(next, link.interface + 1);
  links_.push_back(link);
}

RawTopology parse_topology(std::istream& in, TopologyFormat format) {
  if (format != TopologyFormat::EdgeList) throw TopologyError("unsupported topology format");
  RawTopology topology;
  bool undirected = false;
  bool seen_record = false;
  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = raw_line;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (fields[0].front() == '@') {
      if (fields[0] == "@undirected" && fields.size() == 1) {
        if (seen_record) throw TopologyError("@undirected must precede every link record", line_no);
        undirected = true;
      } else if (fields[0] == "@node" && fields.size() == 2) {
        try {
          topology.add_node(std::string(fields[1]));
        } catch (const TopologyError& e) {
          throw TopologyError(e.what(), line_no);
        }
      } else {
        throw TopologyError("syntax error: unknown directive '" + std::string(fields[0]) + "'", line_no);
      }
      continue;
    }

    if (fields.size() != 4 && fields.size() != 5)
      throw TopologyError("syntax error: expected '<src> <dst> [<interface>] <delay-ms> <igp-cost>'", line_no);
    seen_record = true;
    const bool has_iface = fields.size() == 5;
    std::optional<std::uint32_t> iface;
    if (has_iface) {
      iface = parse_int<std::uint32_t>(fields[2]);
      if (!iface) throw TopologyError("syntax error: bad interface '" + std::string(fields[2]) + "'", line_no);
    }
    DelayMicros delay;
    try {
      delay = parse_delay_ms(fields[has_iface ? 3 : 2]);
    } catch (const std::invalid_argument& e) {
      throw TopologyError(e.what(), line_no);
    }
    auto cost_text = fields[has_iface ? 4 : 3];
    auto cost = parse_int<std::uint64_t>(cost_text);
    if (!cost) {
      if (!cost_text.empty() && cost_text.front() == '-')
        throw TopologyError("IGP cost " + std::string(cost_text) + " outside [1, 2^24]", line_no);
      throw TopologyError("syntax error: bad IGP cost '" + std::string(cost_text) + "'", line_no);
    }

    try {
      NodeIndex src = topology.node(fields[0]);
      NodeIndex dst = topology.node(fields[1]);
      std::uint32_t id = iface ? *iface
                               : (undirected ? std::max(topology.next_interface(src, dst),
                                                        topology.next_interface(dst, src))
                                             : topology.next_interface(src, dst));
      topology.add_link({src, dst, id, delay, *cost});
      if (undirected) topology.add_link({dst, src, id, delay, *cost});
    } catch (const TopologyError& e) {
      throw TopologyError(e.what(), line_no);
    }
  }
  if (topology.node_count() == 0) throw TopologyError("empty topology");
  return topology;
}

RawTopology parse_topology_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_topology(in);
}

RawTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file '" + path + "'");
  return parse_topology(in);
}

void write_topology(const RawTopology& topology, std::ostream& out) {
  out << "# best2cop edge-list: " << topology.node_count() << " nodes, " << topology.link_count()
      << " links\n";
  for (const auto& label : topology.labels()) out << "@node " << label << '\n';
  for (const auto& link : topology.links()) {
    out << topology.label(link.src) << ' ' << topology.label(link.dst) << ' ' << link.interface << ' '
        << format_delay_ms(link.delay) << ' ' << link.igp_cost << '\n';
  }
}

std::string write_topology_text(const RawTopology& topology) {
  std::ostringstream out;
  write_topology(topology, out);
  return out.str();
}

RawTopology generate_random_raw(std::size_t n_nodes, std::size_t n_links, DelayMicros max_delay,
                                std::uint64_t seed) {
  if (n_nodes == 0) throw std::invalid_argument("a topology needs at least one node");
  if (max_delay.value == 0) throw std::invalid_argument("maximum delay must be positive");
  if (n_nodes == 1 && n_links != 0) throw std::invalid_argument("a single node cannot carry links");
  if (n_nodes >= 2 && n_links < n_nodes)
    throw std::invalid_argument("cannot strongly connect " + std::to_string(n_nodes) + " nodes with " +
                                std::to_string(n_links) + " directed links");

  std::mt19937_64 structure_rng(seed);
  std::mt19937_64 delay_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<IgpCost> cost_dist(1, kMaxIgpCost);
  std::uniform_int_distribution<std::uint64_t> delay_dist(1, max_delay.value);

  RawTopology topology;
  for (std::size_t i = 0; i < n_nodes; ++i) topology.add_node("v" + std::to_string(i));
  if (n_nodes == 1) return topology;

  auto add = [&](NodeIndex src, NodeIndex dst) {
    IgpCost cost = cost_dist(structure_rng);
    topology.add_link({src, dst, topology.next_interface(src, dst), DelayMicros{delay_dist(delay_rng)}, cost});
  };

  std::vector<NodeIndex> order(n_nodes);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::shuffle(order.begin(), order.end(), structure_rng);
  for (std::size_t i = 0; i < n_nodes; ++i) add(order[i], order[(i + 1) % n_nodes]);

  std::uniform_int_distribution<NodeIndex> node_dist(0, static_cast<NodeIndex>(n_nodes - 1));
  for (std::size_t i = n_nodes; i < n_links; ++i) {
    NodeIndex src = node_dist(structure_rng);
    NodeIndex dst = node_dist(structure_rng);
    while (dst == src) dst = node_dist(structure_rng);
    add(src, dst);
  }
  return topology;
}

bool is_strongly_connected(const RawTopology& topology) {
  const std::size_t n = topology.node_count();
  if (n <= 1) return true;
  std::vector<std::vector<NodeIndex>> fwd(n), rev(n);
  for (const auto& link : topology.links()) {
    fwd[link.src].push_back(link.dst);
    rev[link.dst].push_back(link.src);
  }
  auto reaches_all = [n](const std::vector<std::vector<NodeIndex>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<NodeIndex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeIndex u = stack.back();
      stack.pop_back();
      for (NodeIndex v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

}  // namespace best2cop
