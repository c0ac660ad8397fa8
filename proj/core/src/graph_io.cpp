#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "homofair/graph.hpp"
#include "text.hpp"

namespace homofair {
namespace {

using detail::Delimiter;

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_data_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!detail::is_comment_or_blank(text)) lines.push_back({number, text});
  }
  return lines;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return in;
}

class NameTable {
 public:
  NodeId intern(std::string_view name) {
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<NodeId>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }
  std::vector<std::string> release() { return std::move(names_); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> names_;
};

std::unordered_map<std::string, NodeId> name_index(const Graph& graph) {
  std::unordered_map<std::string, NodeId> index;
  const auto& names = graph.node_names();
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<NodeId>(i));
  return index;
}

// The first data line is a header when it cannot be data while the line
// after it can: a non-numeric weight, or non-integer ids above integer ids.
bool looks_like_edge_header(const std::vector<Line>& lines, Delimiter delim) {
  if (lines.empty()) return false;
  const auto first = detail::split(lines[0].text, delim);
  if (first.size() >= 3 && !detail::parse_double(first[2])) return true;
  if (first.size() < 2 || lines.size() < 2) return false;
  const auto second = detail::split(lines[1].text, delim);
  if (second.size() < 2) return false;
  const bool first_ints = detail::is_integer(first[0]) && detail::is_integer(first[1]);
  const bool second_ints = detail::is_integer(second[0]) && detail::is_integer(second[1]);
  return !first_ints && second_ints;
}

// A first line whose id is unknown is a header only if it reads like one;
// otherwise it is reported as an unknown node.
bool looks_like_label_header(const std::string& line, Delimiter delim, const Graph& graph,
                             const std::unordered_map<std::string, NodeId>& index) {
  const auto first = detail::split(line, delim);
  if (first.empty() || index.contains(std::string(first[0]))) return false;
  std::string token(first[0]);
  std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) { return std::tolower(c); });
  static const char* const kHeaderNames[] = {"node", "node_id", "nodeid", "id", "user", "user_id", "name", "vertex"};
  if (std::find(std::begin(kHeaderNames), std::end(kHeaderNames), token) != std::end(kHeaderNames)) return true;
  const auto& names = graph.node_names();
  const bool integer_ids = std::all_of(names.begin(), names.end(), [](const std::string& s) { return detail::is_integer(s); });
  return integer_ids && !detail::is_integer(first[0]);
}

}  // namespace

Graph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
  const auto lines = read_data_lines(in);
  if (lines.empty()) throw ParseError("edge list is empty", 0);
  const Delimiter delim = detail::detect_delimiter(lines[0].text);
  const std::size_t start = looks_like_edge_header(lines, delim) ? 1 : 0;

  NameTable names;
  // Per unordered pair: total weight listed as (lo, hi) and as (hi, lo).
  std::map<std::pair<NodeId, NodeId>, std::pair<double, double>> pairs;
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto tokens = detail::split(lines[k].text, delim);
    if (tokens.size() < 2 || tokens.size() > 3 || tokens[0].empty() || tokens[1].empty()) {
      throw ParseError("expected 'u v [weight]'", lines[k].number);
    }
    double weight = 1.0;
    if (tokens.size() == 3) {
      const auto w = detail::parse_double(tokens[2]);
      if (!w || !(*w >= 0.0)) throw ParseError("invalid edge weight", lines[k].number);
      weight = *w;
    }
    const NodeId u = names.intern(tokens[0]);
    const NodeId v = names.intern(tokens[1]);
    if (u == v) continue;
    auto& slot = pairs[{std::min(u, v), std::max(u, v)}];
    (u < v ? slot.first : slot.second) += weight;
  }
  if (pairs.empty()) throw ParseError("edge list contains no edges", 0);

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, w] : pairs) {
    const double weight = options.directed_as_undirected ? std::max(w.first, w.second) : w.first + w.second;
    edges.push_back({key.first, key.second, weight});
  }
  const auto n = static_cast<NodeId>(names.size());
  return Graph(n, edges, names.release());
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  auto in = open_or_throw(path);
  return parse_edge_list(in, options);
}

Graph parse_labels(std::istream& in, const Graph& graph) {
  const auto lines = read_data_lines(in);
  if (lines.empty()) throw ParseError("label file is empty", 0);
  const Delimiter delim = detail::detect_delimiter(lines[0].text);
  const auto index = name_index(graph);

  const std::size_t start = looks_like_label_header(lines[0].text, delim, graph, index) ? 1 : 0;

  Partition labels(static_cast<std::size_t>(graph.node_count()), kUnlabeled);
  std::vector<std::string> label_names;
  std::unordered_map<std::string, int> label_ids;
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto tokens = detail::split(lines[k].text, delim);
    if (tokens.size() != 2 || tokens[1].empty()) {
      throw ParseError("expected 'node_id,label'", lines[k].number);
    }
    // Labels must name categories; fractional numbers indicate a
    // continuous attribute.
    if (!detail::is_integer(tokens[1]) && detail::parse_double(tokens[1])) {
      throw ParseError("label '" + std::string(tokens[1]) + "' is not categorical", lines[k].number);
    }
    const auto it = index.find(std::string(tokens[0]));
    if (it == index.end()) {
      throw ParseError("unknown node id '" + std::string(tokens[0]) + "'", lines[k].number);
    }
    auto [lit, inserted] = label_ids.try_emplace(std::string(tokens[1]), static_cast<int>(label_names.size()));
    if (inserted) label_names.emplace_back(tokens[1]);
    auto& slot = labels[static_cast<std::size_t>(it->second)];
    if (slot != kUnlabeled && slot != lit->second) {
      throw ParseError("conflicting labels for node '" + std::string(tokens[0]) + "'", lines[k].number);
    }
    slot = lit->second;
  }
  return graph.with_labels(std::move(labels), std::move(label_names));
}

Graph load_labels(const std::filesystem::path& path, const Graph& graph) {
  auto in = open_or_throw(path);
  return parse_labels(in, graph);
}

RatingTable parse_ratings(std::istream& in, const Graph& graph) {
  const auto lines = read_data_lines(in);
  if (lines.empty()) throw ParseError("ratings file is empty", 0);
  const Delimiter delim = detail::detect_delimiter(lines[0].text);
  const auto index = name_index(graph);

  std::size_t start = 0;
  {
    const auto first = detail::split(lines[0].text, delim);
    if (first.size() == 3 && !detail::parse_double(first[2])) start = 1;
  }
  RatingTable table;
  std::unordered_map<std::string, std::int32_t> item_ids;
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto tokens = detail::split(lines[k].text, delim);
    if (tokens.size() != 3) throw ParseError("expected 'user_id,item_id,count'", lines[k].number);
    const auto count = detail::parse_double(tokens[2]);
    if (!count || !(*count >= 0.0)) throw ParseError("invalid rating count", lines[k].number);
    const auto user = index.find(std::string(tokens[0]));
    if (user == index.end()) continue;
    auto [it, inserted] = item_ids.try_emplace(std::string(tokens[1]), static_cast<std::int32_t>(table.item_names.size()));
    if (inserted) table.item_names.emplace_back(tokens[1]);
    table.entries.push_back({user->second, it->second, *count});
  }
  return table;
}

RatingTable load_ratings(const std::filesystem::path& path, const Graph& graph) {
  auto in = open_or_throw(path);
  return parse_ratings(in, graph);
}

std::vector<double> RatingTable::per_user_counts(NodeId node_count) const {
  std::vector<std::vector<std::int32_t>> items(static_cast<std::size_t>(node_count));
  for (const Rating& r : entries) {
    if (r.user >= 0 && r.user < node_count && r.count > 0.0) items[static_cast<std::size_t>(r.user)].push_back(r.item);
  }
  std::vector<double> counts(static_cast<std::size_t>(node_count), 0.0);
  for (std::size_t u = 0; u < items.size(); ++u) {
    auto& list = items[u];
    std::sort(list.begin(), list.end());
    counts[u] = static_cast<double>(std::unique(list.begin(), list.end()) - list.begin());
  }
  return counts;
}

RatingTable RatingTable::remap_users(const Graph& from, const Graph& to) const {
  const auto index = name_index(to);
  std::vector<NodeId> new_id(static_cast<std::size_t>(from.node_count()), -1);
  for (NodeId i = 0; i < from.node_count(); ++i) {
    const auto it = index.find(from.node_names()[static_cast<std::size_t>(i)]);
    if (it != index.end()) new_id[static_cast<std::size_t>(i)] = it->second;
  }
  RatingTable out;
  out.item_names = item_names;
  for (const Rating& r : entries) {
    const NodeId u = new_id[static_cast<std::size_t>(r.user)];
    if (u >= 0) out.entries.push_back({u, r.item, r.count});
  }
  return out;
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  const auto& names = graph.node_names();
  for (const Edge& e : graph.edges()) {
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, e.weight).ptr;
    out << names[static_cast<std::size_t>(e.u)] << ' ' << names[static_cast<std::size_t>(e.v)] << ' '
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

nlohmann::json graph_manifest(const Graph& graph) {
  nlohmann::json j;
  j["n"] = graph.node_count();
  j["edges"] = graph.edge_count();
  if (graph.has_labels()) {
    std::vector<int> sizes(graph.label_names().size(), 0);
    for (int g : graph.labels()) {
      if (g >= 0) ++sizes[static_cast<std::size_t>(g)];
    }
    nlohmann::json groups = nlohmann::json::object();
    for (std::size_t g = 0; g < sizes.size(); ++g) groups[graph.label_names()[g]] = sizes[g];
    j["group_sizes"] = groups;
    try {
      j["assortativity"] = assortativity(graph);
    } catch (const DomainError&) {
      j["assortativity"] = nullptr;
    }
  }
  return j;
}

void export_graph(const Graph& graph, const std::filesystem::path& prefix) {
  const auto with_suffix = [&](const char* suffix) { return std::filesystem::path(prefix.string() + suffix); };
  {
    std::ofstream out(with_suffix(".edges"));
    if (!out) throw Error("cannot write " + with_suffix(".edges").string());
    write_edge_list(graph, out);
  }
  if (graph.has_labels()) {
    std::ofstream out(with_suffix(".labels.csv"));
    out << "node_id,label\n";
    for (NodeId i = 0; i < graph.node_count(); ++i) {
      const int g = graph.labels()[static_cast<std::size_t>(i)];
      if (g >= 0) out << graph.node_names()[static_cast<std::size_t>(i)] << ',' << graph.label_names()[static_cast<std::size_t>(g)] << '\n';
    }
  }
  std::ofstream out(with_suffix(".json"));
  out << graph_manifest(graph).dump(2) << '\n';
}

}  // namespace homofair
