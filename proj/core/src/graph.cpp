#include "homofair/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace homofair {

int group_count(const Partition& partition) {
  int count = 0;
  for (int g : partition) {
    if (g < 0) throw DomainError("partition has a negative group id");
    count = std::max(count, g + 1);
  }
  return count;
}

std::vector<std::vector<NodeId>> group_members(const Partition& partition) {
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(group_count(partition)));
  for (std::size_t i = 0; i < partition.size(); ++i) {
    members[static_cast<std::size_t>(partition[i])].push_back(static_cast<NodeId>(i));
  }
  return members;
}

Graph::Graph(NodeId node_count, std::span<const Edge> edges, std::vector<std::string> names)
    : node_count_(node_count), names_(std::move(names)) {
  if (node_count < 0) throw DomainError("negative node count");
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(node_count));
    for (NodeId i = 0; i < node_count; ++i) names_.push_back(std::to_string(i));
  } else if (names_.size() != static_cast<std::size_t>(node_count)) {
    throw DomainError("node name table does not match node count");
  }

  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
      throw DomainError("edge endpoint out of range");
    }
    if (!(e.weight >= 0.0)) throw DomainError("edge weight must be nonnegative");
    if (e.u == e.v) continue;
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
  }
  edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) edges_.push_back({key.first, key.second, w});

  std::vector<std::size_t> degree(static_cast<std::size_t>(node_count) + 1, 0);
  for (const Edge& e : edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (NodeId i = 0; i < node_count; ++i) {
    offsets_[static_cast<std::size_t>(i) + 1] = offsets_[static_cast<std::size_t>(i)] + degree[static_cast<std::size_t>(i)];
  }
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.weight};
    adjacency_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.weight};
  }
  for (NodeId i = 0; i < node_count; ++i) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i)]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i) + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

std::span<const Neighbor> Graph::neighbors(NodeId node) const {
  const auto i = static_cast<std::size_t>(node);
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::size_t Graph::neighbor_count(NodeId node) const {
  const auto i = static_cast<std::size_t>(node);
  return offsets_[i + 1] - offsets_[i];
}

double Graph::strength(NodeId node) const {
  double s = 0.0;
  for (const Neighbor& nb : neighbors(node)) s += nb.weight;
  return s;
}

std::optional<NodeId> Graph::find_node(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

bool Graph::fully_labeled() const {
  return has_labels() && std::none_of(labels_.begin(), labels_.end(), [](int g) { return g < 0; });
}

Graph Graph::with_labels(Partition labels, std::vector<std::string> label_names) const {
  if (labels.size() != static_cast<std::size_t>(node_count_)) {
    throw DomainError("label vector does not match node count");
  }
  // Re-densify so that group ids cover exactly the groups still present.
  std::vector<int> remap(label_names.size(), kUnlabeled);
  std::vector<std::string> used_names;
  for (int& g : labels) {
    if (g == kUnlabeled) continue;
    if (g < 0 || static_cast<std::size_t>(g) >= label_names.size()) {
      throw DomainError("label id without a name");
    }
    auto& slot = remap[static_cast<std::size_t>(g)];
    if (slot == kUnlabeled) {
      slot = static_cast<int>(used_names.size());
      used_names.push_back(label_names[static_cast<std::size_t>(g)]);
    }
    g = slot;
  }
  Graph out = *this;
  out.labels_ = std::move(labels);
  out.label_names_ = std::move(used_names);
  return out;
}

Graph Graph::induced_subgraph(std::span<const NodeId> keep) const {
  std::vector<NodeId> new_id(static_cast<std::size_t>(node_count_), -1);
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const NodeId old = keep[k];
    if (old < 0 || old >= node_count_) throw DomainError("subgraph node out of range");
    if (k > 0 && keep[k - 1] >= old) throw DomainError("subgraph nodes must be sorted and unique");
    new_id[static_cast<std::size_t>(old)] = static_cast<NodeId>(k);
    names.push_back(names_[static_cast<std::size_t>(old)]);
  }
  std::vector<Edge> edges;
  for (const Edge& e : edges_) {
    const NodeId a = new_id[static_cast<std::size_t>(e.u)];
    const NodeId b = new_id[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) edges.push_back({a, b, e.weight});
  }
  Graph out(static_cast<NodeId>(keep.size()), edges, std::move(names));
  if (has_labels()) {
    Partition labels;
    labels.reserve(keep.size());
    for (NodeId old : keep) labels.push_back(labels_[static_cast<std::size_t>(old)]);
    out = out.with_labels(std::move(labels), label_names_);
  }
  return out;
}

Partition connected_components(const Graph& graph) {
  const auto n = static_cast<std::size_t>(graph.node_count());
  Partition comp(n, -1);
  int next = 0;
  std::vector<NodeId> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : graph.neighbors(u)) {
        auto& c = comp[static_cast<std::size_t>(nb.node)];
        if (c < 0) {
          c = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace homofair
