#include <algorithm>
#include <random>

#include "homofair/graph.hpp"

namespace homofair {
namespace {

std::vector<NodeId> nodes_where(NodeId n, auto&& keep) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < n; ++i) {
    if (keep(i)) out.push_back(i);
  }
  return out;
}

// One pass of ratings -> degree -> group size -> largest component.
// `ratings` is indexed by the node ids of `graph`.
Graph filter_once(const Graph& graph, const PreprocessConfig& cfg, std::span<const double> ratings) {
  Graph g = graph;
  std::vector<double> carried(ratings.begin(), ratings.end());
  const auto restrict_to = [&](const std::vector<NodeId>& keep) {
    if (keep.size() == static_cast<std::size_t>(g.node_count())) return;
    if (!carried.empty()) {
      std::vector<double> next;
      next.reserve(keep.size());
      for (NodeId i : keep) next.push_back(carried[static_cast<std::size_t>(i)]);
      carried = std::move(next);
    }
    g = g.induced_subgraph(keep);
  };

  if (cfg.min_ratings > 0 && !carried.empty()) {
    restrict_to(nodes_where(g.node_count(), [&](NodeId i) { return carried[static_cast<std::size_t>(i)] >= cfg.min_ratings; }));
  }
  if (cfg.min_degree > 0) {
    restrict_to(nodes_where(g.node_count(), [&](NodeId i) {
      return g.neighbor_count(i) >= static_cast<std::size_t>(cfg.min_degree);
    }));
  }
  if (cfg.min_group_size > 0 && g.has_labels()) {
    std::vector<int> sizes(g.label_names().size(), 0);
    for (int lab : g.labels()) {
      if (lab >= 0) ++sizes[static_cast<std::size_t>(lab)];
    }
    restrict_to(nodes_where(g.node_count(), [&](NodeId i) {
      const int lab = g.labels()[static_cast<std::size_t>(i)];
      return lab >= 0 && sizes[static_cast<std::size_t>(lab)] >= cfg.min_group_size;
    }));
  }
  if (cfg.take_largest_cc && g.node_count() > 0) {
    const Partition comp = connected_components(g);
    std::vector<int> sizes(static_cast<std::size_t>(group_count(comp)), 0);
    for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
    // Ties go to the component holding the smallest node id.
    const int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    restrict_to(nodes_where(g.node_count(), [&](NodeId i) { return comp[static_cast<std::size_t>(i)] == largest; }));
  }
  return g;
}

}  // namespace

Graph preprocess(const Graph& graph, const PreprocessConfig& cfg, std::optional<std::span<const double>> ratings) {
  if (cfg.min_degree < 0 || cfg.min_group_size < 0 || cfg.min_ratings < 0) {
    throw DomainError("preprocess thresholds must be nonnegative");
  }
  if (ratings && ratings->size() != static_cast<std::size_t>(graph.node_count())) {
    throw DomainError("rating counts do not match node count");
  }
  if (cfg.min_ratings > 0 && !ratings) throw DomainError("min_ratings set but no rating counts given");

  // Ratings follow nodes through the filters by name.
  std::vector<double> by_id = ratings ? std::vector<double>(ratings->begin(), ratings->end()) : std::vector<double>{};
  Graph current = graph;
  while (true) {
    Graph next = filter_once(current, cfg, by_id);
    if (next.node_count() == 0) throw DomainError("preprocessing removed every node");
    const bool unchanged = next.node_count() == current.node_count() && next.edge_count() == current.edge_count();
    if (!by_id.empty() && next.node_count() != current.node_count()) {
      std::vector<double> remapped;
      remapped.reserve(static_cast<std::size_t>(next.node_count()));
      std::size_t cursor = 0;
      const auto& old_names = current.node_names();
      // induced_subgraph preserves relative order, so a merge walk suffices
      for (const auto& name : next.node_names()) {
        while (old_names[cursor] != name) ++cursor;
        remapped.push_back(by_id[cursor]);
      }
      by_id = std::move(remapped);
    }
    current = std::move(next);
    if (unchanged || !cfg.until_stable) break;
  }
  return current;
}

double assortativity(const Graph& graph) {
  if (!graph.fully_labeled()) throw DomainError("assortativity requires every node to be labeled");
  if (graph.edge_count() == 0) throw DomainError("assortativity requires at least one edge");
  const auto k = graph.label_names().size();
  // Symmetric mixing matrix over edge ends: every edge counted both ways.
  Matrix mixing = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (const Edge& e : graph.edges()) {
    const auto a = graph.labels()[static_cast<std::size_t>(e.u)];
    const auto b = graph.labels()[static_cast<std::size_t>(e.v)];
    mixing(a, b) += 1.0;
    mixing(b, a) += 1.0;
  }
  mixing /= mixing.sum();
  const Vector a = mixing.rowwise().sum();
  const double expected = a.squaredNorm();
  const double denom = 1.0 - expected;
  if (denom <= 1e-15) throw DomainError("assortativity undefined: all edge ends fall in one group");
  return (mixing.trace() - expected) / denom;
}

SBMParams SBMParams::homophilous(std::vector<int> block_sizes, double p_in, double p_out, std::uint64_t seed) {
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw DomainError("homophilous SBM needs 0 <= p_out <= p_in <= 1");
  }
  return SBMParams{std::move(block_sizes), p_in, p_out, seed};
}

Graph sbm_sample(const SBMParams& params) {
  if (params.block_sizes.empty()) throw DomainError("SBM needs at least one block");
  if (!(params.p_in >= 0.0 && params.p_in <= 1.0 && params.p_out >= 0.0 && params.p_out <= 1.0)) {
    throw DomainError("SBM probabilities must lie in [0, 1]");
  }
  Partition block;
  for (std::size_t b = 0; b < params.block_sizes.size(); ++b) {
    if (params.block_sizes[b] <= 0) throw DomainError("SBM block sizes must be positive");
    block.insert(block.end(), static_cast<std::size_t>(params.block_sizes[b]), static_cast<int>(b));
  }
  const auto n = static_cast<NodeId>(block.size());
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)] ? params.p_in : params.p_out;
      if (unif(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  std::vector<std::string> label_names;
  for (std::size_t b = 0; b < params.block_sizes.size(); ++b) label_names.push_back(std::to_string(b));
  return Graph(n, edges).with_labels(std::move(block), std::move(label_names));
}

}  // namespace homofair
