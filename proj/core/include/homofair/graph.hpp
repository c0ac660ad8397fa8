#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homofair/common.hpp"

namespace homofair {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 1.0;
};

/// Undirected weighted graph with dense node ids and optional group labels.
///
/// Immutable once built. Edges are stored canonically (u < v) and sorted;
/// the adjacency is a CSR view holding both directions. Node names keep the
/// identifiers found in the input file so results can be mapped back.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list: self-loops are dropped,
  /// (u, v) and (v, u) are the same edge, and duplicate weights are summed.
  Graph(NodeId node_count, std::span<const Edge> edges, std::vector<std::string> names = {});

  NodeId node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(NodeId node) const;
  std::size_t neighbor_count(NodeId node) const;
  double strength(NodeId node) const;  // weighted degree

  /// Original identifier of each node (the id remap table).
  const std::vector<std::string>& node_names() const noexcept { return names_; }
  std::optional<NodeId> find_node(const std::string& name) const;

  bool has_labels() const noexcept { return !labels_.empty(); }
  /// Group id per node; kUnlabeled where no label was given.
  const Partition& labels() const noexcept { return labels_; }
  /// Original label string of each group id.
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  bool fully_labeled() const;

  /// Copy of this graph with labels attached. Group ids are re-densified in
  /// order of first appearance of each name in `label_names` that is used.
  Graph with_labels(Partition labels, std::vector<std::string> label_names) const;

  /// Subgraph induced by `keep` (sorted ascending, unique); node ids are
  /// reassigned densely in that order, names and labels are carried along.
  Graph induced_subgraph(std::span<const NodeId> keep) const;

 private:
  NodeId node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::string> names_;
  Partition labels_;
  std::vector<std::string> label_names_;
};

/// Component id per node, ids assigned in order of smallest member.
Partition connected_components(const Graph& graph);

// ---------------------------------------------------------------------------
// Ingestion and export

struct EdgeListOptions {
  /// Input lists directed arcs; a reciprocal pair becomes one undirected edge
  /// carrying the larger of the two weights. Otherwise (v, u) repeats (u, v).
  bool directed_as_undirected = false;
};

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});
Graph parse_edge_list(std::istream& in, const EdgeListOptions& options = {});

/// Attaches labels from a `node_id,label` file. Header row optional.
Graph load_labels(const std::filesystem::path& path, const Graph& graph);
Graph parse_labels(std::istream& in, const Graph& graph);

struct Rating {
  NodeId user = 0;
  std::int32_t item = 0;
  double count = 0.0;
};

/// User-item interactions read from `user_id,item_id,count`. Users absent
/// from the graph are skipped; items are densified in order of appearance.
struct RatingTable {
  std::vector<Rating> entries;
  std::vector<std::string> item_names;

  /// Number of distinct items rated by each node.
  std::vector<double> per_user_counts(NodeId node_count) const;
  /// Restricts to the users kept by a preprocess step (old ids -> new ids).
  RatingTable remap_users(const Graph& from, const Graph& to) const;
};

RatingTable load_ratings(const std::filesystem::path& path, const Graph& graph);
RatingTable parse_ratings(std::istream& in, const Graph& graph);

/// `u v weight` per line using the node names.
void write_edge_list(const Graph& graph, std::ostream& out);

/// n, |E|, group sizes and (when defined) assortativity.
nlohmann::json graph_manifest(const Graph& graph);

/// Writes `<prefix>.edges`, `<prefix>.labels.csv` (if labeled) and
/// `<prefix>.json`.
void export_graph(const Graph& graph, const std::filesystem::path& prefix);

// ---------------------------------------------------------------------------
// Preprocessing and statistics

struct PreprocessConfig {
  int min_degree = 0;
  int min_group_size = 0;
  int min_ratings = 0;  // 0 disables
  bool take_largest_cc = true;
  /// Repeat the filter sequence until nothing changes.
  bool until_stable = true;
};

/// Filters in the order ratings -> degree -> group size -> largest
/// component. With `until_stable` the sequence is repeated to a fixed point.
Graph preprocess(const Graph& graph, const PreprocessConfig& cfg,
                 std::optional<std::span<const double>> ratings = std::nullopt);

/// Newman's categorical assortativity over edge endpoints (unweighted).
double assortativity(const Graph& graph);

// ---------------------------------------------------------------------------
// Stochastic block model

struct SBMParams {
  std::vector<int> block_sizes;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;

  /// Checked constructor for assortative instances (p_out <= p_in).
  static SBMParams homophilous(std::vector<int> block_sizes, double p_in, double p_out,
                               std::uint64_t seed);
};

/// Samples every pair i < j independently; labels are the block ids.
Graph sbm_sample(const SBMParams& params);

// ---------------------------------------------------------------------------
// Community detection

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

Partition louvain(const Graph& graph, const LouvainOptions& options = {});

/// Newman-Girvan modularity with resolution; isolated nodes contribute 0.
double modularity(const Graph& graph, const Partition& partition, double resolution = 1.0);

}  // namespace homofair
