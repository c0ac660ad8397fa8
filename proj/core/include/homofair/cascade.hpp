#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homofair/common.hpp"
#include "homofair/graph.hpp"
#include "homofair/inequality.hpp"
#include "homofair/kernel.hpp"

namespace homofair {

struct CascadeConfig {
  double transmission_p = 0.1;
  int num_samples = 1000;
  std::uint64_t seed = 0;
};

struct ActivationEstimate {
  Vector probs;      // p_v, exactly 1 on seeds
  Vector std_error;  // sqrt(p (1 - p) / samples)
  int samples = 0;
};

/// Monte Carlo activation probabilities of the independent cascade, using
/// live-edge samples (each edge kept with probability transmission_p).
/// The same cfg draws the same samples regardless of the seed set.
ActivationEstimate estimate_activation(const Graph& graph, std::span<const NodeId> seeds, const CascadeConfig& cfg);

inline constexpr std::size_t kExactActivationMaxEdges = 20;

/// Exact probabilities by enumerating every live-edge subgraph.
Vector exact_activation(const Graph& graph, std::span<const NodeId> seeds, double transmission_p);

enum class ObjectiveKind {
  group_free,         // min_i A(K, p)_i
  individual,         // min_v p_v
  community_maximin,  // min_i A(K, p)_i with a community kernel
  community_welfare,  // sum_i A(K, sqrt(p))_i
  reach,              // sum_v p_v
};

ObjectiveKind parse_objective_kind(const std::string& name);
std::string to_string(ObjectiveKind kind);
bool needs_kernel(ObjectiveKind kind);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::reach;
  std::optional<Kernel> kernel;

  double operator()(const Vector& probs) const;
};

struct GreedyResult {
  std::vector<NodeId> seeds;   // selection order
  std::vector<double> values;  // objective after each addition
};

/// Greedy seed selection. Each iteration draws one fresh batch of live-edge
/// samples shared by all candidates; ties go to the smallest node id.
GreedyResult greedy_select(const Graph& graph, int budget, const Objective& objective, const CascadeConfig& cfg);

struct SeedReportRow {
  int budget = 0;
  NodeId seed = 0;
  double delta0 = 0.0;  // partition between-group inequality of p
  double reach = 0.0;   // sum of p
};

/// Re-estimates activation for every prefix of `seeds` with cfg's samples.
std::vector<SeedReportRow> evaluate_seeds(const Graph& graph, std::span<const NodeId> seeds, const Partition& labels,
                                          const CascadeConfig& cfg, const EntropyConfig& entropy = {});

}  // namespace homofair
