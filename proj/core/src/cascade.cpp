#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "homofair/cascade.hpp"

namespace homofair {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Connected components of one live-edge graph, with member lists.
struct LiveSample {
  std::vector<int> comp;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> members;

  std::span<const NodeId> component(int c) const {
    return {members.data() + offsets[static_cast<std::size_t>(c)],
            offsets[static_cast<std::size_t>(c) + 1] - offsets[static_cast<std::size_t>(c)]};
  }
  int component_count() const { return static_cast<int>(offsets.size()) - 1; }
};

LiveSample draw_sample(const Graph& graph, double p, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(graph.node_count());
  std::mt19937_64 rng(seed);
  UnionFind uf(n);
  for (const Edge& e : graph.edges()) {
    if (unit_uniform(rng) < p) uf.unite(e.u, e.v);
  }
  LiveSample s;
  s.comp.assign(n, -1);
  std::vector<int> root_id(n, -1);
  int count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& id = root_id[static_cast<std::size_t>(uf.find(static_cast<int>(v)))];
    if (id < 0) id = count++;
    s.comp[v] = id;
  }
  s.offsets.assign(static_cast<std::size_t>(count) + 1, 0);
  for (int c : s.comp) ++s.offsets[static_cast<std::size_t>(c) + 1];
  std::partial_sum(s.offsets.begin(), s.offsets.end(), s.offsets.begin());
  s.members.resize(n);
  std::vector<std::size_t> fill(s.offsets.begin(), s.offsets.end() - 1);
  for (std::size_t v = 0; v < n; ++v) s.members[fill[static_cast<std::size_t>(s.comp[v])]++] = static_cast<NodeId>(v);
  return s;
}

std::vector<LiveSample> draw_batch(const Graph& graph, const CascadeConfig& cfg, std::uint64_t stream) {
  std::vector<LiveSample> batch;
  batch.reserve(static_cast<std::size_t>(cfg.num_samples));
  for (int t = 0; t < cfg.num_samples; ++t) {
    batch.push_back(draw_sample(graph, cfg.transmission_p, derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(t))));
  }
  return batch;
}

void check_config(const CascadeConfig& cfg) {
  if (!(cfg.transmission_p > 0.0 && cfg.transmission_p <= 1.0)) throw DomainError("transmission_p must lie in (0, 1]");
  if (cfg.num_samples < 1) throw DomainError("num_samples must be at least 1");
}

void check_seeds(const Graph& graph, std::span<const NodeId> seeds) {
  if (seeds.empty()) throw DomainError("seed set is empty");
  for (NodeId s : seeds) {
    if (s < 0 || s >= graph.node_count()) throw DomainError("seed node out of range");
  }
}

// Number of samples in which each node is reached from `seeds`.
Vector reached_counts(const std::vector<LiveSample>& batch, std::span<const NodeId> seeds, NodeId n) {
  Vector counts = Vector::Zero(n);
  std::vector<char> covered;
  for (const LiveSample& s : batch) {
    covered.assign(static_cast<std::size_t>(s.component_count()), 0);
    for (NodeId seed : seeds) {
      auto& flag = covered[static_cast<std::size_t>(s.comp[static_cast<std::size_t>(seed)])];
      if (flag) continue;
      flag = 1;
      for (NodeId v : s.component(s.comp[static_cast<std::size_t>(seed)])) counts[v] += 1.0;
    }
  }
  return counts;
}

ActivationEstimate estimate_from_counts(const Vector& counts, int samples) {
  ActivationEstimate est;
  est.samples = samples;
  est.probs = counts / static_cast<double>(samples);
  est.std_error = (est.probs.array() * (1.0 - est.probs.array()) / static_cast<double>(samples)).sqrt().matrix();
  return est;
}

constexpr std::uint64_t kEstimateStream = 0;

std::string normalized(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

}  // namespace

ActivationEstimate estimate_activation(const Graph& graph, std::span<const NodeId> seeds, const CascadeConfig& cfg) {
  check_config(cfg);
  check_seeds(graph, seeds);
  const auto batch = draw_batch(graph, cfg, kEstimateStream);
  return estimate_from_counts(reached_counts(batch, seeds, graph.node_count()), cfg.num_samples);
}

Vector exact_activation(const Graph& graph, std::span<const NodeId> seeds, double transmission_p) {
  check_seeds(graph, seeds);
  if (!(transmission_p >= 0.0 && transmission_p <= 1.0)) throw DomainError("transmission_p must lie in [0, 1]");
  const auto edges = graph.edges();
  if (edges.size() > kExactActivationMaxEdges) {
    throw DomainError("exact activation supports at most " + std::to_string(kExactActivationMaxEdges) + " edges");
  }
  const auto n = static_cast<std::size_t>(graph.node_count());
  const std::size_t m = edges.size();
  Vector probs = Vector::Zero(static_cast<Eigen::Index>(n));
  std::vector<char> hit(n);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int live = std::popcount(mask);
    const double weight =
        std::pow(transmission_p, live) * std::pow(1.0 - transmission_p, static_cast<int>(m) - live);
    if (weight == 0.0) continue;
    UnionFind uf(n);
    for (std::size_t e = 0; e < m; ++e) {
      if (mask & (1u << e)) uf.unite(edges[e].u, edges[e].v);
    }
    std::fill(hit.begin(), hit.end(), 0);
    for (NodeId s : seeds) hit[static_cast<std::size_t>(uf.find(s))] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (hit[static_cast<std::size_t>(uf.find(static_cast<int>(v)))]) probs[static_cast<Eigen::Index>(v)] += weight;
    }
  }
  for (NodeId s : seeds) probs[s] = 1.0;
  return probs.cwiseMin(1.0);
}

ObjectiveKind parse_objective_kind(const std::string& name) {
  const std::string key = normalized(name);
  if (key == "group_free") return ObjectiveKind::group_free;
  if (key == "individual") return ObjectiveKind::individual;
  if (key == "community_maximin") return ObjectiveKind::community_maximin;
  if (key == "community_welfare") return ObjectiveKind::community_welfare;
  if (key == "reach") return ObjectiveKind::reach;
  throw DomainError("unknown objective '" + name + "'");
}

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::group_free: return "group_free";
    case ObjectiveKind::individual: return "individual";
    case ObjectiveKind::community_maximin: return "community_maximin";
    case ObjectiveKind::community_welfare: return "community_welfare";
    case ObjectiveKind::reach: return "reach";
  }
  return "unknown";
}

bool needs_kernel(ObjectiveKind kind) {
  return kind == ObjectiveKind::group_free || kind == ObjectiveKind::community_maximin ||
         kind == ObjectiveKind::community_welfare;
}

double Objective::operator()(const Vector& probs) const {
  if (needs_kernel(kind)) {
    if (!kernel) throw DomainError("objective '" + to_string(kind) + "' needs a kernel");
    if (kernel->size() != probs.size()) throw DomainError("kernel and probabilities differ in size");
  }
  switch (kind) {
    case ObjectiveKind::individual: return probs.minCoeff();
    case ObjectiveKind::reach: return probs.sum();
    case ObjectiveKind::group_free:
    case ObjectiveKind::community_maximin: return smooth(*kernel, probs).minCoeff();
    case ObjectiveKind::community_welfare: return smooth(*kernel, probs.cwiseSqrt()).sum();
  }
  return 0.0;
}

GreedyResult greedy_select(const Graph& graph, int budget, const Objective& objective, const CascadeConfig& cfg) {
  check_config(cfg);
  const NodeId n = graph.node_count();
  if (budget < 1 || budget > n) throw DomainError("budget must lie in [1, n]");
  const bool kernelized = needs_kernel(objective.kind);
  if (kernelized) {
    if (!objective.kernel) throw DomainError("objective '" + to_string(objective.kind) + "' needs a kernel");
    if (objective.kernel->size() != n) throw DomainError("kernel size does not match the graph");
  }
  const bool welfare = objective.kind == ObjectiveKind::community_welfare;
  const double samples = static_cast<double>(cfg.num_samples);

  // Values are evaluated on integer reach counts so that an identity kernel
  // reproduces the individual objective bit for bit.
  const auto transform = [&](double count) { return welfare ? std::sqrt(count / samples) : count; };
  const auto finish = [&](const Vector& numer) -> double {
    if (!kernelized) {
      return objective.kind == ObjectiveKind::reach ? numer.sum() / samples : numer.minCoeff() / samples;
    }
    const Vector a = numer.cwiseQuotient(objective.kernel->row_sums());
    return welfare ? a.sum() : a.minCoeff() / samples;
  };

  GreedyResult result;
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  Vector counts(n);
  Vector delta = Vector::Zero(n);
  std::vector<NodeId> touched;
  std::vector<std::vector<char>> covered;

  for (int it = 0; it < budget; ++it) {
    const auto batch = draw_batch(graph, cfg, static_cast<std::uint64_t>(it) + 1);
    covered.resize(batch.size());
    for (std::size_t t = 0; t < batch.size(); ++t) {
      covered[t].assign(static_cast<std::size_t>(batch[t].component_count()), 0);
      for (NodeId s : result.seeds) covered[t][static_cast<std::size_t>(batch[t].comp[static_cast<std::size_t>(s)])] = 1;
    }
    counts = reached_counts(batch, result.seeds, n);
    Vector base_g = counts.unaryExpr(transform);
    Vector base_numer = kernelized ? Vector(objective.kernel->matrix() * base_g) : base_g;

    NodeId best = -1;
    double best_value = 0.0;
    for (NodeId cand = 0; cand < n; ++cand) {
      if (chosen[static_cast<std::size_t>(cand)]) continue;
      touched.clear();
      for (std::size_t t = 0; t < batch.size(); ++t) {
        const int c = batch[t].comp[static_cast<std::size_t>(cand)];
        if (covered[t][static_cast<std::size_t>(c)]) continue;
        for (NodeId v : batch[t].component(c)) {
          if (delta[v] == 0.0) touched.push_back(v);
          delta[v] += 1.0;
        }
      }
      Vector numer = base_numer;
      if (!kernelized) {
        for (NodeId v : touched) numer[v] = transform(counts[v] + delta[v]);
      } else if (touched.size() * 4 < static_cast<std::size_t>(n)) {
        for (NodeId v : touched) numer += (transform(counts[v] + delta[v]) - base_g[v]) * objective.kernel->matrix().col(v);
      } else {
        Vector g = base_g;
        for (NodeId v : touched) g[v] = transform(counts[v] + delta[v]);
        numer = objective.kernel->matrix() * g;
      }
      const double value = finish(numer);
      for (NodeId v : touched) delta[v] = 0.0;
      if (best < 0 || value > best_value) {
        best = cand;
        best_value = value;
      }
    }
    chosen[static_cast<std::size_t>(best)] = 1;
    result.seeds.push_back(best);
    result.values.push_back(best_value);
  }
  return result;
}

std::vector<SeedReportRow> evaluate_seeds(const Graph& graph, std::span<const NodeId> seeds, const Partition& labels,
                                          const CascadeConfig& cfg, const EntropyConfig& entropy) {
  check_config(cfg);
  check_seeds(graph, seeds);
  if (labels.size() != static_cast<std::size_t>(graph.node_count())) throw DomainError("labels do not match the graph");
  const auto batch = draw_batch(graph, cfg, kEstimateStream);
  std::vector<SeedReportRow> rows;
  for (std::size_t k = 1; k <= seeds.size(); ++k) {
    const auto est = estimate_from_counts(reached_counts(batch, seeds.first(k), graph.node_count()), cfg.num_samples);
    rows.push_back({static_cast<int>(k), seeds[k - 1], between_group_inequality(est.probs, labels, entropy),
                    est.probs.sum()});
  }
  return rows;
}

}  // namespace homofair
