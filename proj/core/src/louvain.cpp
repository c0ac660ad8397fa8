#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "homofair/graph.hpp"

namespace homofair {
namespace {

// Weighted graph with self-loops, used for the aggregated levels.
struct Level {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_loop;                         // weight of the loop (counted once)
  std::vector<double> strength;                          // sum of incident weights, loops twice
};

Level level_from_graph(const Graph& graph) {
  Level lv;
  lv.n = graph.node_count();
  lv.adj.resize(static_cast<std::size_t>(lv.n));
  lv.self_loop.assign(static_cast<std::size_t>(lv.n), 0.0);
  lv.strength.assign(static_cast<std::size_t>(lv.n), 0.0);
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    for (const Neighbor& nb : graph.neighbors(i)) {
      lv.adj[static_cast<std::size_t>(i)].emplace_back(nb.node, nb.weight);
      lv.strength[static_cast<std::size_t>(i)] += nb.weight;
    }
  }
  return lv;
}

// Local moving phase. Returns true when at least one node changed community.
bool move_nodes(const Level& lv, std::vector<int>& community, double resolution, double total2, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(lv.n);
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[static_cast<std::size_t>(community[i])] += lv.strength[i];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int node : order) {
      const auto i = static_cast<std::size_t>(node);
      const int own = community[i];
      const double k_i = lv.strength[i];

      touched.clear();
      for (const auto& [j, w] : lv.adj[i]) {
        const int c = community[static_cast<std::size_t>(j)];
        if (link[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        link[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(own)] -= k_i;

      // Gain of inserting i into c, up to terms that do not depend on c.
      const auto gain = [&](int c) {
        return link[static_cast<std::size_t>(c)] - resolution * k_i * tot[static_cast<std::size_t>(c)] / total2;
      };
      int best = own;
      double best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        const double g = gain(c);
        if (g > best_gain + 1e-12) {
          best = c;
          best_gain = g;
        }
      }
      tot[static_cast<std::size_t>(best)] += k_i;
      if (best != own) {
        community[i] = best;
        improved = true;
        any_move = true;
      }
      for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
      link[static_cast<std::size_t>(own)] = 0.0;
    }
  }
  return any_move;
}

// Renumbers communities densely by first appearance; returns the count.
int densify(std::vector<int>& community) {
  std::vector<int> remap(community.size(), -1);
  int next = 0;
  for (int& c : community) {
    auto& slot = remap[static_cast<std::size_t>(c)];
    if (slot < 0) slot = next++;
    c = slot;
  }
  return next;
}

Level aggregate(const Level& lv, const std::vector<int>& community, int count) {
  Level out;
  out.n = count;
  out.adj.resize(static_cast<std::size_t>(count));
  out.self_loop.assign(static_cast<std::size_t>(count), 0.0);
  out.strength.assign(static_cast<std::size_t>(count), 0.0);
  std::vector<std::unordered_map<int, double>> acc(static_cast<std::size_t>(count));
  for (int i = 0; i < lv.n; ++i) {
    const int ci = community[static_cast<std::size_t>(i)];
    out.self_loop[static_cast<std::size_t>(ci)] += lv.self_loop[static_cast<std::size_t>(i)];
    out.strength[static_cast<std::size_t>(ci)] += lv.strength[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : lv.adj[static_cast<std::size_t>(i)]) {
      const int cj = community[static_cast<std::size_t>(j)];
      if (ci == cj) {
        // Each internal edge is seen from both ends.
        out.self_loop[static_cast<std::size_t>(ci)] += 0.5 * w;
      } else {
        acc[static_cast<std::size_t>(ci)][cj] += w;
      }
    }
  }
  for (int c = 0; c < count; ++c) {
    auto& row = out.adj[static_cast<std::size_t>(c)];
    row.assign(acc[static_cast<std::size_t>(c)].begin(), acc[static_cast<std::size_t>(c)].end());
    std::sort(row.begin(), row.end());
  }
  return out;
}

}  // namespace

Partition louvain(const Graph& graph, const LouvainOptions& options) {
  if (!(options.resolution > 0.0)) throw DomainError("Louvain resolution must be positive");
  const auto n = static_cast<std::size_t>(graph.node_count());
  Partition membership(n);
  std::iota(membership.begin(), membership.end(), 0);
  if (graph.edge_count() == 0) return membership;

  Level lv = level_from_graph(graph);
  double total2 = 0.0;
  for (double s : lv.strength) total2 += s;

  std::mt19937_64 rng(options.seed);
  while (true) {
    std::vector<int> community(static_cast<std::size_t>(lv.n));
    std::iota(community.begin(), community.end(), 0);
    const bool moved = move_nodes(lv, community, options.resolution, total2, rng);
    const int count = densify(community);
    for (auto& m : membership) m = community[static_cast<std::size_t>(m)];
    if (!moved || count == lv.n) break;
    lv = aggregate(lv, community, count);
  }
  densify(membership);
  return membership;
}

double modularity(const Graph& graph, const Partition& partition, double resolution) {
  if (partition.size() != static_cast<std::size_t>(graph.node_count())) {
    throw DomainError("partition does not match node count");
  }
  const auto k = static_cast<std::size_t>(group_count(partition));
  std::vector<double> internal(k, 0.0);
  std::vector<double> tot(k, 0.0);
  double total2 = 0.0;
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    const auto ci = static_cast<std::size_t>(partition[static_cast<std::size_t>(i)]);
    for (const Neighbor& nb : graph.neighbors(i)) {
      total2 += nb.weight;
      tot[ci] += nb.weight;
      if (partition[static_cast<std::size_t>(nb.node)] == partition[static_cast<std::size_t>(i)]) internal[ci] += nb.weight;
    }
  }
  if (total2 == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += internal[c] / total2 - resolution * (tot[c] / total2) * (tot[c] / total2);
  return q;
}

}  // namespace homofair
