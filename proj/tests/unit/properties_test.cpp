#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <homofair/cascade.hpp>
#include <homofair/inequality.hpp>
#include <homofair/ranking.hpp>
#include <homofair/relabel.hpp>
#include <homofair/spectral.hpp>

#include "oracles.hpp"

using namespace homofair;

namespace {

Vector random_positive(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 5.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

struct Moments {
  double mean = 0;
  double sd = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.sd += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(m.sd / static_cast<double>(v.size() - 1));
  return m;
}

// Mean kernel entry within and across planted blocks of equal size.
std::pair<double, double> block_means(const Matrix& k, int block) {
  double intra = 0, inter = 0;
  long ni = 0, no = 0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (i / block == j / block) {
        intra += k(i, j);
        ++ni;
      } else {
        inter += k(i, j);
        ++no;
      }
    }
  return {intra / static_cast<double>(ni), inter / static_cast<double>(no)};
}

}  // namespace

TEST(InequalityProperties, ScaleInvariance) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_positive(2 + trial % 30, rng);
    const double c = 0.01 + trial * 3.7;
    for (double a : {-1.0, 0.5, 2.0, 3.0}) {
      const double base = ge_index(x, {a});
      EXPECT_NEAR(ge_index(c * x, {a}), base, 1e-12 * std::max(base, 1e-300) + 1e-15);
    }
    const Vector w = random_positive(static_cast<int>(x.size()), rng);
    const double weighted = ge_weighted(x, w);
    EXPECT_NEAR(ge_weighted(c * x, w), weighted, 1e-12 * weighted + 1e-15);
    EXPECT_NEAR(ge_weighted(x, c * w), weighted, 1e-12 * weighted + 1e-15);
  }
}

TEST(InequalityProperties, ReplicationInvariance) {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector x = random_positive(2 + trial % 10, rng);
    const int r = 2 + trial % 5;
    const Vector rep = x.replicate(r, 1);
    for (double a : {-0.5, 0.5, 2.0}) EXPECT_NEAR(ge_index(rep, {a}), ge_index(x, {a}), 1e-12);
  }
}

TEST(InequalityProperties, TransferPrinciple) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x = random_positive(3 + trial % 8, rng);
    Eigen::Index hi = 0, lo = 0;
    x.maxCoeff(&hi);
    x.minCoeff(&lo);
    if (x[hi] - x[lo] < 1e-6) continue;
    const double delta = u(rng) * (x[hi] - x[lo]) / 2;
    Vector moved = x;
    moved[hi] -= delta;
    moved[lo] += delta;
    for (double a : {-1.0, 0.5, 2.0}) EXPECT_LT(ge_index(moved, {a}), ge_index(x, {a}));
  }
}

TEST(InequalityProperties, NormalizedVarianceIsTwiceGe2) {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_positive(2 + trial % 20, rng);
    EXPECT_NEAR(ge_index(x, EntropyConfig::normalized_variance()), 2.0 * ge_index(x), 1e-13);
  }
}

TEST(InequalityProperties, WeightedReducesToUnweighted) {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector x = random_positive(2 + trial % 20, rng);
    EXPECT_NEAR(ge_weighted(x, Vector::Constant(x.size(), 0.3 + trial)), ge_index(x), 1e-13);
    EXPECT_GE(ge_weighted(x, random_positive(static_cast<int>(x.size()), rng)), 0.0);
  }
}

TEST(GraphProperties, ShuffledLabelsHaveNoAssortativity) {
  const Graph g = sbm_sample(SBMParams::homophilous({40, 40, 40}, 0.15, 0.02, 9));
  EXPECT_GT(assortativity(g), 0.5);
  std::mt19937_64 rng(106);
  std::vector<double> values;
  Partition labels = g.labels();
  for (int s = 0; s < 200; ++s) {
    std::shuffle(labels.begin(), labels.end(), rng);
    values.push_back(assortativity(g.with_labels(labels, g.label_names())));
  }
  const Moments m = moments(values);
  EXPECT_LT(std::abs(m.mean), 3 * m.sd);
}

TEST(GraphProperties, FlatSbmIsExchangeable) {
  std::vector<double> values;
  for (std::uint64_t s = 0; s < 100; ++s) values.push_back(assortativity(sbm_sample({{30, 30}, 0.1, 0.1, s})));
  const Moments m = moments(values);
  EXPECT_LT(std::abs(m.mean), 3 * m.sd);
}

TEST(GraphProperties, LouvainIsAPartition) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(10 + trial * 3, 0.15, rng);
    const Partition p = louvain(g, {1.0, static_cast<std::uint64_t>(trial)});
    ASSERT_EQ(p.size(), static_cast<std::size_t>(g.node_count()));
    const int k = group_count(p);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int c : p) {
      ASSERT_GE(c, 0);
      ++sizes[static_cast<std::size_t>(c)];
    }
    for (int s : sizes) EXPECT_GT(s, 0);
  }
}

TEST(SpectralProperties, EmbeddingIsBitwiseDeterministic) {
  std::mt19937_64 rng(108);
  const Graph g = oracle::random_graph(60, 0.1, rng);
  const Embedding a = laplacian_eigenmaps(g, {4});
  const Embedding b = laplacian_eigenmaps(g, {4});
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}

TEST(SpectralProperties, PermutationEquivariance) {
  std::mt19937_64 rng(109);
  int checked = 0;
  for (int trial = 0; trial < 30 && checked < 10; ++trial) {
    const int n = 12 + trial % 8;
    const Graph g = oracle::random_graph(n, 0.35, rng);
    if (connected_components(g) != Partition(static_cast<std::size_t>(n), 0)) continue;
    const int d = 3;
    const Embedding e = laplacian_eigenmaps(g, {d});
    // Equivariance is only defined up to rotation inside repeated eigenvalues.
    const auto all = oracle::jacobi_eigen(oracle::normalized_laplacian(g)).first;
    if (all[d + 1] - all[d] < 1e-6 || all[d] - all[d - 1] < 1e-6 || all[d - 1] - all[d - 2] < 1e-6) continue;

    std::vector<NodeId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (const Edge& edge : g.edges()) edges.push_back({perm[static_cast<std::size_t>(edge.u)], perm[static_cast<std::size_t>(edge.v)], edge.weight});
    const Graph h(n, edges);

    const Matrix kg = cosine_kernel(e).matrix();
    const Matrix kh = cosine_kernel(laplacian_eigenmaps(h, {d})).matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_NEAR(kh(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]), kg(i, j), 1e-8);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(SpectralProperties, UnderspecifiedDimensionKeepsBlockSign) {
  int positive = 0;
  const int samples = 5;
  for (int s = 0; s < samples; ++s) {
    const Graph g = sbm_sample(SBMParams::homophilous(std::vector<int>(16, 100), 0.2, 0.05, 500 + s));
    const auto [intra, inter] = block_means(cosine_kernel(laplacian_eigenmaps(g, {8})).matrix(), 100);
    positive += intra > inter;
  }
  EXPECT_GE(positive, (4 * samples + 4) / 5);
}

TEST(RelabelProperties, GraphKernelsAgreeWithEnumeration) {
  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6 + trial % 7;
    const Graph g = oracle::random_graph(n, 0.5, rng);
    Kernel k = Kernel::identity(n);
    try {
      k = cosine_kernel(laplacian_eigenmaps(g, {2}));
    } catch (const DomainError&) {
      continue;
    }
    Labeling y(static_cast<std::size_t>(n));
    for (auto& v : y) v = u(rng) < 0.4;
    if (std::accumulate(y.begin(), y.end(), 0) == 0) y[0] = 1;
    const double theta = u(rng) * std::accumulate(y.begin(), y.end(), 0) / n;
    const RelabelInstance inst{y, k, theta};
    const auto brute = oracle::brute_force_relabel(y, k.matrix(), theta);
    const RelabelResult exact = solve_exact(inst);
    ASSERT_EQ(exact.ok(), brute.feasible);
    if (!exact.ok()) continue;
    ++solved;
    EXPECT_EQ(exact.flips, brute.flips);
    EXPECT_GE(exact.min_exposure, theta - 1e-9);
    const RelabelResult heur = solve_heuristic(inst);
    if (heur.ok()) {
      EXPECT_GE(heur.flips, exact.flips);
      EXPECT_GE(heur.min_exposure, theta - 1e-9);
      EXPECT_LE(std::accumulate(heur.y_tilde.begin(), heur.y_tilde.end(), 0), std::accumulate(y.begin(), y.end(), 0));
    }
  }
  EXPECT_GT(solved, 20);
}

TEST(CascadeProperties, ReachMonotoneUnderCommonRandomNumbers) {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = oracle::random_graph(40, 0.08, rng);
    std::vector<NodeId> order(40);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const CascadeConfig cfg{0.2, 300, static_cast<std::uint64_t>(trial)};
    Vector last = Vector::Zero(40);
    for (int k = 1; k <= 6; ++k) {
      const ActivationEstimate est = estimate_activation(g, std::span<const NodeId>(order.data(), k), cfg);
      EXPECT_TRUE((est.probs.array() >= last.array()).all());
      EXPECT_GE(est.probs.minCoeff(), 0.0);
      EXPECT_LE(est.probs.maxCoeff(), 1.0);
      for (int s = 0; s < k; ++s) EXPECT_EQ(est.probs[order[static_cast<std::size_t>(s)]], 1.0);
      last = est.probs;
    }
  }
}

TEST(CascadeProperties, IndividualEqualsIdentityGroupFree) {
  std::mt19937_64 rng(112);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(15 + trial, 0.1, rng);
    const CascadeConfig cfg{0.1 + 0.01 * trial, 60, static_cast<std::uint64_t>(trial)};
    const GreedyResult a = greedy_select(g, 4, {ObjectiveKind::individual, std::nullopt}, cfg);
    const GreedyResult b = greedy_select(g, 4, {ObjectiveKind::group_free, Kernel::identity(g.node_count())}, cfg);
    EXPECT_EQ(a.seeds, b.seeds);
  }
}

TEST(RankingProperties, LmoBeatsRandomVertices) {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 6 + trial;
    const PositionWeights w = PositionWeights::dcg(m, 3);
    Vector s(m);
    for (int j = 0; j < m; ++j) s[j] = u(rng);
    const double best = lmo_topk(s, w).dot(s);
    std::vector<int> items(static_cast<std::size_t>(m));
    std::iota(items.begin(), items.end(), 0);
    for (int r = 0; r < 1000; ++r) {
      std::shuffle(items.begin(), items.end(), rng);
      double value = 0;
      for (int k = 0; k < m; ++k) value += w.b[k] * s[items[static_cast<std::size_t>(k)]];
      EXPECT_GE(best, value - 1e-12);
    }
  }
}

TEST(RankingProperties, GroundTruthUnfairnessIsPerGroupForm) {
  std::mt19937_64 rng(114);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial % 10;
    const int m = 2 + trial % 4;
    const Partition groups = oracle::random_partition(n, 2 + trial % 3, rng);
    Matrix e(n, m);
    for (Eigen::Index k = 0; k < e.size(); ++k) e.data()[k] = u(rng);
    const double eta = 0.05 + 0.01 * trial;

    const int k_groups = group_count(groups);
    double total = 0;
    for (int j = 0; j < m; ++j) {
      std::vector<double> sum(static_cast<std::size_t>(k_groups), 0.0), size(static_cast<std::size_t>(k_groups), 0.0);
      double overall = 0;
      for (int i = 0; i < n; ++i) {
        sum[static_cast<std::size_t>(groups[static_cast<std::size_t>(i)])] += e(i, j);
        size[static_cast<std::size_t>(groups[static_cast<std::size_t>(i)])] += 1;
        overall += e(i, j);
      }
      overall /= n;
      double q = 0;
      for (int g = 0; g < k_groups; ++g) {
        const double mean = sum[static_cast<std::size_t>(g)] / size[static_cast<std::size_t>(g)];
        q += size[static_cast<std::size_t>(g)] * (mean - overall) * (mean - overall);
      }
      total += std::sqrt(eta + q);
    }
    EXPECT_NEAR(unfairness(e, ground_truth_kernel(groups), eta), total / m, 1e-12);
  }
}
