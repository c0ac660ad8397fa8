#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <homofair/relabel.hpp>

#include "oracles.hpp"

using namespace homofair;

namespace {

int hamming(const Labeling& a, const Labeling& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

int positives(const Labeling& y) { return std::accumulate(y.begin(), y.end(), 0); }

struct RandomInstance {
  Labeling y_hat;
  Matrix k;
  double theta;
};

RandomInstance random_instance(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomInstance r;
  r.k = oracle::random_kernel_matrix(n, rng, 0.6, 1.0);
  const double rate = 0.2 + 0.6 * u(rng);
  r.y_hat.resize(static_cast<std::size_t>(n));
  for (auto& v : r.y_hat) v = u(rng) < rate ? 1 : 0;
  if (positives(r.y_hat) == 0) r.y_hat[0] = 1;
  r.theta = u(rng) * positives(r.y_hat) / n;
  return r;
}

}  // namespace

TEST(Relabel, ZeroThresholdKeepsLabels) {
  const Labeling y{1, 0, 0, 1, 0};
  const RelabelInstance inst{y, Kernel::identity(5), 0.0};
  for (const RelabelResult& r : {solve_exact(inst), solve_heuristic(inst)}) {
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.y_tilde, y);
    EXPECT_EQ(r.flips, 0);
  }
}

TEST(Relabel, TwoGroupExample) {
  const RelabelInstance inst{{1, 1, 0, 0}, ground_truth_kernel({0, 0, 1, 1}), 0.5};
  const RelabelResult r = solve_exact(inst);
  ASSERT_EQ(r.status, RelabelStatus::optimal);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.flips, 2);
  EXPECT_EQ(r.y_tilde, (Labeling{0, 1, 0, 1}));
  EXPECT_NEAR(r.min_exposure, 0.5, 1e-15);

  const oracle::BruteRelabel brute = oracle::brute_force_relabel(inst.y_hat, inst.kernel.matrix(), 0.5);
  EXPECT_EQ(brute.flips, 2);
  EXPECT_EQ(brute.y, r.y_tilde);

  const RelabelResult h = solve_heuristic(inst);
  ASSERT_TRUE(h.ok());
  EXPECT_FALSE(h.optimal);
  EXPECT_EQ(h.flips, 2);
}

TEST(Relabel, ConservationMakesHighThresholdInfeasible) {
  const RelabelInstance inst{{1, 0, 0, 0}, Kernel::uniform(4), 0.3};
  const RelabelResult r = solve_exact(inst);
  EXPECT_EQ(r.status, RelabelStatus::infeasible);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(solve_heuristic(inst).ok());
  EXPECT_FALSE(oracle::brute_force_relabel(inst.y_hat, inst.kernel.matrix(), 0.3).feasible);
}

TEST(Relabel, ExactMatchesBruteForce) {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + trial % 10;
    const RandomInstance ri = random_instance(n, rng);
    const RelabelInstance inst{ri.y_hat, Kernel(ri.k), ri.theta};
    const oracle::BruteRelabel brute = oracle::brute_force_relabel(ri.y_hat, ri.k, ri.theta);
    const RelabelResult r = solve_exact(inst);
    ASSERT_EQ(r.ok(), brute.feasible) << "trial " << trial;
    if (!brute.feasible) continue;
    ++feasible;
    EXPECT_EQ(r.flips, brute.flips) << "trial " << trial;
    EXPECT_EQ(r.y_tilde, brute.y) << "trial " << trial;
    EXPECT_EQ(r.flips, hamming(ri.y_hat, r.y_tilde));
    EXPECT_LE(positives(r.y_tilde), positives(ri.y_hat));
    EXPECT_TRUE(satisfies_constraints(inst, r.y_tilde));
  }
  EXPECT_GT(feasible, 50);
}

TEST(Relabel, HeuristicResultsAreVerified) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + trial % 9;
    const RandomInstance ri = random_instance(n, rng);
    const RelabelInstance inst{ri.y_hat, Kernel(ri.k), ri.theta};
    const RelabelResult h = solve_heuristic(inst);
    EXPECT_FALSE(h.optimal);
    if (h.status == RelabelStatus::feasible) {
      EXPECT_TRUE(satisfies_constraints(inst, h.y_tilde));
      EXPECT_LE(positives(h.y_tilde), positives(ri.y_hat));
      EXPECT_EQ(h.flips, hamming(ri.y_hat, h.y_tilde));
      const RelabelResult e = solve_exact(inst);
      ASSERT_TRUE(e.ok());
      EXPECT_GE(h.flips, e.flips);
    } else {
      EXPECT_EQ(h.status, RelabelStatus::failed);
    }
  }
}

TEST(Relabel, FlipsMonotoneInThreshold) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomInstance ri = random_instance(10, rng);
    const Kernel k(ri.k);
    int last = 0;
    for (int s = 0; s <= 10; ++s) {
      const double theta = 0.05 * s;
      const RelabelResult r = solve_exact({ri.y_hat, k, theta});
      if (!r.ok()) break;
      EXPECT_GE(r.flips, last);
      last = r.flips;
    }
  }
}

TEST(Relabel, DispatchAndLimits) {
  const Labeling big(30, 1);
  const RelabelInstance inst{big, Kernel::identity(30), 0.5};
  EXPECT_THROW(solve_exact(inst), DomainError);
  const RelabelResult r = solve_relabel(inst);
  EXPECT_EQ(r.status, RelabelStatus::feasible);
  EXPECT_EQ(r.flips, 0);
  EXPECT_EQ(solve_relabel({{1, 0}, Kernel::identity(2), 0.0}).status, RelabelStatus::optimal);
}

TEST(Relabel, InvalidInstances) {
  EXPECT_THROW(solve_exact({{1, 0, 1}, Kernel::identity(2), 0.1}), DomainError);
  EXPECT_THROW(solve_exact({{1, 0}, Kernel::identity(2), 1.5}), DomainError);
  EXPECT_THROW(solve_exact({{1, 2}, Kernel::identity(2), 0.1}), DomainError);
}

TEST(Relabel, MinExposureAndConstraints) {
  const Kernel k = ground_truth_kernel({0, 0, 1, 1});
  EXPECT_NEAR(min_exposure(k, {1, 1, 0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(min_exposure(k, {1, 0, 1, 0}), 0.5, 1e-15);
  const RelabelInstance inst{{1, 1, 0, 0}, k, 0.5};
  EXPECT_TRUE(satisfies_constraints(inst, {1, 0, 1, 0}));
  EXPECT_FALSE(satisfies_constraints(inst, {1, 1, 0, 0}));
  EXPECT_FALSE(satisfies_constraints(inst, {1, 1, 1, 1}));
}

TEST(Relabel, SweepAndReport) {
  const Labeling y{1, 1, 1, 1, 0, 0, 0, 0};
  const Partition groups{0, 0, 0, 0, 1, 1, 1, 1};
  const Kernel k = ground_truth_kernel(groups);
  const auto rows = relabel_sweep(y, k, groups, 0.5, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].theta, 0.0);
  EXPECT_EQ(rows[0].flips, 0);
  EXPECT_NEAR(rows[0].delta0, between_group_inequality(Vector::Map(std::vector<double>{1, 1, 1, 1, 0, 0, 0, 0}.data(), 8), groups), 1e-15);
  EXPECT_DOUBLE_EQ(rows[1].theta, 0.25);
  EXPECT_EQ(rows[1].flips, 2);
  EXPECT_EQ(rows[2].flips, 4);
  EXPECT_NEAR(rows[2].delta0, 0.0, 1e-15);
  EXPECT_NEAR(rows[2].flip_fraction, 0.5, 1e-15);
  EXPECT_THROW(relabel_sweep(y, k, groups, 0.5, 1), DomainError);

  // Beyond the positive rate the sweep stops at the first infeasible point.
  EXPECT_EQ(relabel_sweep(y, k, groups, 1.0, 5).size(), 3u);
}
