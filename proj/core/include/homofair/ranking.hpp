#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homofair/common.hpp"
#include "homofair/graph.hpp"
#include "homofair/kernel.hpp"
#include "homofair/spectral.hpp"

namespace homofair {

/// rho(i, j): preference of user i for item j, in [0, 1].
using PreferenceMatrix = Matrix;

/// Position weights b_1 >= ... >= b_m >= 0, zero beyond k_bar.
struct PositionWeights {
  Vector b;
  int k_bar = 0;

  /// b_k = 1 / log2(1 + k) for k <= k_bar, 0 afterwards.
  static PositionWeights dcg(int m, int k_bar);
  int size() const noexcept { return static_cast<int>(b.size()); }
};

/// One top-k_bar ranking: item ids from the first slot down.
using Ranking = std::vector<std::int32_t>;

struct MixtureComponent {
  double weight = 0.0;
  Ranking ranking;
};

/// Per-user exposures e(i, j) = sum_k b_k P_ijk, together with the convex
/// combination of deterministic rankings that produces them.
struct ExposurePolicy {
  Matrix e;
  std::vector<std::vector<MixtureComponent>> mixture;  // per user, weights sum to 1
  std::vector<double> trace;                           // objective at each iterate
  int iterations = 0;
};

struct RankingObjectiveConfig {
  double beta = 0.0;
  double eta = 0.1;
  KernelKind kernel_kind = KernelKind::laplacian;
};

/// u_i = sum_j rho_ij e_ij.
Vector utility(const Matrix& e, const PreferenceMatrix& rho);

/// (1/m) sum_j std_dispersion(A(K, e_j), eta, K 1).
double unfairness(const Matrix& e, const Kernel& kernel, double eta);

/// mean utility - beta * unfairness.
double ranking_objective(const Matrix& e, const PreferenceMatrix& rho, const Kernel& kernel,
                         const RankingObjectiveConfig& cfg);

/// Gradient of ranking_objective with respect to every e(i, j).
Matrix ranking_gradient(const Matrix& e, const PreferenceMatrix& rho, const Kernel& kernel,
                        const RankingObjectiveConfig& cfg);

/// Item ids ordered by decreasing score, ties by smallest id, cut at k_bar.
Ranking top_k(std::span<const double> scores, int k_bar);

/// The exposure row maximizing <scores, e> over the ranking polytope: b_k
/// goes to the k-th best item.
Vector lmo_topk(const Vector& scores, const PositionWeights& weights);

/// Every user ranks items by decreasing preference.
ExposurePolicy sorted_policy(const PreferenceMatrix& rho, const PositionWeights& weights);

/// Sum equals |b|_1 and sorted(row) is weakly majorized by b.
bool in_ranking_polytope(const Vector& row, const PositionWeights& weights, double tol = 1e-9);

struct FrankWolfeOptions {
  int iterations = 200;
  /// Stop once the duality gap <grad, v - e> falls below this value.
  double gap_tolerance = 1e-12;
};

/// Conditional gradient ascent from the sorted policy with step 2/(t+2).
/// A step that would lower the objective is halved until it does not, so
/// the returned trace is non-decreasing.
ExposurePolicy frank_wolfe(const PreferenceMatrix& rho, const Kernel& kernel, const PositionWeights& weights,
                           const RankingObjectiveConfig& cfg, const FrankWolfeOptions& options = {});

struct NamedKernel {
  std::string name;
  Kernel kernel;
};

struct TradeoffRow {
  double beta = 0.0;
  std::string kernel;
  double avg_utility = 0.0;
  double gt_unfairness = 0.0;
  int iterations = 0;
};

/// Runs frank_wolfe for each kernel and beta and scores every policy with
/// the ground-truth kernel of `labels`.
std::vector<TradeoffRow> tradeoff_sweep(const PreferenceMatrix& rho, std::span<const NamedKernel> kernels,
                                        const Partition& labels, std::span<const double> betas,
                                        const PositionWeights& weights, double eta,
                                        const FrankWolfeOptions& options = {});

struct AlsConfig {
  int rank = 32;
  double reg = 0.1;
  int iterations = 15;
  std::uint64_t seed = 0;
};

/// Alternating ridge regression on the binarized interactions (nonzero -> 1);
/// returns clamp(U V^T, 0, 1). Every row needs at least one interaction.
PreferenceMatrix als_complete(const Matrix& interactions, const AlsConfig& cfg = {});
PreferenceMatrix als_complete(const RatingTable& ratings, NodeId users, const AlsConfig& cfg = {});

}  // namespace homofair
