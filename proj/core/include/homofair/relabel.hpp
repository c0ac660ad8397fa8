#pragma once

#include <cstdint>
#include <vector>

#include "homofair/common.hpp"
#include "homofair/inequality.hpp"
#include "homofair/kernel.hpp"

namespace homofair {

using Labeling = std::vector<std::uint8_t>;  // binary per node

/// Relabel Y-hat with as few flips as possible so that every smoothed
/// exposure A(K, Y~)_i reaches theta_min without adding positive labels.
struct RelabelInstance {
  Labeling y_hat;
  Kernel kernel;
  double theta_min = 0.0;
};

enum class RelabelStatus {
  optimal,     // exact solver, proven minimal
  feasible,    // heuristic, constraints met
  infeasible,  // exact solver, no labeling satisfies the constraints
  failed,      // heuristic gave up; y_tilde holds the best vector found
};

struct RelabelResult {
  RelabelStatus status = RelabelStatus::failed;
  Labeling y_tilde;
  int flips = 0;
  double min_exposure = 0.0;  // min_i A(K, y_tilde)_i
  bool optimal = false;

  bool ok() const noexcept { return status == RelabelStatus::optimal || status == RelabelStatus::feasible; }
};

inline constexpr int kExactSolverMaxNodes = 24;

/// Depth-first branch-and-bound over labelings. Among minimal solutions the
/// lexicographically smallest Y~ is returned. Throws DomainError above
/// kExactSolverMaxNodes nodes.
RelabelResult solve_exact(const RelabelInstance& instance);

/// Greedy paired swaps that keep the number of positives fixed. Each step
/// applies the 0->1 / 1->0 pair that most reduces the total shortfall below
/// theta_min, with a short tabu list; a second run starts from a greedy
/// placement of the positives. Each run gives up after n^2/2 swaps or 20
/// swaps without progress.
RelabelResult solve_heuristic(const RelabelInstance& instance);

/// Exact below the node limit, heuristic otherwise.
RelabelResult solve_relabel(const RelabelInstance& instance);

double min_exposure(const Kernel& kernel, const Labeling& y);
bool satisfies_constraints(const RelabelInstance& instance, const Labeling& y_tilde, double slack = 1e-9);

struct RelabelReport {
  double delta0_before = 0.0;
  double delta0_after = 0.0;
  double flip_fraction = 0.0;
};

RelabelReport evaluate_relabel(const Labeling& y_hat, const RelabelResult& result, const Partition& labels,
                               const EntropyConfig& cfg = {});

struct RelabelSweepRow {
  double theta = 0.0;
  int flips = 0;
  double flip_fraction = 0.0;
  double delta0 = 0.0;
  double min_exposure = 0.0;
};

/// Evenly spaced thresholds 0..theta_max (`steps` points), stopping at the
/// first infeasible one. Returns the feasible prefix.
std::vector<RelabelSweepRow> relabel_sweep(const Labeling& y_hat, const Kernel& kernel, const Partition& labels,
                                           double theta_max, int steps, const EntropyConfig& cfg = {});

}  // namespace homofair
