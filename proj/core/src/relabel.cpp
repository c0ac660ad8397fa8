#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "homofair/relabel.hpp"

namespace homofair {
namespace {

constexpr double kFeasTol = 1e-12;

void check_instance(const RelabelInstance& instance) {
  if (static_cast<Eigen::Index>(instance.y_hat.size()) != instance.kernel.size()) {
    throw DomainError("labels and kernel differ in size");
  }
  for (auto v : instance.y_hat) {
    if (v > 1) throw DomainError("labels must be binary");
  }
  if (!(instance.theta_min >= 0.0 && instance.theta_min <= 1.0)) throw DomainError("theta_min must lie in [0, 1]");
  if ((instance.kernel.row_sums().array() <= 0.0).any()) throw DomainError("kernel has a zero row sum");
}

int hamming(const Labeling& a, const Labeling& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

Vector as_vector(const Labeling& y) {
  Vector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i];
  return v;
}

int count_ones(const Labeling& y) { return static_cast<int>(std::count(y.begin(), y.end(), std::uint8_t{1})); }

RelabelResult make_result(RelabelStatus status, const Labeling& y_hat, Labeling y_tilde, const Kernel& kernel) {
  RelabelResult r;
  r.status = status;
  r.flips = hamming(y_hat, y_tilde);
  r.min_exposure = min_exposure(kernel, y_tilde);
  r.optimal = status == RelabelStatus::optimal;
  r.y_tilde = std::move(y_tilde);
  return r;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const RelabelInstance& inst)
      : inst_(inst),
        k_(inst.kernel.matrix()),
        n_(static_cast<int>(inst.y_hat.size())),
        budget_(count_ones(inst.y_hat)),
        partial_(Vector::Zero(n_)),
        current_(static_cast<std::size_t>(n_), 0) {
    need_ = inst.theta_min * inst.kernel.row_sums();
    need_.array() -= kFeasTol * inst.kernel.row_sums().array();
    // Columns of each row by decreasing weight, for the optimistic bound.
    order_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      auto& ord = order_[static_cast<std::size_t>(i)];
      ord.resize(static_cast<std::size_t>(n_));
      std::iota(ord.begin(), ord.end(), 0);
      std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return k_(i, a) > k_(i, b); });
    }
  }

  std::optional<Labeling> run() {
    search(0, 0, 0, 0);
    return best_;
  }

 private:
  // Largest value row i can still reach with `ones_left` more positives
  // among the unassigned positions depth..n-1.
  bool can_still_satisfy(int depth, int ones_left) const {
    for (int i = 0; i < n_; ++i) {
      double reach = partial_[i];
      if (reach >= need_[i]) continue;
      int taken = 0;
      for (int j : order_[static_cast<std::size_t>(i)]) {
        if (taken >= ones_left) break;
        if (j < depth) continue;
        reach += k_(i, j);
        ++taken;
        if (reach >= need_[i]) break;
      }
      if (reach < need_[i]) return false;
    }
    return true;
  }

  void search(int depth, int ones, int up, int down) {
    // Positives cannot grow, so every 0->1 flip is matched by a 1->0 flip.
    const int lower_bound = up + std::max(up, down);
    if (best_ && lower_bound >= best_flips_) return;
    if (!can_still_satisfy(depth, budget_ - ones)) return;
    if (depth == n_) {
      best_ = current_;
      best_flips_ = up + down;
      return;
    }
    const auto j = static_cast<std::size_t>(depth);
    const bool was_one = inst_.y_hat[j] == 1;
    for (std::uint8_t value : {std::uint8_t{0}, std::uint8_t{1}}) {
      if (value == 1 && ones >= budget_) break;
      current_[j] = value;
      if (value == 1) partial_ += k_.col(depth);
      const int nu = up + (!was_one && value == 1);
      const int nd = down + (was_one && value == 0);
      search(depth + 1, ones + value, nu, nd);
      if (value == 1) partial_ -= k_.col(depth);
    }
    current_[j] = 0;
  }

  const RelabelInstance& inst_;
  const Matrix& k_;
  int n_;
  int budget_;
  Vector need_;
  Vector partial_;
  Labeling current_;
  std::vector<std::vector<int>> order_;
  std::optional<Labeling> best_;
  int best_flips_ = std::numeric_limits<int>::max();
};

// Sum of shortfalls below theta, and the minimum, of a smoothed vector.
struct Score {
  double min = 0.0;
  double deficit = 0.0;
};

Score score_of(const Vector& exposure, double theta) {
  Score s{exposure.minCoeff(), 0.0};
  for (Eigen::Index i = 0; i < exposure.size(); ++i) s.deficit += std::max(0.0, theta - exposure[i]);
  return s;
}

// Smaller total shortfall first; a higher minimum breaks ties.
bool better(const Score& a, const Score& b) {
  if (a.deficit != b.deficit) return a.deficit < b.deficit;
  return a.min > b.min;
}

constexpr std::size_t kAddCandidates = 16;
constexpr int kTabuTenure = 2;
constexpr int kMaxStall = 20;

struct SwapSearch {
  Labeling y;
  bool feasible = false;
  double deficit = 0.0;
};

// Paired swaps from `start`: the best few 0->1 flips are each combined with
// every 1->0 flip and the best pair is applied. Nodes swapped in the last
// kTabuTenure steps stay fixed, which lets the walk cross plateaus.
SwapSearch swap_search(const RelabelInstance& instance, Labeling y) {
  const Matrix& k = instance.kernel.matrix();
  const Vector inv_rows = instance.kernel.row_sums().cwiseInverse();
  const auto n = static_cast<Eigen::Index>(y.size());
  const double theta = instance.theta_min;

  Vector exposure = smooth(instance.kernel, as_vector(y));
  Score current = score_of(exposure, theta);
  SwapSearch best{y, current.min >= theta - kFeasTol, current.deficit};
  std::vector<long long> last_moved(static_cast<std::size_t>(n), std::numeric_limits<int>::min());
  const long long max_swaps = static_cast<long long>(n) * n / 2;
  int stall = 0;

  std::vector<std::pair<Score, Eigen::Index>> adds;
  for (long long swap = 0; swap < max_swaps && !best.feasible; ++swap) {
    const auto movable = [&](Eigen::Index v) { return swap - last_moved[static_cast<std::size_t>(v)] >= kTabuTenure; };
    adds.clear();
    for (Eigen::Index a = 0; a < n; ++a) {
      if (y[static_cast<std::size_t>(a)] == 1 || !movable(a)) continue;
      adds.emplace_back(score_of(exposure + k.col(a).cwiseProduct(inv_rows), theta), a);
    }
    std::stable_sort(adds.begin(), adds.end(), [](const auto& l, const auto& r) { return better(l.first, r.first); });
    if (adds.size() > kAddCandidates) adds.resize(kAddCandidates);

    Eigen::Index add = -1;
    Eigen::Index drop = -1;
    Score pick{};
    for (const auto& [unused, a] : adds) {
      const Vector raised = exposure + k.col(a).cwiseProduct(inv_rows);
      for (Eigen::Index d = 0; d < n; ++d) {
        if (y[static_cast<std::size_t>(d)] == 0 || !movable(d)) continue;
        const Score s = score_of(raised - k.col(d).cwiseProduct(inv_rows), theta);
        if (add < 0 || better(s, pick)) {
          add = a;
          drop = d;
          pick = s;
        }
      }
    }
    if (add < 0) break;

    y[static_cast<std::size_t>(add)] = 1;
    y[static_cast<std::size_t>(drop)] = 0;
    last_moved[static_cast<std::size_t>(add)] = swap;
    last_moved[static_cast<std::size_t>(drop)] = swap;
    exposure += (k.col(add) - k.col(drop)).cwiseProduct(inv_rows);
    current = pick;
    if (current.deficit < best.deficit - kFeasTol || current.min >= theta - kFeasTol) {
      best = {y, current.min >= theta - kFeasTol, current.deficit};
      stall = 0;
    } else if (++stall > kMaxStall) {
      break;
    }
  }
  return best;
}

// Places the positives one at a time where they cut the shortfall most.
Labeling greedy_construction(const RelabelInstance& instance) {
  const Matrix& k = instance.kernel.matrix();
  const Vector inv_rows = instance.kernel.row_sums().cwiseInverse();
  const auto n = static_cast<Eigen::Index>(instance.y_hat.size());
  Labeling y(instance.y_hat.size(), 0);
  Vector exposure = Vector::Zero(n);
  for (int placed = 0; placed < count_ones(instance.y_hat); ++placed) {
    Eigen::Index pick = -1;
    Score pick_score{};
    for (Eigen::Index a = 0; a < n; ++a) {
      if (y[static_cast<std::size_t>(a)] == 1) continue;
      const Score s = score_of(exposure + k.col(a).cwiseProduct(inv_rows), instance.theta_min);
      if (pick < 0 || better(s, pick_score)) {
        pick = a;
        pick_score = s;
      }
    }
    y[static_cast<std::size_t>(pick)] = 1;
    exposure += k.col(pick).cwiseProduct(inv_rows);
  }
  return y;
}

}  // namespace

double min_exposure(const Kernel& kernel, const Labeling& y) { return smooth(kernel, as_vector(y)).minCoeff(); }

bool satisfies_constraints(const RelabelInstance& instance, const Labeling& y_tilde, double slack) {
  if (y_tilde.size() != instance.y_hat.size()) return false;
  return count_ones(y_tilde) <= count_ones(instance.y_hat) &&
         min_exposure(instance.kernel, y_tilde) >= instance.theta_min - slack;
}

RelabelResult solve_exact(const RelabelInstance& instance) {
  check_instance(instance);
  if (instance.y_hat.size() > static_cast<std::size_t>(kExactSolverMaxNodes)) {
    throw DomainError("exact relabeling is limited to " + std::to_string(kExactSolverMaxNodes) +
                      " nodes; use solve_heuristic");
  }
  BranchAndBound bnb(instance);
  auto best = bnb.run();
  if (!best) return make_result(RelabelStatus::infeasible, instance.y_hat, instance.y_hat, instance.kernel);
  auto result = make_result(RelabelStatus::optimal, instance.y_hat, std::move(*best), instance.kernel);
  if (!satisfies_constraints(instance, result.y_tilde)) throw SolveError("exact relabeling violated its constraints");
  return result;
}

RelabelResult solve_heuristic(const RelabelInstance& instance) {
  check_instance(instance);
  SwapSearch search = swap_search(instance, instance.y_hat);
  if (!search.feasible) {
    // Second start, away from the original labels.
    SwapSearch restart = swap_search(instance, greedy_construction(instance));
    if (restart.feasible) search = std::move(restart);
  }
  const bool ok = search.feasible && satisfies_constraints(instance, search.y);
  return make_result(ok ? RelabelStatus::feasible : RelabelStatus::failed, instance.y_hat, std::move(search.y),
                     instance.kernel);
}

RelabelResult solve_relabel(const RelabelInstance& instance) {
  return instance.y_hat.size() <= static_cast<std::size_t>(kExactSolverMaxNodes) ? solve_exact(instance)
                                                                                : solve_heuristic(instance);
}

RelabelReport evaluate_relabel(const Labeling& y_hat, const RelabelResult& result, const Partition& labels,
                               const EntropyConfig& cfg) {
  if (y_hat.size() != result.y_tilde.size()) throw DomainError("labelings differ in length");
  RelabelReport report;
  report.delta0_before = between_group_inequality(as_vector(y_hat), labels, cfg);
  report.delta0_after = between_group_inequality(as_vector(result.y_tilde), labels, cfg);
  report.flip_fraction = static_cast<double>(hamming(y_hat, result.y_tilde)) / static_cast<double>(y_hat.size());
  return report;
}

std::vector<RelabelSweepRow> relabel_sweep(const Labeling& y_hat, const Kernel& kernel, const Partition& labels,
                                           double theta_max, int steps, const EntropyConfig& cfg) {
  if (steps < 2) throw DomainError("sweep needs at least two steps");
  if (!(theta_max >= 0.0 && theta_max <= 1.0)) throw DomainError("theta_max must lie in [0, 1]");
  std::vector<RelabelSweepRow> rows;
  for (int s = 0; s < steps; ++s) {
    const double theta = theta_max * static_cast<double>(s) / static_cast<double>(steps - 1);
    const RelabelInstance instance{y_hat, kernel, theta};
    const RelabelResult result = solve_relabel(instance);
    if (!result.ok()) break;
    const RelabelReport report = evaluate_relabel(y_hat, result, labels, cfg);
    rows.push_back({theta, result.flips, report.flip_fraction, report.delta0_after, result.min_exposure});
  }
  return rows;
}

}  // namespace homofair
