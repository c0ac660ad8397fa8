#include <algorithm>
#include <cmath>
#include <numeric>

#include "homofair/inequality.hpp"
#include "homofair/ranking.hpp"

namespace homofair {
namespace {

void check_shapes(const Matrix& e, const PreferenceMatrix& rho, const Kernel& kernel) {
  if (e.rows() != rho.rows() || e.cols() != rho.cols()) throw DomainError("exposure and preference shapes differ");
  if (kernel.size() != e.rows()) throw DomainError("kernel size does not match the number of users");
}

void check_eta(double eta) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
}

// Per-item smoothed dispersion given the kernel-multiplied exposures K e.
Vector item_dispersion(const Matrix& ke, const Vector& row_sums, double eta) {
  const double total = row_sums.sum();
  const auto n = static_cast<double>(ke.rows());
  Vector out(ke.cols());
  for (Eigen::Index j = 0; j < ke.cols(); ++j) {
    const double mean = ke.col(j).sum() / total;
    const Vector dev = ke.col(j).cwiseQuotient(row_sums).array() - mean;
    out[j] = std::sqrt(eta + n / total * (row_sums.array() * dev.array().square()).sum());
  }
  return out;
}

double objective_from(const Matrix& e, const Matrix& ke, const PreferenceMatrix& rho, const Vector& row_sums,
                      const RankingObjectiveConfig& cfg) {
  const double util = rho.cwiseProduct(e).sum() / static_cast<double>(e.rows());
  if (cfg.beta == 0.0) return util;
  return util - cfg.beta * item_dispersion(ke, row_sums, cfg.eta).mean();
}

Matrix gradient_from(const Matrix& ke, const PreferenceMatrix& rho, const Kernel& kernel,
                     const RankingObjectiveConfig& cfg) {
  const auto n = static_cast<double>(rho.rows());
  const auto m = static_cast<double>(rho.cols());
  Matrix grad = rho / n;
  if (cfg.beta == 0.0) return grad;
  const Vector& r = kernel.row_sums();
  const double total = r.sum();
  const Vector disp = item_dispersion(ke, r, cfg.eta);
  Matrix dev = ke.array().colwise() / r.array();
  for (Eigen::Index j = 0; j < dev.cols(); ++j) dev.col(j).array() -= ke.col(j).sum() / total;
  // d/de_ij sqrt(eta + Q_j) = (n / total) (K^T (a_j - mu_j))_i / F_j
  Matrix pen = kernel.matrix().transpose() * dev;
  for (Eigen::Index j = 0; j < pen.cols(); ++j) pen.col(j) *= n / total / disp[j];
  grad -= (cfg.beta / m) * pen;
  return grad;
}

Vector exposure_row(const Ranking& ranking, const PositionWeights& weights) {
  Vector row = Vector::Zero(weights.size());
  for (std::size_t k = 0; k < ranking.size(); ++k) row[ranking[k]] = weights.b[static_cast<Eigen::Index>(k)];
  return row;
}

Ranking row_ranking(const Matrix& scores, Eigen::Index i, int k_bar) {
  const Vector row = scores.row(i).transpose();
  return top_k({row.data(), static_cast<std::size_t>(row.size())}, k_bar);
}

void check_weights(const PositionWeights& weights, Eigen::Index m) {
  if (weights.size() != m) throw DomainError("position weights must have one entry per item");
}

}  // namespace

PositionWeights PositionWeights::dcg(int m, int k_bar) {
  if (m < 1 || k_bar < 1 || k_bar > m) throw DomainError("need 1 <= k_bar <= m");
  PositionWeights w;
  w.k_bar = k_bar;
  w.b = Vector::Zero(m);
  for (int k = 1; k <= k_bar; ++k) w.b[k - 1] = 1.0 / std::log2(1.0 + k);
  return w;
}

Vector utility(const Matrix& e, const PreferenceMatrix& rho) {
  if (e.rows() != rho.rows() || e.cols() != rho.cols()) throw DomainError("exposure and preference shapes differ");
  return rho.cwiseProduct(e).rowwise().sum();
}

double unfairness(const Matrix& e, const Kernel& kernel, double eta) {
  check_eta(eta);
  if (kernel.size() != e.rows()) throw DomainError("kernel size does not match the number of users");
  double total = 0.0;
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    total += std_dispersion(smooth(kernel, e.col(j)), eta, kernel.row_sums());
  }
  return total / static_cast<double>(e.cols());
}

double ranking_objective(const Matrix& e, const PreferenceMatrix& rho, const Kernel& kernel,
                         const RankingObjectiveConfig& cfg) {
  check_shapes(e, rho, kernel);
  check_eta(cfg.eta);
  return utility(e, rho).mean() - cfg.beta * unfairness(e, kernel, cfg.eta);
}

Matrix ranking_gradient(const Matrix& e, const PreferenceMatrix& rho, const Kernel& kernel,
                        const RankingObjectiveConfig& cfg) {
  check_shapes(e, rho, kernel);
  check_eta(cfg.eta);
  return gradient_from(kernel.matrix() * e, rho, kernel, cfg);
}

Ranking top_k(std::span<const double> scores, int k_bar) {
  if (k_bar < 0 || static_cast<std::size_t>(k_bar) > scores.size()) throw DomainError("k_bar exceeds the item count");
  Ranking items(scores.size());
  std::iota(items.begin(), items.end(), 0);
  std::partial_sort(items.begin(), items.begin() + k_bar, items.end(), [&](std::int32_t a, std::int32_t b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    return sa != sb ? sa > sb : a < b;
  });
  items.resize(static_cast<std::size_t>(k_bar));
  return items;
}

Vector lmo_topk(const Vector& scores, const PositionWeights& weights) {
  check_weights(weights, scores.size());
  return exposure_row(top_k({scores.data(), static_cast<std::size_t>(scores.size())}, weights.k_bar), weights);
}

ExposurePolicy sorted_policy(const PreferenceMatrix& rho, const PositionWeights& weights) {
  check_weights(weights, rho.cols());
  ExposurePolicy policy;
  policy.e = Matrix::Zero(rho.rows(), rho.cols());
  policy.mixture.resize(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    Ranking ranking = row_ranking(rho, i, weights.k_bar);
    policy.e.row(i) = exposure_row(ranking, weights).transpose();
    policy.mixture[static_cast<std::size_t>(i)].push_back({1.0, std::move(ranking)});
  }
  return policy;
}

bool in_ranking_polytope(const Vector& row, const PositionWeights& weights, double tol) {
  if (row.size() != weights.size()) return false;
  if ((row.array() < -tol).any()) return false;
  if (std::abs(row.sum() - weights.b.sum()) > tol) return false;
  std::vector<double> sorted(row.data(), row.data() + row.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    lhs += sorted[k];
    rhs += weights.b[static_cast<Eigen::Index>(k)];
    if (lhs > rhs + tol) return false;
  }
  return true;
}

ExposurePolicy frank_wolfe(const PreferenceMatrix& rho, const Kernel& kernel, const PositionWeights& weights,
                           const RankingObjectiveConfig& cfg, const FrankWolfeOptions& options) {
  if (options.iterations < 1) throw DomainError("Frank-Wolfe needs at least one iteration");
  check_eta(cfg.eta);
  if (cfg.beta < 0.0) throw DomainError("beta must be nonnegative");
  if (kernel.size() != rho.rows()) throw DomainError("kernel size does not match the number of users");
  if ((rho.array() < 0.0).any() || (rho.array() > 1.0).any()) throw DomainError("preferences must lie in [0, 1]");

  ExposurePolicy policy = sorted_policy(rho, weights);
  const Vector& r = kernel.row_sums();
  const Eigen::Index n = rho.rows();
  Matrix ke = kernel.matrix() * policy.e;
  double current = objective_from(policy.e, ke, rho, r, cfg);
  policy.trace.push_back(current);

  Matrix vertex(n, rho.cols());
  std::vector<Ranking> vertex_rankings(static_cast<std::size_t>(n));
  for (int t = 0; t < options.iterations; ++t) {
    const Matrix grad = gradient_from(ke, rho, kernel, cfg);
    for (Eigen::Index i = 0; i < n; ++i) {
      vertex_rankings[static_cast<std::size_t>(i)] = row_ranking(grad, i, weights.k_bar);
      vertex.row(i) = exposure_row(vertex_rankings[static_cast<std::size_t>(i)], weights).transpose();
    }
    const double gap = grad.cwiseProduct(vertex - policy.e).sum();
    if (gap <= options.gap_tolerance) break;

    const Matrix kv = kernel.matrix() * vertex;
    double gamma = 2.0 / (t + 2.0);
    double next = objective_from(policy.e + gamma * (vertex - policy.e), ke + gamma * (kv - ke), rho, r, cfg);
    for (int halving = 0; next < current && halving < 60; ++halving) {
      gamma *= 0.5;
      next = objective_from(policy.e + gamma * (vertex - policy.e), ke + gamma * (kv - ke), rho, r, cfg);
    }
    if (next < current) break;

    policy.e += gamma * (vertex - policy.e);
    ke += gamma * (kv - ke);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& mix = policy.mixture[static_cast<std::size_t>(i)];
      for (auto& c : mix) c.weight *= 1.0 - gamma;
      auto& ranking = vertex_rankings[static_cast<std::size_t>(i)];
      auto it = std::find_if(mix.begin(), mix.end(), [&](const MixtureComponent& c) { return c.ranking == ranking; });
      if (it != mix.end()) {
        it->weight += gamma;
      } else {
        mix.push_back({gamma, ranking});
      }
      std::erase_if(mix, [](const MixtureComponent& c) { return c.weight <= 0.0; });
    }
    current = next;
    policy.trace.push_back(current);
    policy.iterations = t + 1;
  }
  return policy;
}

std::vector<TradeoffRow> tradeoff_sweep(const PreferenceMatrix& rho, std::span<const NamedKernel> kernels,
                                        const Partition& labels, std::span<const double> betas,
                                        const PositionWeights& weights, double eta,
                                        const FrankWolfeOptions& options) {
  const Kernel truth = ground_truth_kernel(labels);
  if (truth.size() != rho.rows()) throw DomainError("labels do not match the number of users");
  std::vector<TradeoffRow> rows;
  for (const NamedKernel& named : kernels) {
    for (double beta : betas) {
      const RankingObjectiveConfig cfg{beta, eta, KernelKind::laplacian};
      const ExposurePolicy policy = frank_wolfe(rho, named.kernel, weights, cfg, options);
      rows.push_back({beta, named.name, utility(policy.e, rho).mean(), unfairness(policy.e, truth, eta),
                      policy.iterations});
    }
  }
  return rows;
}

}  // namespace homofair
