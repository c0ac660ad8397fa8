#include <cmath>

#include "homofair/inequality.hpp"

namespace homofair {
namespace {

void check_alpha(const EntropyConfig& cfg) {
  if (cfg.variant == EntropyVariant::normalized_variance) return;
  if (!std::isfinite(cfg.alpha)) throw DomainError("entropy alpha must be finite");
  if (cfg.alpha == 0.0 || cfg.alpha == 1.0) {
    throw DomainError("entropy alpha in {0, 1} (limiting indices) is not supported");
  }
}

void check_values(const Vector& x, const Vector* weights, const EntropyConfig& cfg) {
  if (x.size() == 0) throw DomainError("outcome vector is empty");
  const bool strict = cfg.variant == EntropyVariant::generalized_entropy && cfg.alpha < 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (weights && (*weights)[i] == 0.0) continue;
    if (!std::isfinite(x[i]) || x[i] < 0.0 || (strict && x[i] == 0.0)) {
      throw DomainError(strict ? "entropy index needs strictly positive outcomes"
                               : "entropy index needs nonnegative finite outcomes");
    }
  }
}

// Shared core: normalized weights, weighted mean, index value.
double weighted_index(const Vector& x, const Vector& w, double total, const EntropyConfig& cfg) {
  double mu = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (w[i] != 0.0) mu += w[i] * x[i];
  }
  mu /= total;
  if (!(mu > 0.0)) throw DomainError("entropy index needs a positive mean");

  double acc = 0.0;
  if (cfg.variant == EntropyVariant::normalized_variance) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (w[i] != 0.0) acc += w[i] * (x[i] - mu) * (x[i] - mu);
    }
    return acc / total / (mu * mu);
  }
  const double a = cfg.alpha;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (w[i] != 0.0) acc += w[i] * (std::pow(x[i] / mu, a) - 1.0);
  }
  return acc / total / (a * (a - 1.0));
}

double q_of(double mu, double alpha) { return std::pow(mu, alpha); }

}  // namespace

double ge_index(const Vector& x, const EntropyConfig& cfg) {
  check_alpha(cfg);
  check_values(x, nullptr, cfg);
  return weighted_index(x, Vector::Ones(x.size()), static_cast<double>(x.size()), cfg);
}

double ge_weighted(const Vector& x, const Vector& weights, const EntropyConfig& cfg) {
  check_alpha(cfg);
  if (weights.size() != x.size()) throw DomainError("weights and outcomes differ in length");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) throw DomainError("weights must be nonnegative and finite");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw DomainError("weights have zero total");
  check_values(x, &weights, cfg);
  return weighted_index(x, weights, total, cfg);
}

Vector smooth(const Kernel& kernel, const Vector& y) {
  if (y.size() != kernel.size()) throw DomainError("outcome length does not match kernel size");
  const Vector& rows = kernel.row_sums();
  if ((rows.array() <= 0.0).any()) throw DomainError("kernel has a zero row sum");
  return (kernel.matrix() * y).cwiseQuotient(rows);
}

Kernel ground_truth_kernel(const Partition& labels) {
  if (labels.empty()) throw DomainError("partition is empty");
  const auto members = group_members(labels);
  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix k = Matrix::Zero(n, n);
  for (const auto& group : members) {
    if (group.empty()) throw DomainError("partition has an empty group");
    const double w = 1.0 / static_cast<double>(group.size());
    for (NodeId i : group) {
      for (NodeId j : group) k(i, j) = w;
    }
  }
  return Kernel(std::move(k));
}

double group_free_inequality(const Kernel& kernel, const Vector& y, const EntropyConfig& cfg) {
  return ge_weighted(smooth(kernel, y), kernel.row_sums(), cfg);
}

double between_group_inequality(const Vector& y, const Partition& labels, const EntropyConfig& cfg) {
  if (static_cast<Eigen::Index>(labels.size()) != y.size()) throw DomainError("labels and outcomes differ in length");
  const auto members = group_members(labels);
  Vector means(static_cast<Eigen::Index>(members.size()));
  Vector sizes(static_cast<Eigen::Index>(members.size()));
  for (std::size_t g = 0; g < members.size(); ++g) {
    if (members[g].empty()) throw DomainError("partition has an empty group");
    double s = 0.0;
    for (NodeId i : members[g]) s += y[i];
    sizes[static_cast<Eigen::Index>(g)] = static_cast<double>(members[g].size());
    means[static_cast<Eigen::Index>(g)] = s / sizes[static_cast<Eigen::Index>(g)];
  }
  return ge_weighted(means, sizes, cfg);
}

Decomposition decompose(const Kernel& kernel, const Vector& y, const EntropyConfig& cfg) {
  check_alpha(cfg);
  check_values(y, nullptr, cfg);
  // The normalized variance is twice the alpha = 2 index and decomposes
  // with the same weights.
  const bool nv = cfg.variant == EntropyVariant::normalized_variance;
  const EntropyConfig base{nv ? 2.0 : cfg.alpha, EntropyVariant::generalized_entropy};
  const double scale = nv ? 2.0 : 1.0;

  const Vector smoothed = smooth(kernel, y);
  const Vector& rows = kernel.row_sums();
  const double n = static_cast<double>(y.size());
  const double mu = y.mean();
  const double denom = q_of(mu, base.alpha) * kernel.column_sum() * n;

  double within = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Vector row = kernel.matrix().row(i).transpose();
    within += q_of(smoothed[i], base.alpha) * rows[i] / denom * ge_weighted(y, row, base);
  }
  return {scale * within, scale * ge_weighted(smoothed, rows, base)};
}

double std_dispersion(const Vector& y, double eta, const std::optional<Vector>& weights) {
  if (!(eta > 0.0)) throw DomainError("dispersion smoothing eta must be positive");
  if (y.size() == 0) throw DomainError("outcome vector is empty");
  if (!weights) {
    const double mean = y.mean();
    return std::sqrt(eta + (y.array() - mean).square().sum());
  }
  const Vector& w = *weights;
  if (w.size() != y.size()) throw DomainError("weights and outcomes differ in length");
  if ((w.array() < 0.0).any()) throw DomainError("weights must be nonnegative");
  const double total = w.sum();
  if (!(total > 0.0)) throw DomainError("weights have zero total");
  const double mean = w.dot(y) / total;
  const double n = static_cast<double>(y.size());
  return std::sqrt(eta + n / total * (w.array() * (y.array() - mean).square()).sum());
}

InequalityBounds confounder_bounds(const BoundsInput& input) {
  if (!(input.p_s > 0.0)) throw DomainError("sensitive kernel value p must be positive");
  if (!(input.q_c >= 0.0) || !std::isfinite(input.q_c)) throw DomainError("confounder mass q must be nonnegative");
  if (!(input.epsilon >= 0.0 && input.epsilon <= 0.5)) throw DomainError("epsilon must lie in [0, 1/2]");
  const double delta0 = 4.0 * input.epsilon * input.epsilon;
  const double share = input.p_s / (input.p_s + input.q_c);
  const double leak = input.q_c / (input.p_s + input.q_c);
  return {share * share * delta0, delta0 + leak * leak * (1.0 - delta0), delta0};
}

double blend_inequality(double p, double q, double delta0) {
  if (!(q >= 0.0) || !(p > q)) throw DomainError("blending needs p > q >= 0");
  if (!(delta0 >= 0.0)) throw DomainError("inequality must be nonnegative");
  const double damp = (p - q) / (p + q);
  return damp * damp * delta0;
}

}  // namespace homofair
