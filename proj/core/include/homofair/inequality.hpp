#pragma once

#include <optional>

#include "homofair/common.hpp"
#include "homofair/kernel.hpp"

namespace homofair {

enum class EntropyVariant {
  generalized_entropy,  // F(x) = 1/(n a (a-1)) sum[(x_i/mu)^a - 1]
  normalized_variance,  // var(x) / mu^2, twice the a = 2 index
};

struct EntropyConfig {
  double alpha = 2.0;
  EntropyVariant variant = EntropyVariant::generalized_entropy;

  static EntropyConfig normalized_variance() { return {2.0, EntropyVariant::normalized_variance}; }
};

/// Generalized entropy index of x.
///
/// Values must be positive when alpha < 0; for alpha > 0 zeros are allowed
/// as long as the mean is positive (the index stays finite there). alpha in
/// {0, 1} is not supported.
double ge_index(const Vector& x, const EntropyConfig& cfg = {});

/// Weighted index: weights are normalized to sum to one and the mean is the
/// weighted mean. Weights must be nonnegative with a positive total.
double ge_weighted(const Vector& x, const Vector& weights, const EntropyConfig& cfg = {});

/// Averaging operator A(K, y) = K y / K 1.
Vector smooth(const Kernel& kernel, const Vector& y);

/// Block kernel of a partition: 1/|g| between members of the same group g.
Kernel ground_truth_kernel(const Partition& labels);

/// Group-free between-group inequality F(A(K, y), K 1).
double group_free_inequality(const Kernel& kernel, const Vector& y, const EntropyConfig& cfg = {});

/// Partition between-group inequality: the weighted index of group means
/// with group-size weights.
double between_group_inequality(const Vector& y, const Partition& labels, const EntropyConfig& cfg = {});

struct Decomposition {
  double within = 0.0;
  double between = 0.0;
};

/// Splits F(y) into a kernel-weighted within term and the group-free
/// between term. Row i of K weights the within-neighbourhood index of i.
Decomposition decompose(const Kernel& kernel, const Vector& y, const EntropyConfig& cfg = {});

/// sqrt(eta + sum_i (y_i - mean)^2). With weights, squared deviations from
/// the weighted mean are scaled by n w_i / |w|_1, which reduces to the
/// unweighted form for uniform weights.
double std_dispersion(const Vector& y, double eta, const std::optional<Vector>& weights = std::nullopt);

struct BoundsInput {
  double p_s = 1.0;      // within-group sensitive kernel value
  double q_c = 0.0;      // confounder mass parameter
  double epsilon = 0.0;  // outcome imbalance between the two halves
};

struct InequalityBounds {
  double lower = 0.0;
  double upper = 0.0;
  double delta0 = 0.0;
};

/// Closed-form band for the measured inequality of a two-group population
/// under confounding similarities (normalized-variance scale).
InequalityBounds confounder_bounds(const BoundsInput& input);

/// ((p - q) / (p + q))^2 * delta0: inequality left after blending two equal
/// groups with cross-group similarity q < p.
double blend_inequality(double p, double q, double delta0);

}  // namespace homofair
