#include <random>

#include "homofair/ranking.hpp"

namespace homofair {
namespace {

// Solves min_X |R - X F^T|^2 + reg |X|^2 for X given the fixed factor F.
Matrix ridge_update(const Matrix& r, const Matrix& fixed, double reg) {
  Matrix gram = fixed.transpose() * fixed;
  gram.diagonal().array() += reg;
  return gram.ldlt().solve(fixed.transpose() * r.transpose()).transpose();
}

}  // namespace

PreferenceMatrix als_complete(const Matrix& interactions, const AlsConfig& cfg) {
  if (interactions.size() == 0) throw DomainError("ratings are empty");
  if (cfg.rank < 1) throw DomainError("ALS rank must be positive");
  if (cfg.iterations < 1) throw DomainError("ALS needs at least one iteration");
  if (!(cfg.reg >= 0.0)) throw DomainError("ALS regularization must be nonnegative");
  if (!interactions.allFinite()) throw DomainError("ratings contain non-finite values");

  const Matrix r = (interactions.array() != 0.0).cast<double>();
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (r.row(i).sum() == 0.0) throw DomainError("user " + std::to_string(i) + " has no ratings");
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  Matrix items(r.cols(), cfg.rank);
  for (Eigen::Index k = 0; k < items.size(); ++k) items.data()[k] = normal(rng);
  Matrix users;
  for (int it = 0; it < cfg.iterations; ++it) {
    users = ridge_update(r, items, cfg.reg);
    items = ridge_update(r.transpose(), users, cfg.reg);
  }
  return (users * items.transpose()).cwiseMax(0.0).cwiseMin(1.0);
}

PreferenceMatrix als_complete(const RatingTable& ratings, NodeId users, const AlsConfig& cfg) {
  if (ratings.entries.empty() || ratings.item_names.empty()) throw DomainError("ratings are empty");
  Matrix interactions = Matrix::Zero(users, static_cast<Eigen::Index>(ratings.item_names.size()));
  for (const Rating& rating : ratings.entries) {
    if (rating.user < 0 || rating.user >= users) throw DomainError("rating user out of range");
    interactions(rating.user, rating.item) += rating.count;
  }
  return als_complete(interactions, cfg);
}

}  // namespace homofair
