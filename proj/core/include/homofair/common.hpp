#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace homofair {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using NodeId = std::int32_t;

// Node -> group id, dense ids 0..k-1. Used for ground-truth labels and
// detected communities alike.
using Partition = std::vector<int>;

inline constexpr int kUnlabeled = -1;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input could not be parsed. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A precondition or parameter-domain violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An optimization could not produce a usable result.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// Number of groups in a partition (max id + 1); throws on negative ids.
int group_count(const Partition& partition);

/// Members of each group, in ascending node order.
std::vector<std::vector<NodeId>> group_members(const Partition& partition);

/// splitmix64 finalizer; derives independent sub-seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(b + 0x51ed27ULL));
}

}  // namespace homofair
