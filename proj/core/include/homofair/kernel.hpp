#pragma once

#include <filesystem>
#include <iosfwd>

#include "homofair/common.hpp"

namespace homofair {

/// Nonnegative n x n similarity matrix whose columns share one total.
///
/// Construction validates the matrix: square, finite, entries >= 0 and all
/// column sums equal to their mean within 1e-9 relative tolerance. Inputs
/// outside tolerance are rejected, never renormalized.
class Kernel {
 public:
  static constexpr double kColumnSumTolerance = 1e-9;

  explicit Kernel(Matrix matrix);

  static Kernel identity(Eigen::Index n);
  /// Every entry 1/n: one group spanning the population.
  static Kernel uniform(Eigen::Index n);

  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index size() const noexcept { return matrix_.rows(); }
  double column_sum() const noexcept { return column_sum_; }
  /// K 1, the per-node weight used by the smoothed inequality.
  const Vector& row_sums() const noexcept { return row_sums_; }

 private:
  Matrix matrix_;
  Vector row_sums_;
  double column_sum_ = 0.0;
};

// Dense CSV: first line holds n, then n rows of n comma-separated values.
void write_kernel_csv(const Kernel& kernel, std::ostream& out);
Kernel read_kernel_csv(std::istream& in);

// Binary: "HFK1", little-endian u64 n, then n*n little-endian f64 row-major.
void write_kernel_binary(const Kernel& kernel, std::ostream& out);
Kernel read_kernel_binary(std::istream& in);

void save_kernel(const Kernel& kernel, const std::filesystem::path& path);  // by extension: .bin or .csv
Kernel load_kernel(const std::filesystem::path& path);

// Outcome vectors: one value per line, optional header.
void write_vector_csv(const Vector& values, std::ostream& out, const char* header = "value");
Vector read_vector_csv(std::istream& in);

}  // namespace homofair
