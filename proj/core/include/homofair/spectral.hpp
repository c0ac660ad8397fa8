#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "homofair/common.hpp"
#include "homofair/graph.hpp"
#include "homofair/kernel.hpp"

namespace homofair {

/// Spectral node embedding: column k is the k-th retained eigenvector.
struct Embedding {
  Matrix vectors;      // n x d, orthonormal columns
  Vector eigenvalues;  // ascending, all above the zero threshold
  int dim() const noexcept { return static_cast<int>(vectors.cols()); }
};

struct KernelConfig {
  int dim = 2;
  double zero_tol = 1e-8;
};

/// Eigenvectors of I - D^-1/2 A D^-1/2 for the `dim` smallest eigenvalues
/// above `zero_tol`. Each vector is sign-fixed so that its largest-magnitude
/// entry (first one on ties) is positive.
Embedding laplacian_eigenmaps(const Graph& graph, const KernelConfig& cfg);

/// Cosine similarity of embedding rows, min-max scaled to [0, 1] and
/// column-normalized so that every column sums to n.
Kernel cosine_kernel(const Embedding& embedding);

/// Block kernel of a detected partition.
Kernel community_kernel(const Partition& partition);

enum class KernelKind { laplacian, ground_truth, identity, louvain };

KernelKind parse_kernel_kind(const std::string& name);
std::string to_string(KernelKind kind);

struct KernelRecipe {
  KernelKind kind = KernelKind::laplacian;
  int dim = 2;
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

/// Builds any of the kernels the experiments compare. ground_truth needs a
/// fully labeled graph.
Kernel build_kernel(const Graph& graph, const KernelRecipe& recipe);

/// n rows of d comma-separated coordinates, plus a JSON sidecar with the
/// eigenvalues and configuration.
void write_embedding_csv(const Embedding& embedding, std::ostream& out);
void export_embedding(const Embedding& embedding, const KernelConfig& cfg, const std::filesystem::path& csv_path);

}  // namespace homofair
