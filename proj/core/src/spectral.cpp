#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "homofair/inequality.hpp"
#include "homofair/spectral.hpp"

namespace homofair {

Embedding laplacian_eigenmaps(const Graph& graph, const KernelConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (cfg.dim < 1) throw DomainError("embedding dimension must be at least 1");
  if (n < cfg.dim + 1) throw DomainError("graph needs at least dim + 1 nodes");

  Vector inv_sqrt_degree(n);
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    const double s = graph.strength(i);
    if (!(s > 0.0)) {
      throw DomainError("node '" + graph.node_names()[static_cast<std::size_t>(i)] + "' is isolated");
    }
    inv_sqrt_degree[i] = 1.0 / std::sqrt(s);
  }
  Matrix laplacian = Matrix::Identity(n, n);
  for (const Edge& e : graph.edges()) {
    const double v = e.weight * inv_sqrt_degree[e.u] * inv_sqrt_degree[e.v];
    laplacian(e.u, e.v) -= v;
    laplacian(e.v, e.u) -= v;
  }

  const Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success) throw SolveError("eigendecomposition failed");
  const Vector& values = solver.eigenvalues();

  Eigen::Index first = 0;
  while (first < n && values[first] <= cfg.zero_tol) ++first;
  const Eigen::Index available = n - first;
  if (available < cfg.dim) {
    throw DomainError("requested " + std::to_string(cfg.dim) + " dimensions but only " + std::to_string(available) +
                      " non-zero eigenvalues are available");
  }

  Embedding out;
  out.eigenvalues = values.segment(first, cfg.dim);
  out.vectors = solver.eigenvectors().middleCols(first, cfg.dim);
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(out.vectors(i, k));
      // strict comparison keeps the first index among equal magnitudes; the
      // small slack absorbs rounding between mirrored entries
      if (a > best + 1e-12) {
        best = a;
        arg = i;
      }
    }
    if (out.vectors(arg, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

Kernel cosine_kernel(const Embedding& embedding) {
  const Matrix& z = embedding.vectors;
  const auto n = z.rows();
  if (n == 0) throw DomainError("embedding is empty");
  const Vector norms = z.rowwise().norm();
  if ((norms.array() <= 1e-300).any()) throw DomainError("embedding has a zero-norm row");
  const Matrix unit = norms.cwiseInverse().asDiagonal() * z;
  Matrix sim = unit * unit.transpose();
  const double lo = sim.minCoeff();
  const double hi = sim.maxCoeff();
  if (!(hi - lo > 1e-12)) throw DomainError("cosine similarity is constant; kernel is degenerate");
  sim = (sim.array() - lo) / (hi - lo);
  const Vector cols = sim.colwise().sum().transpose();
  Matrix k = static_cast<double>(n) * sim * cols.cwiseInverse().asDiagonal();
  return Kernel(std::move(k));
}

Kernel community_kernel(const Partition& partition) { return ground_truth_kernel(partition); }

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "laplacian") return KernelKind::laplacian;
  if (name == "ground-truth" || name == "ground_truth") return KernelKind::ground_truth;
  if (name == "identity") return KernelKind::identity;
  if (name == "louvain") return KernelKind::louvain;
  throw DomainError("unknown kernel kind '" + name + "'");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::laplacian: return "laplacian";
    case KernelKind::ground_truth: return "ground-truth";
    case KernelKind::identity: return "identity";
    case KernelKind::louvain: return "louvain";
  }
  return "unknown";
}

Kernel build_kernel(const Graph& graph, const KernelRecipe& recipe) {
  switch (recipe.kind) {
    case KernelKind::laplacian:
      return cosine_kernel(laplacian_eigenmaps(graph, {recipe.dim, 1e-8}));
    case KernelKind::ground_truth:
      if (!graph.fully_labeled()) throw DomainError("ground-truth kernel needs every node labeled");
      return ground_truth_kernel(graph.labels());
    case KernelKind::identity:
      return Kernel::identity(graph.node_count());
    case KernelKind::louvain:
      return community_kernel(louvain(graph, {recipe.resolution, recipe.seed}));
  }
  throw DomainError("unknown kernel kind");
}

void write_embedding_csv(const Embedding& embedding, std::ostream& out) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < embedding.vectors.rows(); ++i) {
    for (Eigen::Index k = 0; k < embedding.vectors.cols(); ++k) {
      if (k) out << ',';
      out << embedding.vectors(i, k);
    }
    out << '\n';
  }
}

void export_embedding(const Embedding& embedding, const KernelConfig& cfg, const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot write " + csv_path.string());
    write_embedding_csv(embedding, out);
  }
  nlohmann::json side;
  side["dim"] = cfg.dim;
  side["zero_tol"] = cfg.zero_tol;
  side["eigenvalues"] = std::vector<double>(embedding.eigenvalues.begin(), embedding.eigenvalues.end());
  std::ofstream out(csv_path.string() + ".json");
  out << side.dump(2) << '\n';
}

}  // namespace homofair
