#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "homofair/kernel.hpp"
#include "text.hpp"

namespace homofair {

Kernel::Kernel(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DomainError("kernel must be square");
  if (matrix_.rows() == 0) throw DomainError("kernel must be nonempty");
  if (!matrix_.allFinite()) throw DomainError("kernel entries must be finite");
  if ((matrix_.array() < 0.0).any()) throw DomainError("kernel entries must be nonnegative");
  const Vector cols = matrix_.colwise().sum().transpose();
  column_sum_ = cols.mean();
  if (!(column_sum_ > 0.0)) throw DomainError("kernel column sums must be positive");
  const double worst = (cols.array() - column_sum_).abs().maxCoeff();
  if (worst > kColumnSumTolerance * column_sum_) {
    std::ostringstream msg;
    msg << "kernel column sums differ by " << worst / column_sum_ << " relative (tolerance "
        << kColumnSumTolerance << ")";
    throw DomainError(msg.str());
  }
  row_sums_ = matrix_.rowwise().sum();
}

Kernel Kernel::identity(Eigen::Index n) { return Kernel(Matrix::Identity(n, n)); }

Kernel Kernel::uniform(Eigen::Index n) { return Kernel(Matrix::Constant(n, n, 1.0 / static_cast<double>(n))); }

void write_kernel_csv(const Kernel& kernel, std::ostream& out) {
  const Matrix& m = kernel.matrix();
  out << m.rows() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Kernel read_kernel_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  const auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++number;
      if (!detail::is_comment_or_blank(line)) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("kernel CSV is empty", 0);
  const auto n_value = detail::parse_double(line);
  if (!n_value || *n_value < 1 || std::floor(*n_value) != *n_value) throw ParseError("kernel CSV header must be n", number);
  const auto n = static_cast<Eigen::Index>(*n_value);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError("kernel CSV has too few rows", number);
    const auto tokens = detail::split(line, detail::Delimiter::comma);
    if (static_cast<Eigen::Index>(tokens.size()) != n) throw ParseError("kernel CSV row has wrong width", number);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto v = detail::parse_double(tokens[static_cast<std::size_t>(j)]);
      if (!v) throw ParseError("kernel CSV entry is not a number", number);
      m(i, j) = *v;
    }
  }
  return Kernel(std::move(m));
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
constexpr char kMagic[4] = {'H', 'F', 'K', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ParseError("truncated binary kernel", 0);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_kernel_binary(const Kernel& kernel, std::ostream& out) {
  const Matrix& m = kernel.matrix();
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_le<double>(out, m(i, j));
  }
}

Kernel read_kernel_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a binary kernel (bad magic)", 0);
  }
  const auto n = get_le<std::uint64_t>(in);
  if (n == 0 || n > (1u << 20)) throw ParseError("binary kernel has implausible size", 0);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = get_le<double>(in);
  }
  return Kernel(std::move(m));
}

void save_kernel(const Kernel& kernel, const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot write " + path.string());
  binary ? write_kernel_binary(kernel, out) : write_kernel_csv(kernel, out);
}

Kernel load_kernel(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return binary ? read_kernel_binary(in) : read_kernel_csv(in);
}

void write_vector_csv(const Vector& values, std::ostream& out, const char* header) {
  out << header << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < values.size(); ++i) out << values[i] << '\n';
}

Vector read_vector_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    if (detail::is_comment_or_blank(line)) continue;
    const auto v = detail::parse_double(line);
    if (!v) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError("expected one number per line", number);
    }
    first = false;
    values.push_back(*v);
  }
  if (values.empty()) throw ParseError("outcome vector is empty", 0);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace homofair
