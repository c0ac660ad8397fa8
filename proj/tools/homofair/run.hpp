#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace homofair::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2, failed = 3 };

/// Bad flag combination detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimization ran but produced nothing usable.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed used when --seed is absent: HOMOFAIR_SEED if set, else 0.
std::uint64_t default_seed();

std::string sha256_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

/// Collects what a command read and how it was configured, then writes the
/// output atomically next to `<out>.manifest.json`.
class Run {
 public:
  Run(std::string command, std::filesystem::path out);

  void param(const std::string& key, nlohmann::json value) { params_[key] = std::move(value); }
  void seed(const std::string& key, std::uint64_t value) { seeds_[key] = value; }
  void input(const std::filesystem::path& path);

  /// Writes into a temporary sibling and renames it over `out` once the
  /// writer returns; then writes the manifest.
  void commit(const std::function<void(std::ostream&)>& writer, bool binary = false);

  const std::filesystem::path& out() const noexcept { return out_; }

 private:
  std::string command_;
  std::filesystem::path out_;
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
};

/// Writes a CSV header line followed by rows of numbers or strings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long long x);
  CsvWriter& operator<<(int x) { return *this << static_cast<long long>(x); }
  CsvWriter& operator<<(const std::string& s);
  void end_row();

 private:
  void separate();

  std::ostream& out_;
  bool first_ = true;
};

}  // namespace homofair::cli
