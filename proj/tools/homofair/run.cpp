#include "run.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "version.hpp"

namespace homofair::cli {

std::uint64_t default_seed() {
  const char* env = std::getenv("HOMOFAIR_SEED");
  if (!env || !*env) return 0;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("HOMOFAIR_SEED must be an unsigned integer");
  return value;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::string format_number(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

Run::Run(std::string command, std::filesystem::path out) : command_(std::move(command)), out_(std::move(out)) {
  if (out_.empty()) throw UsageError("--out is required");
}

void Run::input(const std::filesystem::path& path) {
  inputs_.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void Run::commit(const std::function<void(std::ostream&)>& writer, bool binary) {
  std::filesystem::path tmp = out_;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, binary ? std::ios::binary : std::ios::out);
    if (!file) throw std::runtime_error("cannot write " + tmp.string());
    try {
      writer(file);
    } catch (...) {
      file.close();
      std::filesystem::remove(tmp);
      throw;
    }
    file.flush();
    if (!file) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + out_.string());
    }
  }
  std::filesystem::rename(tmp, out_);

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");

  const nlohmann::json manifest = {
      {"command", command_},
      {"parameters", params_},
      {"seeds", seeds_},
      {"version", kVersion},
      {"inputs", inputs_},
      {"output", {{"path", out_.string()}, {"sha256", sha256_file(out_)}}},
      {"timestamp", stamp.str()},
  };
  std::filesystem::path mpath = out_;
  mpath += ".manifest.json";
  std::filesystem::path mtmp = mpath;
  mtmp += ".tmp";
  {
    std::ofstream m(mtmp);
    m << manifest.dump(2) << '\n';
    if (!m) throw std::runtime_error("cannot write " + mpath.string());
  }
  std::filesystem::rename(mtmp, mpath);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::separate() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::operator<<(double x) {
  separate();
  out_ << format_number(x);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long x) {
  separate();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  separate();
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out_ << s;
  } else {
    out_ << '"';
    for (char c : s) out_ << (c == '"' ? std::string("\"\"") : std::string(1, c));
    out_ << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace homofair::cli
