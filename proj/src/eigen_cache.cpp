#include "kicked_top/eigen_cache.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace kicked_top {

namespace {

constexpr std::array<char, 8> kMagic = {'K', 'T', 'E', 'I', 'G', 'S', 'Y', 'S'};

class LittleEndianWriter {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void i8(std::int8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void raw(const char* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }
  void pad_to(std::size_t alignment) {
    while (bytes_.size() % alignment != 0) bytes_.push_back(0);
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> bytes_;
};

class LittleEndianReader {
 public:
  explicit LittleEndianReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  bool ok(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::uint64_t get(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += n;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::int8_t i8() { return static_cast<std::int8_t>(bytes_[pos_++]); }
  bool magic() {
    if (!ok(kMagic.size())) return false;
    const bool match = std::memcmp(bytes_.data() + pos_, kMagic.data(), kMagic.size()) == 0;
    pos_ += kMagic.size();
    return match;
  }
  void align(std::size_t alignment) {
    while (pos_ % alignment != 0) ++pos_;
  }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t method_code(DiagonalizationMethod method) {
  return method == DiagonalizationMethod::sector ? 1u : 0u;
}

}  // namespace

std::uint64_t eigen_cache_key(const KickedTopParams& params, DiagonalizationMethod method) {
  LittleEndianWriter w;
  w.i64(params.j);
  w.f64(params.kappa);
  w.f64(params.alpha);
  w.u32(method_code(method));
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (char c : w.bytes()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

void save_eigensystem(const std::filesystem::path& path, const FloquetEigensystem& eig) {
  const auto n = static_cast<std::uint64_t>(eig.dim());
  LittleEndianWriter w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kEigenCacheVersion);
  w.u32(method_code(eig.method));
  w.i64(eig.params.j);
  w.f64(eig.params.kappa);
  w.f64(eig.params.alpha);
  w.u64(eigen_cache_key(eig.params, eig.method));
  w.u64(n);
  w.i32(eig.degenerate_clusters);
  w.u32(0);
  for (std::uint64_t i = 0; i < n; ++i) w.f64(eig.quasienergies(i));
  for (Parity p : eig.parities) w.i8(static_cast<std::int8_t>(p));
  w.pad_to(8);
  for (std::uint64_t c = 0; c < n; ++c) {
    for (std::uint64_t r = 0; r < n; ++r) {
      w.f64(eig.eigenvectors(r, c).real());
      w.f64(eig.eigenvectors(r, c).imag());
    }
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write eigensystem cache " + tmp.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw std::runtime_error("short write to eigensystem cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<FloquetEigensystem> load_eigensystem(const std::filesystem::path& path,
                                                   const KickedTopParams& params, DiagonalizationMethod method) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  LittleEndianReader r{std::vector<char>(std::istreambuf_iterator<char>(in), {})};
  if (!r.ok(64) || !r.magic()) return std::nullopt;
  if (r.u32() != kEigenCacheVersion) return std::nullopt;
  const std::uint32_t code = r.u32();
  const std::int64_t j = r.i64();
  const double kappa = r.f64();
  const double alpha = r.f64();
  const std::uint64_t key = r.u64();
  const std::uint64_t n = r.u64();
  const std::int32_t clusters = r.i32();
  r.u32();
  if (code != method_code(method) || j != params.j || kappa != params.kappa || alpha != params.alpha ||
      key != eigen_cache_key(params, method) || n != static_cast<std::uint64_t>(2 * params.j + 1)) {
    return std::nullopt;
  }
  const std::uint64_t vectors_offset = (64 + 9 * n + 7) / 8 * 8;
  if (!r.ok(vectors_offset - 64 + 16 * n * n)) return std::nullopt;

  FloquetEigensystem eig;
  eig.params = params;
  eig.method = method;
  eig.degenerate_clusters = clusters;
  eig.quasienergies.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) eig.quasienergies(i) = r.f64();
  eig.parities.resize(n);
  for (auto& p : eig.parities) p = r.i8() > 0 ? Parity::even : Parity::odd;
  r.align(8);
  eig.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::uint64_t c = 0; c < n; ++c) {
    for (std::uint64_t row = 0; row < n; ++row) {
      const double re = r.f64();
      const double im = r.f64();
      eig.eigenvectors(row, c) = Complex(re, im);
    }
  }
  return eig;
}

FloquetEigensystem cached_solve(const std::filesystem::path& directory, const KickedTopParams& params,
                                DiagonalizationMethod method) {
  char name[40];
  std::snprintf(name, sizeof(name), "eig_%016llx.bin",
                static_cast<unsigned long long>(eigen_cache_key(params, method)));
  const std::filesystem::path path = directory / name;
  if (auto hit = load_eigensystem(path, params, method)) return std::move(*hit);
  FloquetEigensystem eig = solve_floquet(params, method);
  std::filesystem::create_directories(directory);
  save_eigensystem(path, eig);
  return eig;
}

}  // namespace kicked_top
