#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sgf/dynamics/state.hpp"

namespace sgf {

/// Binary layout, all little-endian:
///   8  magic "SGFSNAP\0"
///   u32 version
///   i32 nx, i32 ny, f64 lx
///   i32 branch kind, f64 alpha, f64 nu, f64 t
///   u64 n, then n complex q coefficients as (re, im) f64 pairs, mode-major
///   u64 m, then m f64 Chebyshev coefficients of the mean momentum V
///   u64 FNV-1a hash of every preceding byte
inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::array<char, 8> snapshot_magic = {'S', 'G', 'F', 'S', 'N', 'A', 'P', '\0'};

struct Snapshot {
  ModelBranch branch;
  FlowState state;
};

namespace detail {

inline std::uint64_t fnv1a(const std::vector<unsigned char>& b, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

class ByteWriter {
 public:
  template <class T>
  void put(T v) {
    std::uint64_t bits = 0;
    if constexpr (sizeof(T) == 8) bits = std::bit_cast<std::uint64_t>(v);
    else bits = std::bit_cast<std::uint32_t>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  std::vector<unsigned char> buf;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<unsigned char>& b) : buf_(b) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > buf_.size()) throw Error("snapshot truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= std::uint64_t(buf_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    if constexpr (sizeof(T) == 8) return std::bit_cast<T>(bits);
    else return std::bit_cast<T>(static_cast<std::uint32_t>(bits));
  }
  void skip(std::size_t n) {
    if (pos_ + n > buf_.size()) throw Error("snapshot truncated");
    pos_ += n;
  }
  std::size_t pos() const noexcept { return pos_; }

 private:
  const std::vector<unsigned char>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const FlowState& s, const ModelBranch& b) {
  const auto& g = s.grid();
  detail::ByteWriter w;
  w.buf.assign(snapshot_magic.begin(), snapshot_magic.end());
  w.put<std::uint32_t>(snapshot_version);
  w.put<std::int32_t>(g.nx());
  w.put<std::int32_t>(g.ny());
  w.put<double>(g.lx());
  w.put<std::int32_t>(static_cast<std::int32_t>(b.kind));
  w.put<double>(b.alpha);
  w.put<double>(b.nu);
  w.put<double>(s.t);
  const auto c = s.q.coeffs();
  w.put<std::uint64_t>(c.size());
  for (const auto& z : c) {
    w.put<double>(z.real());
    w.put<double>(z.imag());
  }
  w.put<std::uint64_t>(s.mean_momentum.size());
  for (double v : s.mean_momentum) w.put<double>(v);
  w.put<std::uint64_t>(detail::fnv1a(w.buf, w.buf.size()));
  return w.buf;
}

/// Rebuilds the state; psi, omega and u are recovered from q and V.
inline Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < snapshot_magic.size() + 4 || !std::equal(snapshot_magic.begin(), snapshot_magic.end(), bytes.begin()))
    throw Error("not a snapshot: bad magic");
  if (bytes.size() < 8 + 8) throw Error("snapshot truncated");
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) stored |= std::uint64_t(bytes[bytes.size() - 8 + i]) << (8 * i);
  if (stored != detail::fnv1a(bytes, bytes.size() - 8)) throw Error("snapshot checksum mismatch (corrupted)");

  detail::ByteReader r(bytes);
  r.skip(snapshot_magic.size());
  const auto version = r.get<std::uint32_t>();
  if (version != snapshot_version)
    throw Error("snapshot version " + std::to_string(version) + " not supported (expected " +
                std::to_string(snapshot_version) + ")");
  const int nx = r.get<std::int32_t>();
  const int ny = r.get<std::int32_t>();
  const double lx = r.get<double>();
  const int kind = r.get<std::int32_t>();
  const double alpha = r.get<double>();
  const double nu = r.get<double>();
  const double t = r.get<double>();
  if (kind < 0 || kind > 3) throw Error("snapshot header corrupted: branch kind");
  ChannelGrid g = [&] {
    try {
      return ChannelGrid(nx, ny, lx);
    } catch (const InvalidArgument& e) {
      throw Error(std::string("snapshot header corrupted: ") + e.what());
    }
  }();
  const ModelBranch b(static_cast<ModelKind>(kind), alpha, nu);
  FlowState s(g);
  s.t = t;
  const auto n = r.get<std::uint64_t>();
  if (n != g.spectral_size()) throw Error("snapshot header corrupted: coefficient count");
  auto c = s.q.coeffs();
  for (std::uint64_t i = 0; i < n; ++i) {
    const double re = r.get<double>();
    const double im = r.get<double>();
    c[i] = Complex(re, im);
  }
  const auto m = r.get<std::uint64_t>();
  if (m != static_cast<std::uint64_t>(ny + 1)) throw Error("snapshot header corrupted: profile length");
  for (std::uint64_t i = 0; i < m; ++i) s.mean_momentum[i] = r.get<double>();
  if (r.pos() + 8 != bytes.size()) throw Error("snapshot has trailing bytes");
  const auto saved = s.q;
  refresh(s, Recoverer(g, b));
  s.q = saved;
  return {b, std::move(s)};
}

inline void save_snapshot(const FlowState& s, const ModelBranch& b, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(s, b);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error("cannot write snapshot " + path.string());
}

inline Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

/// Loads into a run on a fixed grid.
inline Snapshot load_snapshot(const std::filesystem::path& path, const ChannelGrid& expected) {
  auto s = load_snapshot(path);
  if (!(s.state.grid() == expected))
    throw GridMismatch("snapshot grid " + std::to_string(s.state.grid().nx()) + "x" +
                       std::to_string(s.state.grid().ny()) + " does not match run grid " +
                       std::to_string(expected.nx()) + "x" + std::to_string(expected.ny()));
  return s;
}

}  // namespace sgf
