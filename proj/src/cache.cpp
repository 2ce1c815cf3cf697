#include "abv/cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace abv {

namespace {

constexpr char magic[8] = {'A', 'B', 'V', 'K', 'C', 'A', 'C', 'H'};

template <class T>
void put(std::vector<unsigned char>& buf, const T& v) {
  const auto* p = reinterpret_cast<const unsigned char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
bool take(const std::vector<unsigned char>& buf, std::size_t& pos, T& v) {
  if (pos + sizeof(T) > buf.size()) return false;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return true;
}

void put_key(std::vector<unsigned char>& buf, const KernelCacheKey& k) {
  put(buf, k.kappa.real());
  put(buf, k.kappa.imag());
  put(buf, k.rho);
  put(buf, k.tol);
  put(buf, k.nodes);
  put(buf, k.h);
}

} // namespace

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string kernel_cache_name(const KernelCacheKey& key) {
  std::vector<unsigned char> buf;
  put_key(buf, key);
  char name[64];
  std::snprintf(name, sizeof name, "abv-kernel-%016llx.bin",
                static_cast<unsigned long long>(fnv1a(buf.data(), buf.size())));
  return name;
}

void save_kernel_cache(const std::string& path, const KernelCacheKey& key, const std::vector<cplx>& toeplitz) {
  std::vector<unsigned char> buf(std::begin(magic), std::end(magic));
  put(buf, kernel_cache_version);
  put_key(buf, key);
  put(buf, static_cast<std::uint64_t>(toeplitz.size()));
  for (const auto& v : toeplitz) {
    put(buf, v.real());
    put(buf, v.imag());
  }
  put(buf, fnv1a(buf.data(), buf.size()));
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) return;
  }
  std::rename(tmp.c_str(), path.c_str());
}

std::optional<std::vector<cplx>> load_kernel_cache(const std::string& path, const KernelCacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(magic) + sizeof(std::uint64_t)) return std::nullopt;
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof stored);
  if (stored != fnv1a(buf.data(), body)) return std::nullopt;
  if (std::memcmp(buf.data(), magic, sizeof magic) != 0) return std::nullopt;
  std::size_t pos = sizeof magic;
  std::uint32_t version;
  if (!take(buf, pos, version) || version != kernel_cache_version) return std::nullopt;
  std::vector<unsigned char> expect;
  put_key(expect, key);
  if (pos + expect.size() > body || std::memcmp(buf.data() + pos, expect.data(), expect.size()) != 0)
    return std::nullopt;
  pos += expect.size();
  std::uint64_t n;
  if (!take(buf, pos, n) || n != key.nodes || pos + n * 2 * sizeof(double) != body) return std::nullopt;
  std::vector<cplx> out(n);
  for (auto& v : out) {
    double re, im;
    take(buf, pos, re);
    take(buf, pos, im);
    v = {re, im};
  }
  return out;
}

} // namespace abv
