#pragma once

#include "abv/special.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abv {

inline constexpr std::uint32_t kernel_cache_version = 1;

struct KernelCacheKey {
  cplx kappa;
  double rho = 0.0;
  double tol = 0.0;
  std::uint64_t nodes = 0;
  double h = 0.0;
};

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ULL);

// File name derived from the key; stable across runs.
std::string kernel_cache_name(const KernelCacheKey& key);

void save_kernel_cache(const std::string& path, const KernelCacheKey& key, const std::vector<cplx>& toeplitz);

// Returns nothing when the file is missing, from another version, for another key, or corrupt.
std::optional<std::vector<cplx>> load_kernel_cache(const std::string& path, const KernelCacheKey& key);

} // namespace abv
