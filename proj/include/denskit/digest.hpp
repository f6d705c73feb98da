#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace denskit {

// FNV-1a 64-bit; used for content digests in manifests and to derive
// per-context seeds in the stochastic mock provider.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

inline std::string fnv1a_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace denskit
