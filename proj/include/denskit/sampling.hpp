#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "denskit/pdf.hpp"
#include "denskit/rng.hpp"

namespace denskit {

// n i.i.d. bin indices via inverse-CDF on the mass vector. Zero-mass bins are
// unreachable: upper_bound skips zero-width CDF steps.
inline SampleSet sample(const DiscretePdf& pdf, int n, std::uint64_t seed) {
  if (n < 0) throw ConfigError("sample: n must be >= 0");
  std::vector<double> cdf(pdf.mass.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pdf.mass.size(); ++i) {
    acc += pdf.mass[i];
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;

  SampleSet out;
  out.seed = seed;
  out.bin_indices.reserve(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    out.bin_indices.push_back(static_cast<std::int64_t>(k));
  }
  return out;
}

}  // namespace denskit
