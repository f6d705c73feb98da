#pragma once

#include <string>
#include <vector>

#include "denskit/digits.hpp"
#include "denskit/pdf.hpp"
#include "denskit/provider.hpp"

namespace denskit {

inline constexpr int kDefaultContextCap = 200;

// Recursive digit-by-digit extraction: query the provider after the
// serialized context, then for each digit prefix, multiplying conditionals
// down N levels. A prefix with probability exactly 0 becomes a zero subtree
// and is not refined. Exactly (10^N - 1)/9 calls otherwise; the result is
// renormalized to absorb drift from renormalized conditionals.
inline DiscretePdf hierarchy_pdf(Provider& provider, const SampleSet& context,
                                 const SerializationConfig& config) {
  config.validate();
  Grid grid(config.num_digits);
  const std::string serialized = serialize(context, config);
  std::vector<double> mass(grid.num_bins, 0.0);

  std::vector<int> prefix;
  auto expand = [&](auto&& self, double weight, std::int64_t index) -> void {
    if (static_cast<int>(prefix.size()) == config.num_digits) {
      mass[index] = weight;
      return;
    }
    if (weight == 0.0) return;  // dead branch: zero subtree, no refinement
    DigitDistribution digits;
    try {
      digits = normalize_digit_probs(
          provider.next_digit_probs(prefix_query_text(serialized, prefix, config)));
    } catch (const ProtocolError&) {
      throw;
    } catch (const ProviderError& e) {
      throw ProviderError(std::string(e.what()) + " (extraction depth " +
                          std::to_string(prefix.size()) + ")");
    }
    for (int d = 0; d < 10; ++d) {
      prefix.push_back(d);
      self(self, weight * digits.probs[d], index * 10 + d);
      prefix.pop_back();
    }
  };
  expand(expand, 1.0, 0);
  normalize(mass);
  return {grid, std::move(mass)};
}

struct IclExtraction {
  Trajectory trajectory;
  bool partial = false;     // provider failed before all points were extracted
  std::string error;        // failure description when partial
};

// hierarchy_pdf on each sample prefix; n=0 queries with empty context. On
// provider failure the result is flagged partial with the completed points
// kept, never silently truncated.
inline IclExtraction icl_trajectory(Provider& provider, const SampleSet& samples,
                                    const std::vector<int>& context_lengths,
                                    const SerializationConfig& config,
                                    int context_cap = kDefaultContextCap) {
  IclExtraction out;
  out.trajectory.label = "provider";
  int prev = -1;
  for (int n : context_lengths) {
    if (n <= prev) throw ConfigError("icl_trajectory: context lengths must be strictly increasing");
    prev = n;
    if (n < 0 || static_cast<std::size_t>(n) > samples.bin_indices.size())
      throw ConfigError("icl_trajectory: context length exceeds available samples");
    if (n > context_cap) throw ConfigError("icl_trajectory: context length exceeds cap");
  }
  for (int n : context_lengths) {
    SampleSet prefix{{samples.bin_indices.begin(), samples.bin_indices.begin() + n},
                     samples.seed};
    try {
      out.trajectory.pdfs.push_back(hierarchy_pdf(provider, prefix, config));
      out.trajectory.context_lengths.push_back(n);
    } catch (const ProviderError& e) {
      out.partial = true;
      out.error = "context length " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return out;
}

}  // namespace denskit
