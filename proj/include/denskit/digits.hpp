#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denskit/errors.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

struct SerializationConfig {
  int num_digits = 2;
  std::string digit_separator = " ";
  std::string number_separator = " , ";
  bool trailing_separator = true;

  void validate() const {
    if (num_digits < 1) throw ConfigError("SerializationConfig: num_digits must be >= 1");
    if (digit_separator.empty() || number_separator.empty())
      throw ConfigError("SerializationConfig: separators must be non-empty");
  }
};

inline std::int64_t pow10(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

inline std::vector<int> to_digits(std::int64_t value, int num_digits) {
  std::vector<int> digits(num_digits);
  for (int i = num_digits - 1; i >= 0; --i) {
    digits[i] = static_cast<int>(value % 10);
    value /= 10;
  }
  return digits;
}

// Zero-padded fixed-width numbers; digits joined by digit_separator, numbers
// by number_separator, trailing separator when configured.
inline std::string serialize(const SampleSet& samples, const SerializationConfig& config) {
  config.validate();
  const std::int64_t limit = pow10(config.num_digits);
  std::string out;
  for (std::size_t i = 0; i < samples.bin_indices.size(); ++i) {
    std::int64_t v = samples.bin_indices[i];
    if (v < 0 || v >= limit) throw ConfigError("serialize: sample out of range");
    if (i > 0) out += config.number_separator;
    auto digits = to_digits(v, config.num_digits);
    for (int d = 0; d < config.num_digits; ++d) {
      if (d > 0) out += config.digit_separator;
      out += static_cast<char>('0' + digits[d]);
    }
  }
  if (!samples.bin_indices.empty() && config.trailing_separator) out += config.number_separator;
  return out;
}

// Inverse of serialize (trailing separator optional on input); used by the
// replay store and the mock providers.
inline std::vector<std::int64_t> parse_samples(const std::string& text,
                                               const SerializationConfig& config) {
  config.validate();
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  auto try_consume = [&](const std::string& token) {
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  };
  while (pos < text.size()) {
    std::int64_t value = 0;
    for (int d = 0; d < config.num_digits; ++d) {
      if (d > 0 && !try_consume(config.digit_separator))
        throw ProtocolError("parse_samples: expected digit separator at position " +
                            std::to_string(pos));
      if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
        throw ProtocolError("parse_samples: expected digit at position " + std::to_string(pos));
      value = value * 10 + (text[pos] - '0');
      ++pos;
    }
    out.push_back(value);
    if (pos < text.size() && !try_consume(config.number_separator))
      throw ProtocolError("parse_samples: expected number separator at position " +
                          std::to_string(pos));
  }
  return out;
}

// Context text for a digit-prefix query: the serialized samples followed by
// the prefix digits joined by digit_separator.
inline std::string prefix_query_text(const std::string& serialized_context,
                                     const std::vector<int>& prefix_digits,
                                     const SerializationConfig& config) {
  std::string out = serialized_context;
  for (std::size_t d = 0; d < prefix_digits.size(); ++d) {
    if (d > 0) out += config.digit_separator;
    out += static_cast<char>('0' + prefix_digits[d]);
  }
  return out;
}

}  // namespace denskit
