#pragma once

#include <stdexcept>
#include <string>

namespace denskit {

// Error taxonomy mirrors the CLI exit codes: config 2, provider 3, numerical 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed payloads and replay misses; a provider-class failure (exit 3).
struct ProtocolError : ProviderError {
  using ProviderError::ProviderError;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace denskit
