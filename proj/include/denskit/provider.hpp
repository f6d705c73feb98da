#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "denskit/digest.hpp"
#include "denskit/digits.hpp"
#include "denskit/errors.hpp"
#include "denskit/estimators.hpp"
#include "denskit/rng.hpp"

namespace denskit {

struct DigitDistribution {
  std::array<double, 10> probs{};
};

// Validates a raw provider payload and renormalizes over the 10 digit
// entries (the remaining token mass is dropped by contract).
inline DigitDistribution normalize_digit_probs(const std::vector<double>& raw) {
  if (raw.size() != 10)
    throw ProtocolError("digit_probs: expected 10 entries, got " + std::to_string(raw.size()));
  double total = 0.0;
  for (double p : raw) {
    if (!std::isfinite(p) || p < 0.0)
      throw ProtocolError("digit_probs: entries must be finite and non-negative");
    total += p;
  }
  if (!(total > 0.0)) throw ProtocolError("digit_probs: total mass must be positive");
  DigitDistribution d;
  for (int i = 0; i < 10; ++i) d.probs[i] = raw[i] / total;
  return d;
}

// Answers "probability of each next digit given this serialized context".
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::vector<double> next_digit_probs(const std::string& context) = 0;
};

class UniformMock : public Provider {
 public:
  std::vector<double> next_digit_probs(const std::string&) override {
    return std::vector<double>(10, 0.1);
  }
};

namespace detail {

// Splits a query into (complete-numbers part, dangling prefix digits). A
// context is complete when empty or ending with the number separator.
inline std::pair<std::string, std::vector<int>> split_prefix(const std::string& context,
                                                             const SerializationConfig& config) {
  std::size_t end = context.size();
  const std::string& nsep = config.number_separator;
  std::size_t base_end = 0;
  if (!context.empty()) {
    std::size_t found = context.rfind(nsep);
    base_end = (found == std::string::npos) ? 0 : found + nsep.size();
  }
  std::vector<int> prefix;
  std::size_t pos = base_end;
  while (pos < end) {
    if (!prefix.empty()) {
      if (context.compare(pos, config.digit_separator.size(), config.digit_separator) != 0)
        throw ProtocolError("mock: malformed prefix digits in context");
      pos += config.digit_separator.size();
    }
    if (pos >= end || context[pos] < '0' || context[pos] > '9')
      throw ProtocolError("mock: malformed prefix digits in context");
    prefix.push_back(context[pos] - '0');
    ++pos;
  }
  return {context.substr(0, base_end), prefix};
}

}  // namespace detail

// Prefix-dependent point mass: digit k of every number is digits[k].
class DeltaMock : public Provider {
 public:
  DeltaMock(std::vector<int> digits, SerializationConfig config = {})
      : digits_(std::move(digits)), config_(std::move(config)) {}

  std::vector<double> next_digit_probs(const std::string& context) override {
    auto [base, prefix] = detail::split_prefix(context, config_);
    if (prefix.size() >= digits_.size())
      throw ProtocolError("DeltaMock: prefix deeper than configured digits");
    std::vector<double> probs(10, 0.0);
    probs[digits_[prefix.size()]] = 1.0;
    return probs;
  }

 private:
  std::vector<int> digits_;
  SerializationConfig config_;
};

// Runs a KDE on the samples parsed from its context and answers with the
// implied next-digit conditionals; uniform when the context is empty.
class KernelMock : public Provider {
 public:
  KernelMock(KernelSpec spec, Grid grid, SerializationConfig config = {})
      : spec_(spec), grid_(grid), config_(std::move(config)) {}

  std::vector<double> next_digit_probs(const std::string& context) override {
    auto [base, prefix] = detail::split_prefix(context, config_);
    SampleSet samples{parse_samples(base, config_), 0};
    DiscretePdf pdf = samples.bin_indices.empty()
                          ? uniform_ignorance(grid_)
                          : kde_estimate(samples, spec_, grid_);
    int depth = static_cast<int>(prefix.size());
    std::int64_t block = pow10(config_.num_digits - depth - 1);
    std::int64_t base_index = 0;
    for (int d : prefix) base_index = base_index * 10 + d;
    base_index *= block * 10;
    std::vector<double> probs(10, 0.0);
    double total = 0.0;
    for (int digit = 0; digit < 10; ++digit) {
      double mass = 0.0;
      for (std::int64_t k = 0; k < block; ++k) mass += pdf.mass[base_index + digit * block + k];
      probs[digit] = mass;
      total += mass;
    }
    if (total <= 0.0) return std::vector<double>(10, 0.1);  // dead branch: value unused upstream
    for (double& p : probs) p /= total;
    return probs;
  }

 private:
  KernelSpec spec_;
  Grid grid_;
  SerializationConfig config_;
};

// Deterministic pseudo-random distribution per context.
class SeededRandomMock : public Provider {
 public:
  explicit SeededRandomMock(std::uint64_t seed) : seed_(seed) {}

  std::vector<double> next_digit_probs(const std::string& context) override {
    Rng rng(seed_ ^ fnv1a(context));
    std::vector<double> probs(10);
    for (double& p : probs) p = 0.05 + rng.uniform();
    return probs;
  }

 private:
  std::uint64_t seed_;
};

// Exact-match lookup from a recorded JSONL session.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProviderError("replay: cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("context") || !j.contains("digit_probs"))
        throw ProtocolError("replay: malformed line " + std::to_string(line_no) + " in " + path);
      table_[j["context"].get<std::string>()] =
          j["digit_probs"].get<std::vector<double>>();
    }
  }

  std::vector<double> next_digit_probs(const std::string& context) override {
    auto it = table_.find(context);
    if (it == table_.end())
      throw ProtocolError("replay: no recorded response for context \"" + context + "\"");
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<double>> table_;
};

// Wraps a provider and records every exchange for later replay.
class RecordingProvider : public Provider {
 public:
  explicit RecordingProvider(Provider& inner) : inner_(inner) {}

  std::vector<double> next_digit_probs(const std::string& context) override {
    std::vector<double> probs = inner_.next_digit_probs(context);
    records_.emplace_back(context, probs);
    return probs;
  }

  const std::vector<std::pair<std::string, std::vector<double>>>& records() const {
    return records_;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("record: cannot write " + path);
    for (const auto& [context, probs] : records_) {
      nlohmann::json j;
      j["context"] = context;
      j["digit_probs"] = probs;
      out << j.dump() << "\n";
    }
  }

 private:
  Provider& inner_;
  std::vector<std::pair<std::string, std::vector<double>>> records_;
};

}  // namespace denskit
