#pragma once

#include <chrono>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "denskit/provider.hpp"

namespace denskit {

struct ProviderSpec {
  enum class Kind { http, replay, mock };
  Kind kind = Kind::mock;
  std::string endpoint;        // http kind: http://host:port/path
  std::string replay_path;     // replay kind
  std::string mock;            // mock kind: preset spec string
  double timeout_seconds = 30.0;
  int retries = 3;
  double initial_backoff_seconds = 0.5;

  bool operator==(const ProviderSpec&) const = default;
};

// POST {"context": ...} -> {"digit_probs": [10 reals]}. Transport errors are
// retried with exponential backoff; malformed payloads and non-2xx statuses
// are protocol errors and never retried.
class HttpProvider : public Provider {
 public:
  HttpProvider(const std::string& endpoint, double timeout_seconds = 30.0, int retries = 3,
               double initial_backoff_seconds = 0.5)
      : retries_(retries), backoff_seconds_(initial_backoff_seconds) {
    auto path_start = endpoint.find('/', endpoint.find("//") == std::string::npos
                                             ? 0
                                             : endpoint.find("//") + 2);
    std::string base = (path_start == std::string::npos) ? endpoint : endpoint.substr(0, path_start);
    path_ = (path_start == std::string::npos) ? "/" : endpoint.substr(path_start);
    client_ = std::make_unique<httplib::Client>(base);
    auto timeout = std::chrono::duration<double>(timeout_seconds);
    client_->set_connection_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(timeout));
    client_->set_read_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(timeout));
    client_->set_write_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(timeout));
  }

  std::vector<double> next_digit_probs(const std::string& context) override {
    nlohmann::json request;
    request["context"] = context;
    const std::string body = request.dump();
    double backoff = backoff_seconds_;
    for (int attempt = 0;; ++attempt) {
      httplib::Result res = client_->Post(path_, body, "application/json");
      if (!res) {
        if (attempt >= retries_)
          throw ProviderError("http: transport failure after " + std::to_string(attempt + 1) +
                              " attempts: " + httplib::to_string(res.error()));
        std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        backoff *= 2.0;
        continue;
      }
      if (res->status < 200 || res->status >= 300)
        throw ProtocolError("http: status " + std::to_string(res->status));
      nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
      if (j.is_discarded() || !j.contains("digit_probs") || !j["digit_probs"].is_array())
        throw ProtocolError("http: response is not a digit_probs payload");
      return j["digit_probs"].get<std::vector<double>>();
    }
  }

 private:
  std::unique_ptr<httplib::Client> client_;
  std::string path_;
  int retries_;
  double backoff_seconds_;
};

// Mock preset grammar: "uniform" | "delta:D1,D2,..." | "kernel:h=H,s=S" |
// "random:SEED".
inline std::unique_ptr<Provider> make_mock_provider(const std::string& spec,
                                                    const SerializationConfig& config = {}) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
  if (name == "uniform") return std::make_unique<UniformMock>();
  if (name == "delta") {
    std::vector<int> digits;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) digits.push_back(std::stoi(tok));
    if (static_cast<int>(digits.size()) != config.num_digits)
      throw ConfigError("mock delta: need exactly num_digits digits");
    for (int d : digits)
      if (d < 0 || d > 9) throw ConfigError("mock delta: digits must be 0-9");
    return std::make_unique<DeltaMock>(digits, config);
  }
  if (name == "kernel") {
    double h = 1.0, s = 2.0;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError("mock kernel: expected h=..,s=..");
      std::string key = tok.substr(0, eq);
      double value = std::stod(tok.substr(eq + 1));
      if (key == "h") h = value;
      else if (key == "s") s = value;
      else throw ConfigError("mock kernel: unknown key " + key);
    }
    return std::make_unique<KernelMock>(KernelSpec{s, h}, Grid(config.num_digits), config);
  }
  if (name == "random") {
    if (args.empty()) throw ConfigError("mock random: need a seed");
    return std::make_unique<SeededRandomMock>(std::stoull(args));
  }
  throw ConfigError("unknown mock preset: " + spec);
}

inline std::unique_ptr<Provider> make_provider(const ProviderSpec& spec,
                                               const SerializationConfig& config = {}) {
  switch (spec.kind) {
    case ProviderSpec::Kind::http:
      if (spec.endpoint.empty()) throw ConfigError("provider: http kind needs an endpoint");
      return std::make_unique<HttpProvider>(spec.endpoint, spec.timeout_seconds, spec.retries,
                                            spec.initial_backoff_seconds);
    case ProviderSpec::Kind::replay:
      if (spec.replay_path.empty()) throw ConfigError("provider: replay kind needs a path");
      return std::make_unique<ReplayProvider>(spec.replay_path);
    case ProviderSpec::Kind::mock:
      if (spec.mock.empty()) throw ConfigError("provider: mock kind needs a preset");
      return make_mock_provider(spec.mock, config);
  }
  throw ConfigError("provider: unknown kind");
}

}  // namespace denskit
