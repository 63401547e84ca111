// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relialign/error.hpp"
#include "relialign/question.hpp"
#include "relialign/variation.hpp"

namespace relialign {

struct QueryFailure {
  ErrorCode code = ErrorCode::HttpError;
  std::string message;
};

/// One supervisor output a_i, before canonicalization. A request that failed
/// after all retries carries `error` and an empty text.
struct RawAnswer {
  std::string question_id;
  std::size_t variant_index = 0;
  std::string text;
  double latency_ms = 0.0;
  std::size_t attempt_count = 0;
  std::optional<QueryFailure> error;

  bool ok() const noexcept { return !error.has_value(); }
};

struct EndpointConfig {
  std::string base_url;
  std::string model_name;
  std::string api_key_env = "W2S_API_KEY";
  std::size_t max_parallel_requests = 8;
  double timeout_s = 60.0;
  std::size_t retries = 3;
  double backoff_base_s = 1.0;

  void validate() const;
};

/// OpenAI-compatible chat-completion client for a single endpoint. Each call
/// is a blocking POST {base_url}/chat/completions at temperature 0, retried
/// with exponential backoff.
class ChatClient {
 public:
  struct Outcome {
    std::string text;
    std::size_t attempts = 0;
    double latency_ms = 0.0;
    std::optional<QueryFailure> failure;
  };

  explicit ChatClient(EndpointConfig config);

  Outcome complete(const std::string& prompt) const;

  const EndpointConfig& config() const noexcept { return config_; }

 private:
  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

/// Queries every variant with at most cfg.max_parallel_requests requests in
/// flight. Output is sorted by (question_id, variant_index) and has exactly one
/// record per variant.
std::vector<RawAnswer> query_supervisor(std::span<const PromptVariant> variants,
                                        const EndpointConfig& cfg);

struct SimulatedSupervisorConfig {
  std::uint64_t seed = 0;
  double alpha = 4.0;
  double beta = 2.0;
  /// Probability that a variant turns a would-be correct answer into a wrong one.
  double variant_sensitivity = 0.1;
  /// Replaces the per-question Beta draw when set.
  std::optional<double> fixed_competence;

  void validate() const;
  /// E[c_q] * (1 - s).
  double expected_accuracy() const;
};

/// Latent competence c_q of one question under `cfg`.
double simulated_competence(const std::string& question_id, const SimulatedSupervisorConfig& cfg);

/// Answers each variant with the gold answer's displayed letter (or gold text)
/// with probability c_q * (1 - s), otherwise a uniformly drawn wrong one.
std::vector<RawAnswer> simulate_supervisor(std::span<const PromptVariant> variants,
                                           std::span<const Question> questions,
                                           const SimulatedSupervisorConfig& cfg);

/// Extension of ParaphraseProvider that asks the chat endpoint for rewrites.
class ExternalParaphraser final : public ParaphraseProvider {
 public:
  explicit ExternalParaphraser(EndpointConfig config) : client_(std::move(config)) {}

  std::vector<std::string> rewrite(std::string_view stem, std::size_t count,
                                   std::uint64_t seed) override;

 private:
  ChatClient client_;
};

std::string extract_message_text(const std::string& response_body);

// --- mock server ----------------------------------------------------------

struct MockBehavior {
  enum class Kind { Reply, Fail, Delay, Malformed };

  Kind kind = Kind::Reply;
  std::string text;
  int status = 500;
  std::chrono::milliseconds delay{0};

  static MockBehavior reply(std::string text) { return {Kind::Reply, std::move(text), 200, {}}; }
  static MockBehavior failure(int status) { return {Kind::Fail, {}, status, {}}; }
  static MockBehavior delayed(std::chrono::milliseconds delay, std::string text) {
    return {Kind::Delay, std::move(text), 200, delay};
  }
  static MockBehavior malformed() { return {Kind::Malformed, {}, 200, {}}; }
};

/// Local chat-completion server replaying a script: request k gets behavior
/// min(k, size - 1). Counts requests and the peak number in flight.
class MockServer {
 public:
  MockServer(std::vector<MockBehavior> script, int port = 0);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const noexcept;
  std::string base_url() const;
  std::size_t request_count() const noexcept;
  std::size_t max_in_flight() const noexcept;
  std::vector<std::string> received_prompts() const;

  void stop();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::unique_ptr<MockServer> run_mock_server(std::vector<MockBehavior> script, int port = 0);

/// Parses a JSON script: [{"reply": "A"}, {"fail": 500}, {"delay_ms": 2000, "reply": "B"},
/// {"malformed": true}].
std::vector<MockBehavior> parse_mock_script(const std::string& json_text);

}  // namespace relialign
