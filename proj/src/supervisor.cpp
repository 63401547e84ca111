// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/supervisor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "relialign/random.hpp"
#include "relialign/scoring.hpp"

namespace relialign {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void split_base_url(const std::string& base_url, std::string& scheme_host_port,
                    std::string& path) {
  const auto scheme_end = base_url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = base_url.find('/', host_start);
  scheme_host_port = base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path = prefix + "/chat/completions";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<long long> parse_integer(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

void EndpointConfig::validate() const {
  if (base_url.empty()) fail(ErrorCode::InvalidConfig, "endpoint base_url is empty");
  if (max_parallel_requests < 1)
    fail(ErrorCode::InvalidConfig, "max_parallel_requests must be at least 1");
  if (!(timeout_s > 0.0)) fail(ErrorCode::InvalidConfig, "timeout must be positive");
  if (backoff_base_s < 0.0) fail(ErrorCode::InvalidConfig, "backoff base must be non-negative");
}

std::string extract_message_text(const std::string& response_body) {
  const auto doc = nlohmann::json::parse(response_body, nullptr, false);
  if (doc.is_discarded()) fail(ErrorCode::MalformedResponse, "response is not JSON");
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty())
    fail(ErrorCode::MalformedResponse, "response has no choices");
  const auto& first = (*choices)[0];
  const auto message = first.find("message");
  if (message == first.end() || !message->is_object())
    fail(ErrorCode::MalformedResponse, "first choice has no message");
  const auto content = message->find("content");
  if (content == message->end() || !content->is_string() ||
      content->get_ref<const std::string&>().empty())
    fail(ErrorCode::MalformedResponse, "message has no text content");
  return content->get<std::string>();
}

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
  config_.validate();
  split_base_url(config_.base_url, scheme_host_port_, path_);
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

ChatClient::Outcome ChatClient::complete(const std::string& prompt) const {
  const nlohmann::json body = {
      {"model", config_.model_name},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", 0},
  };
  const auto payload = body.dump();
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto whole_seconds = static_cast<time_t>(config_.timeout_s);
  const auto micros = static_cast<time_t>((config_.timeout_s - whole_seconds) * 1e6);

  Outcome outcome;
  const auto started = Clock::now();
  const std::size_t max_attempts = config_.retries + 1;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1 && config_.backoff_base_s > 0.0) {
      const double wait_s = config_.backoff_base_s * std::pow(2.0, double(attempt - 2));
      std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
    }
    outcome.attempts = attempt;

    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(whole_seconds, micros);
    client.set_read_timeout(whole_seconds, micros);
    client.set_write_timeout(whole_seconds, micros);

    const auto attempt_start = Clock::now();
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             (err == httplib::Error::Read &&
                              elapsed_ms(attempt_start) >= 0.9 * config_.timeout_s * 1000.0);
      outcome.failure = QueryFailure{timed_out ? ErrorCode::Timeout : ErrorCode::HttpError,
                                     "transport error: " + httplib::to_string(err)};
      continue;
    }
    if (res->status >= 400) {
      outcome.failure = QueryFailure{ErrorCode::HttpError,
                                     "HTTP status " + std::to_string(res->status)};
      continue;
    }
    try {
      outcome.text = extract_message_text(res->body);
      outcome.failure.reset();
      break;
    } catch (const Error& e) {
      outcome.failure = QueryFailure{e.code(), e.what()};
    }
  }
  outcome.latency_ms = elapsed_ms(started);
  return outcome;
}

std::vector<RawAnswer> query_supervisor(std::span<const PromptVariant> variants,
                                        const EndpointConfig& cfg) {
  cfg.validate();
  std::vector<RawAnswer> answers(variants.size());
  if (variants.empty()) return answers;

  const ChatClient client(cfg);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < variants.size(); i = next++) {
      const auto& v = variants[i];
      auto outcome = client.complete(v.rendered_prompt);
      auto& a = answers[i];
      a.question_id = v.question_id;
      a.variant_index = v.variant_index;
      a.attempt_count = outcome.attempts;
      a.latency_ms = outcome.latency_ms;
      a.error = std::move(outcome.failure);
      if (a.ok()) a.text = std::move(outcome.text);
    }
  };
  const auto n_workers = std::min(cfg.max_parallel_requests, variants.size());
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  pool.clear();

  std::stable_sort(answers.begin(), answers.end(), [](const RawAnswer& a, const RawAnswer& b) {
    return std::tie(a.question_id, a.variant_index) < std::tie(b.question_id, b.variant_index);
  });
  return answers;
}

void SimulatedSupervisorConfig::validate() const {
  if (!(alpha > 0.0 && beta > 0.0)) fail(ErrorCode::InvalidConfig, "Beta parameters must be positive");
  if (!(variant_sensitivity >= 0.0 && variant_sensitivity <= 1.0))
    fail(ErrorCode::InvalidConfig, "variant sensitivity must lie in [0, 1]");
  if (fixed_competence && !(*fixed_competence >= 0.0 && *fixed_competence <= 1.0))
    fail(ErrorCode::InvalidConfig, "competence must lie in [0, 1]");
}

double SimulatedSupervisorConfig::expected_accuracy() const {
  const double mean_competence = fixed_competence ? *fixed_competence : alpha / (alpha + beta);
  return mean_competence * (1.0 - variant_sensitivity);
}

double simulated_competence(const std::string& question_id, const SimulatedSupervisorConfig& cfg) {
  if (cfg.fixed_competence) return *cfg.fixed_competence;
  Rng rng(derive_seed(cfg.seed, question_id, 0));
  return sample_beta(rng, cfg.alpha, cfg.beta);
}

std::vector<RawAnswer> simulate_supervisor(std::span<const PromptVariant> variants,
                                           std::span<const Question> questions,
                                           const SimulatedSupervisorConfig& cfg) {
  cfg.validate();
  std::unordered_map<std::string, const Question*> index;
  for (const auto& q : questions) index.emplace(q.id, &q);

  std::unordered_map<std::string, double> competence;
  for (const auto& v : variants) {
    const auto it = index.find(v.question_id);
    require(it != index.end(), "variant refers to unknown question '" + v.question_id + "'");
    if (!it->second->gold)
      fail(ErrorCode::MissingGold, "question '" + v.question_id + "' has no gold answer");
    if (!competence.count(v.question_id))
      competence.emplace(v.question_id, simulated_competence(v.question_id, cfg));
  }

  std::vector<RawAnswer> answers;
  answers.reserve(variants.size());
  for (const auto& v : variants) {
    const Question& q = *index.at(v.question_id);
    const double p_correct = competence.at(v.question_id) * (1.0 - cfg.variant_sensitivity);
    Rng rng(derive_seed(cfg.seed, v.question_id, 1 + v.variant_index));
    const bool correct = uniform_unit(rng) < p_correct;

    RawAnswer a;
    a.question_id = v.question_id;
    a.variant_index = v.variant_index;
    a.attempt_count = 1;
    if (q.is_multiple_choice()) {
      const auto gold_letter = v.display_of(q.gold->choice_index());
      require(gold_letter.has_value(), "variant does not display the gold choice");
      const auto gold_pos = static_cast<std::size_t>(*gold_letter - 'A');
      std::size_t pos = gold_pos;
      if (!correct) {
        pos = uniform_below(rng, q.choices.size() - 1);
        if (pos >= gold_pos) ++pos;
      }
      a.text = std::string(1, display_letter(pos));
    } else {
      const auto& gold = q.gold->text_value();
      if (correct) {
        a.text = gold;
      } else {
        const auto offset = static_cast<long long>(1 + uniform_below(rng, 9));
        if (const auto g = parse_integer(gold)) {
          a.text = std::to_string(*g + offset);
        } else {
          a.text = "alternative " + std::to_string(offset);
        }
      }
    }
    answers.push_back(std::move(a));
  }
  return answers;
}

std::vector<std::string> ExternalParaphraser::rewrite(std::string_view stem, std::size_t count,
                                                      std::uint64_t /*seed*/) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) {
    const std::string prompt =
        "Rewrite the following question so that its meaning stays exactly the same. Return "
        "only the rewritten question and do not answer it. This is rewrite " +
        std::to_string(i) + " of " + std::to_string(count) +
        "; make it differ from the other rewrites.\nQuestion: " + std::string(stem);
    const auto outcome = client_.complete(prompt);
    if (outcome.failure)
      fail(ErrorCode::ProviderUnavailable, "paraphrase request failed: " + outcome.failure->message);
    auto text = trim(outcome.text);
    if (!text.empty()) out.push_back(std::move(text));
  }
  return out;
}

}  // namespace relialign
