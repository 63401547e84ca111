// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "relialign/supervisor.hpp"

namespace relialign {

struct MockServer::State {
  std::vector<MockBehavior> script;
  httplib::Server server;
  std::thread listener;
  int port = 0;
  std::atomic<bool> stopping{false};
  std::atomic<std::size_t> requests{0};
  std::atomic<std::size_t> in_flight{0};
  std::atomic<std::size_t> peak{0};
  mutable std::mutex prompts_mutex;
  std::vector<std::string> prompts;

  void handle(const httplib::Request& req, httplib::Response& res);
};

namespace {

std::string completion_body(const std::string& text) {
  const nlohmann::json body = {
      {"id", "mock-completion"},
      {"object", "chat.completion"},
      {"model", "mock"},
      {"choices", nlohmann::json::array({{{"index", 0},
                                          {"message", {{"role", "assistant"}, {"content", text}}},
                                          {"finish_reason", "stop"}}})},
  };
  return body.dump();
}

}  // namespace

void MockServer::State::handle(const httplib::Request& req, httplib::Response& res) {
  const auto ordinal = requests++;
  const auto now = ++in_flight;
  for (auto seen = peak.load(); now > seen && !peak.compare_exchange_weak(seen, now);) {
  }

  {
    const auto doc = nlohmann::json::parse(req.body, nullptr, false);
    std::string prompt;
    if (!doc.is_discarded() && doc.contains("messages") && doc["messages"].is_array() &&
        !doc["messages"].empty() && doc["messages"][0].contains("content") &&
        doc["messages"][0]["content"].is_string())
      prompt = doc["messages"][0]["content"].get<std::string>();
    std::lock_guard lock(prompts_mutex);
    prompts.push_back(std::move(prompt));
  }

  const auto& behavior = script[std::min<std::size_t>(ordinal, script.size() - 1)];
  switch (behavior.kind) {
    case MockBehavior::Kind::Fail:
      res.status = behavior.status;
      res.set_content(R"({"error":{"message":"scripted failure"}})", "application/json");
      break;
    case MockBehavior::Kind::Malformed:
      res.status = 200;
      res.set_content(R"({"choices":[]})", "application/json");
      break;
    case MockBehavior::Kind::Delay: {
      const auto until = std::chrono::steady_clock::now() + behavior.delay;
      while (!stopping && std::chrono::steady_clock::now() < until)
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      [[fallthrough]];
    }
    case MockBehavior::Kind::Reply:
      res.status = 200;
      res.set_content(completion_body(behavior.text), "application/json");
      break;
  }
  --in_flight;
}

MockServer::MockServer(std::vector<MockBehavior> script, int port)
    : state_(std::make_unique<State>()) {
  require(!script.empty(), "mock server script is empty");
  state_->script = std::move(script);
  auto* state = state_.get();
  // SO_REUSEADDR only, so a second server on a busy port fails to bind.
  state->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  state->server.new_task_queue = [] { return new httplib::ThreadPool(64); };
  auto handler = [state](const httplib::Request& req, httplib::Response& res) {
    state->handle(req, res);
  };
  state->server.Post("/chat/completions", handler);
  state->server.Post("/v1/chat/completions", handler);

  if (port == 0) {
    state->port = state->server.bind_to_any_port("127.0.0.1");
    if (state->port <= 0) fail(ErrorCode::PortUnavailable, "could not bind any local port");
  } else {
    if (!state->server.bind_to_port("127.0.0.1", port))
      fail(ErrorCode::PortUnavailable, "port " + std::to_string(port) + " is unavailable");
    state->port = port;
  }
  state->listener = std::thread([state] { state->server.listen_after_bind(); });
  state->server.wait_until_ready();
}

MockServer::~MockServer() { stop(); }

void MockServer::stop() {
  if (!state_ || state_->stopping.exchange(true)) return;
  state_->server.stop();
  if (state_->listener.joinable()) state_->listener.join();
}

int MockServer::port() const noexcept { return state_->port; }

std::string MockServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(state_->port) + "/v1";
}

std::size_t MockServer::request_count() const noexcept { return state_->requests; }

std::size_t MockServer::max_in_flight() const noexcept { return state_->peak; }

std::vector<std::string> MockServer::received_prompts() const {
  std::lock_guard lock(state_->prompts_mutex);
  return state_->prompts;
}

std::unique_ptr<MockServer> run_mock_server(std::vector<MockBehavior> script, int port) {
  return std::make_unique<MockServer>(std::move(script), port);
}

std::vector<MockBehavior> parse_mock_script(const std::string& json_text) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array() || doc.empty())
    fail(ErrorCode::ParseError, "mock script must be a non-empty JSON array");
  std::vector<MockBehavior> script;
  for (const auto& step : doc) {
    if (!step.is_object()) fail(ErrorCode::ParseError, "mock script step must be an object");
    if (step.contains("fail")) {
      script.push_back(MockBehavior::failure(step["fail"].get<int>()));
    } else if (step.value("malformed", false)) {
      script.push_back(MockBehavior::malformed());
    } else if (step.contains("delay_ms")) {
      script.push_back(MockBehavior::delayed(std::chrono::milliseconds(step["delay_ms"].get<int>()),
                                             step.value("reply", std::string{})));
    } else if (step.contains("reply")) {
      script.push_back(MockBehavior::reply(step["reply"].get<std::string>()));
    } else {
      fail(ErrorCode::ParseError, "unknown mock script step: " + step.dump());
    }
  }
  return script;
}

}  // namespace relialign
