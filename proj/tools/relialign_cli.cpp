// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

// relialign: staged weak-to-strong alignment pipeline.
//
//   relialign --run-dir run variate --questions data.jsonl
//   relialign --run-dir run query --simulate
//   relialign --run-dir run score
//   relialign --run-dir run emit --mode reweighted
//   relialign --run-dir run train
//   relialign --run-dir run eval --ceiling-accuracy 0.9
//   relialign --seed 7 simulate

#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "relialign/error.hpp"
#include "relialign/pipeline.hpp"

namespace {

using namespace relialign;

constexpr int kUsageError = 2;
constexpr int kStageError = 3;

int report_error(std::string_view code, std::string_view message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
  return kStageError;
}

Method parse_method(const std::string& key) {
  for (const auto m : kAllMethods)
    if (method_key(m) == key) return m;
  fail(ErrorCode::InvalidConfig, "unknown method '" + key + "'");
}

void wait_for_signal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  int sig = 0;
  sigwait(&set, &sig);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-to-strong alignment with reliability-aware weak labels"};
  app.require_subcommand(1);

  std::string run_dir = "run";
  std::uint64_t seed = 0;
  app.add_option("--run-dir", run_dir, "Run directory holding stage files and manifest.json")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();

  EndpointConfig endpoint;
  auto add_endpoint = [&endpoint](CLI::App* cmd) {
    cmd->add_option("--base-url", endpoint.base_url, "OpenAI-compatible base URL");
    cmd->add_option("--model", endpoint.model_name, "Model name sent with each request");
    cmd->add_option("--api-key-env", endpoint.api_key_env, "Variable holding the API key")
        ->capture_default_str();
    cmd->add_option("--max-parallel", endpoint.max_parallel_requests, "Requests in flight")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--timeout", endpoint.timeout_s, "Per-request timeout (s)")->capture_default_str();
    cmd->add_option("--retries", endpoint.retries, "Retries per request")->capture_default_str();
    cmd->add_option("--backoff", endpoint.backoff_base_s, "Backoff base (s)")->capture_default_str();
  };

  SimulatedSupervisorConfig sim;
  std::optional<double> competence;
  auto add_simulator = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", sim.alpha, "Beta(alpha, beta) competence prior")->capture_default_str();
    cmd->add_option("--beta", sim.beta)->capture_default_str();
    cmd->add_option("--sensitivity", sim.variant_sensitivity, "Per-variant flip probability")
        ->capture_default_str();
    cmd->add_option("--competence", competence, "Fixed competence for every question");
  };

  // variate
  auto* variate = app.add_subcommand("variate", "Render N prompt variants per question");
  VariateOptions vopts;
  std::string paraphrase = "rule";
  variate->add_option("--questions", vopts.questions, "Question file (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  variate->add_option("--n-variants", vopts.plan.n_variants)->capture_default_str()->check(CLI::PositiveNumber);
  variate->add_option("--paraphrase-source", paraphrase)
      ->capture_default_str()
      ->check(CLI::IsMember({"rule", "external"}));
  add_endpoint(variate);

  // query
  auto* query = app.add_subcommand("query", "Collect one supervisor answer per variant");
  QueryOptions qopts;
  bool simulate_flag = false;
  std::string mock_script;
  auto* sim_opt = query->add_flag("--simulate", simulate_flag, "Use the built-in simulated supervisor");
  query->add_option("--mock-script", mock_script, "Serve this script locally and query it")
      ->check(CLI::ExistingFile)
      ->excludes(sim_opt);
  query->add_flag("--record-latency", qopts.record_latency, "Keep measured latencies");
  add_endpoint(query);
  add_simulator(query);

  // serve-mock
  auto* serve = app.add_subcommand("serve-mock", "Run the scripted chat-completion server");
  std::string serve_script;
  int port = 8000;
  serve->add_option("--script", serve_script, "Behavior script (JSON array)")
      ->required()
      ->check(CLI::ExistingFile);
  serve->add_option("--port", port)->capture_default_str();

  // score
  auto* score = app.add_subcommand("score", "Entropy, threshold and reliability weights");
  ThresholdPolicy policy;
  score->add_option("--percentile", policy.percentile)->capture_default_str()->check(CLI::Range(0.0, 100.0));
  score->add_option("--temperature", policy.temperature)->capture_default_str();

  // emit
  auto* emit = app.add_subcommand("emit", "Write the weighted training set");
  EmitOptions eopts;
  std::string mode = "reweighted";
  emit->add_option("--mode", mode)
      ->capture_default_str()
      ->check(CLI::IsMember({"naive", "filtered", "reweighted", "gold"}));
  emit->add_option("--budget", eopts.budget, "Sample this many examples");

  // train
  auto* train = app.add_subcommand("train", "Fit the toy model on weighted_sft.jsonl");
  TrainConfig tcfg;
  auto add_train = [&tcfg](CLI::App* cmd) {
    cmd->add_option("--lr", tcfg.learning_rate)->capture_default_str();
    cmd->add_option("--epochs", tcfg.epochs)->capture_default_str();
    cmd->add_option("--batch-size", tcfg.batch_size)->capture_default_str();
  };
  add_train(train);

  // eval
  auto* eval = app.add_subcommand("eval", "Accuracy, PGR and diagnostics");
  EvalOptions evopts;
  std::string ceiling_model;
  std::string method;
  eval->add_option("--ceiling-model", ceiling_model, "model.json trained on gold labels")
      ->check(CLI::ExistingFile);
  eval->add_option("--ceiling-accuracy", evopts.ceiling_accuracy, "Known strong-ceiling accuracy");
  eval->add_option("--method", method, "Row filled by model.json (naive, filtered, ...)");
  eval->add_option("--buckets", evopts.buckets)->capture_default_str()->check(CLI::PositiveNumber);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "End-to-end run on a synthetic corpus");
  SimulateOptions sopts;
  simulate->add_option("--questions", sopts.n_questions)->capture_default_str();
  simulate->add_option("--choices", sopts.n_choices)->capture_default_str();
  simulate->add_option("--features", sopts.n_features)->capture_default_str();
  simulate->add_option("--n-variants", sopts.n_variants)->capture_default_str();
  simulate->add_option("--percentile", sopts.policy.percentile)->capture_default_str();
  simulate->add_option("--temperature", sopts.policy.temperature)->capture_default_str();
  simulate->add_option("--buckets", sopts.buckets)->capture_default_str();
  add_simulator(simulate);
  add_train(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    sim.fixed_competence = competence;
    if (*variate) {
      if (paraphrase == "external") {
        vopts.plan.paraphrase_source = ParaphraseSource::ExternalProvider;
        vopts.paraphrase_endpoint = endpoint;
      }
      cmd_variate(run_dir, seed, vopts);
    } else if (*query) {
      qopts.endpoint = endpoint;
      qopts.simulated = sim;
      if (simulate_flag) {
        qopts.backend = QueryBackend::Simulated;
      } else if (!mock_script.empty()) {
        qopts.backend = QueryBackend::Mock;
        qopts.mock_script = mock_script;
      }
      cmd_query(run_dir, seed, qopts);
    } else if (*serve) {
      const auto server = run_mock_server(parse_mock_script(read_text(serve_script)), port);
      std::cout << "listening on " << server->base_url() << std::endl;
      wait_for_signal();
      server->stop();
    } else if (*score) {
      cmd_score(run_dir, seed, policy);
    } else if (*emit) {
      eopts.mode = parse_emit_mode(mode);
      cmd_emit(run_dir, seed, eopts);
    } else if (*train) {
      cmd_train(run_dir, seed, tcfg);
    } else if (*eval) {
      if (!ceiling_model.empty()) evopts.ceiling_model = ceiling_model;
      if (!method.empty()) evopts.method = parse_method(method);
      cmd_eval(run_dir, seed, evopts);
      std::cout << read_text(fs::path(run_dir) / kReportMdFile);
    } else if (*simulate) {
      sopts.supervisor = sim;
      sopts.train = tcfg;
      const auto result = cmd_simulate(seed, sopts);
      write_reports(run_dir, result.report, &result.buckets, &result.matrix);
      std::cout << read_text(fs::path(run_dir) / kReportMdFile);
    }
  } catch (const Error& e) {
    return report_error(to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("IoError", e.what());
  }
  return 0;
}
