// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relialign/corpus.hpp"
#include "relialign/evalsuite.hpp"
#include "relialign/jsonl.hpp"
#include "relialign/scoring.hpp"
#include "relialign/supervisor.hpp"
#include "relialign/trainer.hpp"
#include "relialign/variation.hpp"

namespace relialign {

namespace fs = std::filesystem;

// Stage file names inside a run directory.
inline constexpr std::string_view kQuestionsFile = "questions.jsonl";
inline constexpr std::string_view kVariantsFile = "variants.jsonl";
inline constexpr std::string_view kAnswersFile = "answers.jsonl";
inline constexpr std::string_view kScoredFile = "scored.jsonl";
inline constexpr std::string_view kExamplesFile = "weighted_sft.jsonl";
inline constexpr std::string_view kModelFile = "model.json";
inline constexpr std::string_view kTrainLogFile = "train_log.jsonl";
inline constexpr std::string_view kReportJsonFile = "report.json";
inline constexpr std::string_view kReportMdFile = "report.md";
inline constexpr std::string_view kManifestFile = "manifest.json";

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);
std::string sha256_hex(std::string_view bytes);

struct StageRecord {
  std::string name;
  Json config = Json::object();
  /// (file, digest) pairs; run-directory files are named relative to it.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;
};

/// manifest.json of a run directory: run id, per-stage config snapshot and
/// the digest of every file each stage read and wrote.
class RunManifest {
 public:
  static RunManifest open(const fs::path& run_dir, std::uint64_t seed);

  const fs::path& run_dir() const noexcept { return run_dir_; }
  const std::string& run_id() const noexcept { return run_id_; }
  const std::vector<StageRecord>& stages() const noexcept { return stages_; }
  const StageRecord* stage(std::string_view name) const;

  /// Checks that a run-directory file was written by a recorded stage and is
  /// unchanged since. MissingStage / DigestMismatch otherwise.
  void verify(std::string_view file) const;
  /// Replaces any earlier record of the same stage and saves.
  void complete(StageRecord record);

  Json to_json() const;
  void save() const;

 private:
  fs::path run_dir_;
  std::string run_id_;
  std::uint64_t seed_ = 0;
  std::vector<StageRecord> stages_;
};

struct VariateOptions {
  fs::path questions;
  VariationPlan plan;
  /// Used when plan.paraphrase_source is ExternalProvider.
  std::optional<EndpointConfig> paraphrase_endpoint;
};

enum class QueryBackend { Endpoint, Simulated, Mock };

struct QueryOptions {
  QueryBackend backend = QueryBackend::Endpoint;
  EndpointConfig endpoint;
  SimulatedSupervisorConfig simulated;
  fs::path mock_script;
  bool record_latency = false;
};

struct EmitOptions {
  EmitMode mode = EmitMode::Naive;
  std::optional<std::size_t> budget;
};

struct EvalOptions {
  std::optional<fs::path> ceiling_model;
  std::optional<double> ceiling_accuracy;
  /// Row the trained model fills; taken from the emit stage when unset.
  std::optional<Method> method;
  std::size_t buckets = 5;
  std::size_t max_len = 8;
};

void cmd_variate(const fs::path& run_dir, std::uint64_t seed, const VariateOptions& opts);
void cmd_query(const fs::path& run_dir, std::uint64_t seed, const QueryOptions& opts);
void cmd_score(const fs::path& run_dir, std::uint64_t seed, const ThresholdPolicy& policy);
void cmd_emit(const fs::path& run_dir, std::uint64_t seed, const EmitOptions& opts);
void cmd_train(const fs::path& run_dir, std::uint64_t seed, TrainConfig cfg);
EvalReport cmd_eval(const fs::path& run_dir, std::uint64_t seed, const EvalOptions& opts);

/// Canonical answer a predicted completion stands for: the choice whose text
/// it equals (multiple choice) or its normalized form (generation).
CanonicalValue canonical_from_completion(std::string_view completion, const Question& question);

/// Test-split accuracy of a trained model on the unmodified prompts.
double model_accuracy(const TrainedModel& model, std::span<const Question> test,
                      std::span<const PromptVariant> variants, std::size_t max_len = 8);

struct SimulateOptions {
  std::size_t n_questions = 2000;
  std::size_t n_choices = 4;
  std::size_t n_features = 200;
  SimulatedSupervisorConfig supervisor;
  std::size_t n_variants = 5;
  ThresholdPolicy policy;
  TrainConfig train;
  std::size_t buckets = 5;
};

struct SimulationResult {
  EvalReport report;
  EntropyBucketReport buckets;
  ReliabilityMatrixReport matrix;
};

/// Synthetic multiple-choice corpus: each question asks for the value of one
/// of `n_features` items; every item has a fixed correct value. Half val,
/// half test.
DatasetBundle synthetic_corpus(std::size_t n_questions, std::size_t n_choices,
                               std::size_t n_features, std::uint64_t seed);

/// Weak labels from the simulator, scoring, every training mode and the gold
/// ceiling, evaluated on the test split.
SimulationResult cmd_simulate(std::uint64_t seed, const SimulateOptions& opts);

/// Writes report.json and report.md.
void write_reports(const fs::path& dir, const EvalReport& report,
                   const EntropyBucketReport* buckets, const ReliabilityMatrixReport* matrix);

}  // namespace relialign
