// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relialign {

enum class ErrorCode {
  // variation
  TooManyVariants,
  EmptyChoices,
  ProviderUnavailable,
  InsufficientParaphrases,
  // supervisor
  HttpError,
  Timeout,
  MalformedResponse,
  MissingGold,
  PortUnavailable,
  // scoring
  EmptyAnswerSet,
  EmptyInput,
  UnknownAnswer,
  // corpus
  ParseError,
  DuplicateId,
  EmptyCorpus,
  EmptyTrainingSet,
  // trainer
  EmptyCompletion,
  EmptyBatch,
  NonFiniteLoss,
  // evalsuite
  LengthMismatch,
  // shared
  PreconditionViolation,
  InvalidConfig,
  MissingStage,
  DigestMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::PreconditionViolation, message);
}

}  // namespace relialign
