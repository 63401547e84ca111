// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/error.hpp"

namespace relialign {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::TooManyVariants: return "TooManyVariants";
    case ErrorCode::EmptyChoices: return "EmptyChoices";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::InsufficientParaphrases: return "InsufficientParaphrases";
    case ErrorCode::HttpError: return "HttpError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::MissingGold: return "MissingGold";
    case ErrorCode::PortUnavailable: return "PortUnavailable";
    case ErrorCode::EmptyAnswerSet: return "EmptyAnswerSet";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownAnswer: return "UnknownAnswer";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::EmptyCompletion: return "EmptyCompletion";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MissingStage: return "MissingStage";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace relialign
