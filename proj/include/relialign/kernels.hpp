// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "relialign/scoring.hpp"
#include "relialign/trainer.hpp"

// Data-parallel hot loops. Each kernel has a plain serial reference and an
// OpenMP variant; tests hold the two together and bench/ times them.
namespace relialign::kernels {

enum class Exec { Serial, Parallel };

struct AnswerGroup {
  std::string question_id;
  std::vector<CanonicalValue> answers;
};

/// Entropy and reliability weights for every question. Questions are
/// independent, so both variants give bit-identical output.
std::vector<ScoredQuestion> score_all(std::span<const AnswerGroup> groups, double temperature,
                                      Exec exec);

/// Examples per parallel work unit. Fixed, so the reduction order (and the
/// result) does not depend on the thread count.
inline constexpr std::size_t kGradientChunk = 64;

/// Re-weighted loss and gradient over a batch: (1/N) sum_i w_i L_i. The parallel
/// variant sums per-chunk partials in chunk order; it agrees with the serial
/// one up to floating-point reassociation.
double batch_loss_and_gradient(const ToyModel& model, std::span<const TrainingPair> pairs,
                               std::vector<double>& gradient, Exec exec);

/// Adds scale * dL_CLM(x, y) into `gradient` and returns L_CLM(x, y).
double accumulate_clm(const ToyModel& model, const TokenSequence& x, const TokenSequence& y,
                      double scale, std::vector<double>& gradient);

}  // namespace relialign::kernels
