// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>

#include "relialign/error.hpp"

namespace relialign::kernels {

namespace {

// Loss terms of one (x, y) pair; `row_of(state)` yields the gradient row to
// accumulate scale * dL/dlogits into.
template <typename RowSink>
double clm_terms(const ToyModel& model, const TokenSequence& x, const TokenSequence& y,
                 double scale, RowSink&& row_of) {
  if (y.empty()) fail(ErrorCode::EmptyCompletion, "completion has no tokens");
  const auto v = model.vocab_size();
  for (auto t : x) require(t < v, "prompt token outside the vocabulary");
  const double inv_len = 1.0 / static_cast<double>(y.size());

  std::vector<double> probs(v);
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    require(y[i] < v, "completion token outside the vocabulary");
    const auto state = i == 0 ? model.context_after(x) : static_cast<std::size_t>(y[i - 1]);
    const auto logits = model.row(state);
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t k = 0; k < v; ++k) {
      probs[k] = std::exp(logits[k] - peak);
      total += probs[k];
    }
    loss -= (logits[y[i]] - peak - std::log(total)) * inv_len;

    double* g = row_of(state);
    const double coeff = scale * inv_len;
    for (std::size_t k = 0; k < v; ++k) g[k] += coeff * (probs[k] / total);
    g[y[i]] -= coeff;
  }
  return loss;
}

// Rows touched by one chunk of examples, in first-touch order.
struct SparseRows {
  explicit SparseRows(std::size_t states, std::size_t width)
      : slot(states, -1), width(width) {}

  double* row(std::size_t state) {
    if (slot[state] < 0) {
      slot[state] = static_cast<std::int64_t>(order.size());
      order.push_back(state);
      values.resize(values.size() + width, 0.0);
    }
    return values.data() + static_cast<std::size_t>(slot[state]) * width;
  }

  std::vector<std::int64_t> slot;
  std::vector<std::size_t> order;
  std::vector<double> values;
  std::size_t width;
};

double batch_serial(const ToyModel& model, std::span<const TrainingPair> pairs,
                    std::vector<double>& gradient) {
  const double inv_n = 1.0 / static_cast<double>(pairs.size());
  double loss = 0.0;
  for (const auto& p : pairs)
    loss += p.weight * inv_n * accumulate_clm(model, p.prompt, p.completion, p.weight * inv_n, gradient);
  return loss;
}

double batch_parallel(const ToyModel& model, std::span<const TrainingPair> pairs,
                      std::vector<double>& gradient) {
  const double inv_n = 1.0 / static_cast<double>(pairs.size());
  const std::size_t n_chunks = (pairs.size() + kGradientChunk - 1) / kGradientChunk;
  const auto width = model.vocab_size();
  std::vector<SparseRows> partial(n_chunks, SparseRows(model.context_states(), width));
  std::vector<double> chunk_loss(n_chunks, 0.0);
  std::vector<std::exception_ptr> errors(n_chunks);

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
    try {
      auto& rows = partial[c];
      const auto begin = static_cast<std::size_t>(c) * kGradientChunk;
      const auto end = std::min(pairs.size(), begin + kGradientChunk);
      double loss = 0.0;
      for (auto i = begin; i < end; ++i) {
        const auto& p = pairs[i];
        const double scale = p.weight * inv_n;
        loss += scale * clm_terms(model, p.prompt, p.completion, scale,
                                  [&rows](std::size_t s) { return rows.row(s); });
      }
      chunk_loss[c] = loss;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  double loss = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    loss += chunk_loss[c];
    const auto& rows = partial[c];
    for (std::size_t r = 0; r < rows.order.size(); ++r) {
      double* dst = gradient.data() + rows.order[r] * width;
      const double* src = rows.values.data() + r * width;
      for (std::size_t k = 0; k < width; ++k) dst[k] += src[k];
    }
  }
  return loss;
}

}  // namespace

double accumulate_clm(const ToyModel& model, const TokenSequence& x, const TokenSequence& y,
                      double scale, std::vector<double>& gradient) {
  const auto width = model.vocab_size();
  return clm_terms(model, x, y, scale,
                   [&](std::size_t s) { return gradient.data() + s * width; });
}

double batch_loss_and_gradient(const ToyModel& model, std::span<const TrainingPair> pairs,
                               std::vector<double>& gradient, Exec exec) {
  if (pairs.empty()) fail(ErrorCode::EmptyBatch, "batch has no examples");
  gradient.assign(model.logits().size(), 0.0);
  return exec == Exec::Serial ? batch_serial(model, pairs, gradient)
                              : batch_parallel(model, pairs, gradient);
}

std::vector<ScoredQuestion> score_all(std::span<const AnswerGroup> groups, double temperature,
                                      Exec exec) {
  std::vector<ScoredQuestion> out(groups.size());
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < groups.size(); ++i)
      out[i] = score_question(groups[i].question_id, groups[i].answers, temperature);
    return out;
  }
  std::vector<std::exception_ptr> errors(groups.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(groups.size()); ++i) {
    try {
      out[i] = score_question(groups[i].question_id, groups[i].answers, temperature);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace relialign::kernels
