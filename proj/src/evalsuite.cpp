// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/evalsuite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "relialign/corpus.hpp"
#include "relialign/error.hpp"

namespace relialign {

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(round_sig9(*v)) : Json(nullptr);
}

Json pgr_json(const std::optional<double>& v) {
  return v ? Json(round_sig9(*v)) : Json("-");
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

const CanonicalValue& gold_of(const GoldIndex& gold, const std::string& qid) {
  const auto it = gold.find(qid);
  if (it == gold.end()) fail(ErrorCode::MissingGold, "no gold answer for question " + qid);
  return it->second;
}

}  // namespace

double accuracy(std::span<const CanonicalValue> predictions, std::span<const CanonicalValue> gold) {
  if (predictions.size() != gold.size())
    fail(ErrorCode::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                        std::to_string(gold.size()) + " gold answers");
  require(!predictions.empty(), "accuracy needs at least one prediction");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predictions[i] == gold[i];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::optional<double> pgr(double weak, double w2s, double ceiling) {
  for (double v : {weak, w2s, ceiling})
    require(v >= 0.0 && v <= 1.0, "accuracies must lie in [0, 1]");
  if (ceiling <= weak) return std::nullopt;
  return (w2s - weak) / (ceiling - weak);
}

std::string format_pgr(const std::optional<double>& value) {
  return value ? fixed3(*value) : std::string("-");
}

std::string_view method_key(Method m) noexcept {
  switch (m) {
    case Method::Naive: return "naive";
    case Method::FilteredSampled: return "filtered_sampled";
    case Method::Filtered: return "filtered";
    case Method::ReweightedSampled: return "reweighted_sampled";
    case Method::Reweighted: return "reweighted";
  }
  return "";
}

std::string_view method_label(Method m) noexcept {
  switch (m) {
    case Method::Naive: return "w2s naive";
    case Method::FilteredSampled: return "w2s+filter.(s.)";
    case Method::Filtered: return "w2s+filter.";
    case Method::ReweightedSampled: return "w2s+rew.(s.)";
    case Method::Reweighted: return "w2s+rew.";
  }
  return "";
}

void EvalReport::set(Method m, double acc) {
  for (auto& [method, value] : w2s)
    if (method == m) {
      value = acc;
      return;
    }
  w2s.emplace_back(m, acc);
  std::stable_sort(w2s.begin(), w2s.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::optional<double> EvalReport::accuracy_of(Method m) const {
  for (const auto& [method, value] : w2s)
    if (method == m) return value;
  return std::nullopt;
}

std::optional<double> EvalReport::pgr_of(Method m) const {
  const auto acc = accuracy_of(m);
  if (!acc) return std::nullopt;
  return pgr(weak, *acc, ceiling);
}

GoldIndex gold_index(std::span<const Question> questions) {
  GoldIndex out;
  for (const auto& q : questions)
    if (q.gold) out.emplace(q.id, *q.gold);
  return out;
}

std::optional<double> EntropyBucket::accuracy() const {
  const auto n = correct + incorrect;
  if (n == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(n);
}

std::optional<double> EntropyBucket::modal_accuracy() const {
  if (questions == 0) return std::nullopt;
  return static_cast<double>(modal_correct) / static_cast<double>(questions);
}

bool EntropyBucketReport::non_increasing() const {
  std::optional<double> prev;
  for (const auto& b : buckets) {
    const auto acc = b.accuracy();
    if (!acc) continue;
    if (prev && *acc > *prev) return false;
    prev = acc;
  }
  return true;
}

CanonicalValue modal_answer(const PredictionDistribution& dist) {
  require(!dist.support.empty(), "distribution has no support");
  const auto top = *std::max_element(dist.counts.begin(), dist.counts.end());
  std::optional<CanonicalValue> best;
  for (std::size_t k = 0; k < dist.support.size(); ++k)
    if (dist.counts[k] == top && (!best || dist.support[k] < *best)) best = dist.support[k];
  return *best;
}

EntropyBucketReport entropy_bucket_report(std::span<const ScoredQuestion> scored,
                                          const GoldIndex& gold, std::size_t bucket_count) {
  require(bucket_count >= 1, "bucket count must be positive");
  std::size_t max_n = 1;
  for (const auto& s : scored) max_n = std::max(max_n, s.n());
  const double top = max_n > 1 ? std::log(static_cast<double>(max_n)) : 1.0;

  EntropyBucketReport report;
  report.edges.resize(bucket_count + 1);
  for (std::size_t b = 0; b <= bucket_count; ++b)
    report.edges[b] = top * static_cast<double>(b) / static_cast<double>(bucket_count);
  report.edges.back() = top;
  report.buckets.resize(bucket_count);
  for (std::size_t b = 0; b < bucket_count; ++b) {
    report.buckets[b].lo = report.edges[b];
    report.buckets[b].hi = report.edges[b + 1];
  }

  for (const auto& s : scored) {
    const auto& g = gold_of(gold, s.question_id);
    const auto inner_begin = report.edges.begin() + 1;
    const auto inner_end = report.edges.end() - 1;
    const auto b = static_cast<std::size_t>(std::upper_bound(inner_begin, inner_end, s.entropy) -
                                            inner_begin);
    auto& bucket = report.buckets[b];
    ++bucket.questions;
    for (const auto& a : s.answers) ++(a == g ? bucket.correct : bucket.incorrect);
    bucket.modal_correct += modal_answer(s.distribution) == g;
  }
  return report;
}

const ReliabilityCell* ReliabilityMatrixReport::find(const CanonicalValue& answer,
                                                     const CanonicalValue& gold) const {
  for (const auto& c : cells)
    if (c.answer == answer && c.gold == gold) return &c;
  return nullptr;
}

ReliabilityMatrixReport reliability_matrix_report(std::span<const ScoredQuestion> scored,
                                                  const GoldIndex& gold) {
  std::map<std::pair<CanonicalValue, CanonicalValue>, std::pair<double, std::size_t>> sums;
  double diag_sum = 0.0, off_sum = 0.0;
  std::size_t diag_n = 0, off_n = 0;
  ReliabilityMatrixReport report;
  for (const auto& s : scored) {
    const auto& g = gold_of(gold, s.question_id);
    require(s.per_variant_weight.size() == s.answers.size(), "weights and answers misaligned");
    for (std::size_t i = 0; i < s.answers.size(); ++i) {
      const double w = s.per_variant_weight[i];
      auto& cell = sums[{s.answers[i], g}];
      cell.first += w;
      ++cell.second;
      if (s.answers[i] == g) {
        diag_sum += w;
        ++diag_n;
      } else {
        off_sum += w;
        ++off_n;
      }
      ++report.total;
    }
  }
  for (const auto& [key, acc] : sums)
    report.cells.push_back({key.first, key.second, acc.first / static_cast<double>(acc.second),
                            acc.second});
  if (diag_n) report.diagonal_mean = diag_sum / static_cast<double>(diag_n);
  if (off_n) report.off_diagonal_mean = off_sum / static_cast<double>(off_n);
  return report;
}

Json eval_report_to_json(const EvalReport& report) {
  Json accuracy = Json::object();
  Json pgrs = Json::object();
  accuracy["weak"] = round_sig9(report.weak);
  for (const auto m : kAllMethods) {
    if (const auto acc = report.accuracy_of(m)) {
      accuracy[std::string(method_key(m))] = round_sig9(*acc);
      pgrs[std::string(method_key(m))] = pgr_json(report.pgr_of(m));
    }
  }
  accuracy["ceiling"] = round_sig9(report.ceiling);
  Json j;
  j["accuracy"] = std::move(accuracy);
  j["pgr"] = std::move(pgrs);
  return j;
}

Json bucket_report_to_json(const EntropyBucketReport& report) {
  Json buckets = Json::array();
  for (const auto& b : report.buckets) {
    Json j;
    j["lo"] = round_sig9(b.lo);
    j["hi"] = round_sig9(b.hi);
    j["questions"] = b.questions;
    j["correct"] = b.correct;
    j["incorrect"] = b.incorrect;
    j["accuracy"] = optional_number(b.accuracy());
    j["modal_correct"] = b.modal_correct;
    j["modal_accuracy"] = optional_number(b.modal_accuracy());
    buckets.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (double e : report.edges) edges.push_back(round_sig9(e));
  Json j;
  j["edges"] = std::move(edges);
  j["buckets"] = std::move(buckets);
  j["non_increasing"] = report.non_increasing();
  return j;
}

Json matrix_report_to_json(const ReliabilityMatrixReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json j;
    j["answer"] = canonical_to_json(c.answer);
    j["gold"] = canonical_to_json(c.gold);
    j["mean_weight"] = round_sig9(c.mean_weight);
    j["count"] = c.count;
    cells.push_back(std::move(j));
  }
  Json j;
  j["cells"] = std::move(cells);
  j["total"] = report.total;
  j["diagonal_mean"] = optional_number(report.diagonal_mean);
  j["off_diagonal_mean"] = optional_number(report.off_diagonal_mean);
  return j;
}

Json full_report_json(const EvalReport& report, const EntropyBucketReport* buckets,
                      const ReliabilityMatrixReport* matrix) {
  Json j;
  j["eval"] = eval_report_to_json(report);
  j["entropy_buckets"] = buckets ? bucket_report_to_json(*buckets) : Json(nullptr);
  j["reliability_matrix"] = matrix ? matrix_report_to_json(*matrix) : Json(nullptr);
  return j;
}

std::string render_markdown(const EvalReport& report, const EntropyBucketReport* buckets,
                            const ReliabilityMatrixReport* matrix) {
  std::string md = "# Evaluation\n\n| method | accuracy | PGR |\n|---|---|---|\n";
  md += "| weak | " + fixed3(report.weak) + " | |\n";
  for (const auto& [m, acc] : report.w2s)
    md += "| " + std::string(method_label(m)) + " | " + fixed3(acc) + " | " +
          format_pgr(report.pgr_of(m)) + " |\n";
  md += "| strong ceiling | " + fixed3(report.ceiling) + " | |\n";

  if (buckets) {
    md += "\n## Weak-label accuracy by entropy\n\n"
          "| entropy | questions | correct | incorrect | accuracy | modal accuracy |\n"
          "|---|---|---|---|---|---|\n";
    for (std::size_t b = 0; b < buckets->buckets.size(); ++b) {
      const auto& k = buckets->buckets[b];
      const bool last = b + 1 == buckets->buckets.size();
      const auto acc = k.accuracy();
      const auto modal = k.modal_accuracy();
      md += "| [" + fixed3(k.lo) + ", " + fixed3(k.hi) + (last ? "]" : ")") + " | " +
            std::to_string(k.questions) + " | " + std::to_string(k.correct) + " | " +
            std::to_string(k.incorrect) + " | " + (acc ? fixed3(*acc) : "-") + " | " +
            (modal ? fixed3(*modal) : "-") + " |\n";
    }
  }
  if (matrix) {
    md += "\n## Reliability by (weak label, gold)\n\n| weak label | gold | mean weight | count |\n"
          "|---|---|---|---|\n";
    for (const auto& c : matrix->cells)
      md += "| " + c.answer.label() + " | " + c.gold.label() + " | " + fixed3(c.mean_weight) +
            " | " + std::to_string(c.count) + " |\n";
    md += "\ndiagonal mean: " + (matrix->diagonal_mean ? fixed3(*matrix->diagonal_mean) : "-") +
          ", off-diagonal mean: " +
          (matrix->off_diagonal_mean ? fixed3(*matrix->off_diagonal_mean) : "-") + "\n";
  }
  return md;
}

}  // namespace relialign
