// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>

namespace relialign::acceptance {

struct PublishedRow {
  std::string_view method;
  double accuracy;
  std::string_view pgr;  // "-" when undefined
};

// One (model pair, dataset) block: weak, three students, strong ceiling.
struct PublishedBlock {
  std::string_view pair;
  std::string_view dataset;
  std::array<PublishedRow, 5> rows;
};

// Accuracies and gap-recovered values as printed, three decimals.
inline constexpr std::array<PublishedBlock, 32> kPublishedBlocks{{
    {"Llama2-7B -> Llama2-13B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.812, "0.205"}, {"w2s+filter.(s.)", 0.800, "-0.011"}, {"w2s+filter.", 0.827, "0.485"}, {"strong ceiling", 0.855, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.444, "0.387"}, {"w2s+filter.(s.)", 0.446, "0.398"}, {"w2s+filter.", 0.500, "0.913"}, {"strong ceiling", 0.509, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.672, "-2.250"}, {"w2s+filter.(s.)", 0.813, "0.440"}, {"w2s+filter.", 0.765, "-0.476"}, {"strong ceiling", 0.842, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.062, "0.239"}, {"w2s+filter.(s.)", 0.065, "0.434"}, {"w2s+filter.", 0.062, "0.239"}, {"strong ceiling", 0.074, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.842, "0.403"}, {"w2s+filter.(s.)", 0.848, "0.467"}, {"w2s+filter.", 0.861, "0.596"}, {"strong ceiling", 0.902, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.509, "0.554"}, {"w2s+filter.(s.)", 0.509, "0.556"}, {"w2s+filter.", 0.458, "0.283"}, {"strong ceiling", 0.594, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.734, "-0.517"}, {"w2s+filter.(s.)", 0.816, "0.245"}, {"w2s+filter.", 0.820, "0.283"}, {"strong ceiling", 0.898, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.059, "0.012"}, {"w2s+filter.(s.)", 0.072, "0.203"}, {"w2s+filter.", 0.071, "0.181"}, {"strong ceiling", 0.126, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.786, "-0.165"}, {"w2s+filter.(s.)", 0.841, "0.442"}, {"w2s+filter.", 0.861, "0.667"}, {"strong ceiling", 0.891, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.448, "0.216"}, {"w2s+filter.(s.)", 0.471, "0.326"}, {"w2s+filter.", 0.476, "0.353"}, {"strong ceiling", 0.609, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.605, "-2.443"}, {"w2s+filter.(s.)", 0.804, "0.194"}, {"w2s+filter.", 0.809, "0.255"}, {"strong ceiling", 0.865, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.071, "0.192"}, {"w2s+filter.(s.)", 0.074, "0.237"}, {"w2s+filter.", 0.074, "0.237"}, {"strong ceiling", 0.126, "1.000"}}}},
    {"Mistral-7B -> Llama3-8B", "hellaswag", {{{"weak", 0.894, "-"}, {"w2s naive", 0.866, "-"}, {"w2s+filter.(s.)", 0.874, "-"}, {"w2s+filter.", 0.900, "-"}, {"strong ceiling", 0.891, "-"}}}},
    {"Mistral-7B -> Llama3-8B", "mmlu", {{{"weak", 0.579, "0.000"}, {"w2s naive", 0.588, "0.314"}, {"w2s+filter.(s.)", 0.594, "0.500"}, {"w2s+filter.", 0.603, "0.790"}, {"strong ceiling", 0.609, "1.000"}}}},
    {"Mistral-7B -> Llama3-8B", "ethics-cm", {{{"weak", 0.894, "-"}, {"w2s naive", 0.669, "-"}, {"w2s+filter.(s.)", 0.829, "-"}, {"w2s+filter.", 0.859, "-"}, {"strong ceiling", 0.865, "-"}}}},
    {"Mistral-7B -> Llama3-8B", "gsm8k", {{{"weak", 0.116, "0.000"}, {"w2s naive", 0.092, "-2.432"}, {"w2s+filter.(s.)", 0.096, "-2.050"}, {"w2s+filter.", 0.105, "-1.065"}, {"strong ceiling", 0.126, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.812, "0.205"}, {"w2s+rew.(s.)", 0.767, "-0.618"}, {"w2s+rew.", 0.819, "0.325"}, {"strong ceiling", 0.855, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.444, "0.387"}, {"w2s+rew.(s.)", 0.480, "0.728"}, {"w2s+rew.", 0.481, "0.739"}, {"strong ceiling", 0.509, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.672, "-2.250"}, {"w2s+rew.(s.)", 0.764, "-0.491"}, {"w2s+rew.", 0.796, "0.126"}, {"strong ceiling", 0.842, "1.000"}}}},
    {"Llama2-7B -> Llama2-13B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.062, "0.239"}, {"w2s+rew.(s.)", 0.055, "-0.234"}, {"w2s+rew.", 0.061, "0.148"}, {"strong ceiling", 0.074, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.842, "0.403"}, {"w2s+rew.(s.)", 0.834, "0.329"}, {"w2s+rew.", 0.859, "0.570"}, {"strong ceiling", 0.902, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.509, "0.554"}, {"w2s+rew.(s.)", 0.516, "0.591"}, {"w2s+rew.", 0.507, "0.546"}, {"strong ceiling", 0.594, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.734, "-0.517"}, {"w2s+rew.(s.)", 0.753, "-0.343"}, {"w2s+rew.", 0.808, "0.174"}, {"strong ceiling", 0.898, "1.000"}}}},
    {"Llama2-7B -> Mistral-7B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.059, "0.012"}, {"w2s+rew.(s.)", 0.072, "0.203"}, {"w2s+rew.", 0.071, "0.181"}, {"strong ceiling", 0.126, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "hellaswag", {{{"weak", 0.801, "0.000"}, {"w2s naive", 0.786, "-0.165"}, {"w2s+rew.(s.)", 0.822, "0.228"}, {"w2s+rew.", 0.848, "0.518"}, {"strong ceiling", 0.891, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "mmlu", {{{"weak", 0.404, "0.000"}, {"w2s naive", 0.448, "0.216"}, {"w2s+rew.(s.)", 0.510, "0.517"}, {"w2s+rew.", 0.505, "0.495"}, {"strong ceiling", 0.609, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "ethics-cm", {{{"weak", 0.790, "0.000"}, {"w2s naive", 0.605, "-2.443"}, {"w2s+rew.(s.)", 0.706, "-1.111"}, {"w2s+rew.", 0.778, "-0.153"}, {"strong ceiling", 0.865, "1.000"}}}},
    {"Llama2-7B -> Llama3-8B", "gsm8k", {{{"weak", 0.058, "0.000"}, {"w2s naive", 0.071, "0.192"}, {"w2s+rew.(s.)", 0.074, "0.237"}, {"w2s+rew.", 0.078, "0.293"}, {"strong ceiling", 0.126, "1.000"}}}},
    {"Mistral-7B -> Llama3-8B", "hellaswag", {{{"weak", 0.894, "-"}, {"w2s naive", 0.866, "-"}, {"w2s+rew.(s.)", 0.871, "-"}, {"w2s+rew.", 0.899, "-"}, {"strong ceiling", 0.891, "-"}}}},
    {"Mistral-7B -> Llama3-8B", "mmlu", {{{"weak", 0.579, "0.000"}, {"w2s naive", 0.588, "0.314"}, {"w2s+rew.(s.)", 0.597, "0.608"}, {"w2s+rew.", 0.597, "0.608"}, {"strong ceiling", 0.609, "1.000"}}}},
    {"Mistral-7B -> Llama3-8B", "ethics-cm", {{{"weak", 0.894, "-"}, {"w2s naive", 0.669, "-"}, {"w2s+rew.(s.)", 0.739, "-"}, {"w2s+rew.", 0.841, "-"}, {"strong ceiling", 0.865, "-"}}}},
    {"Mistral-7B -> Llama3-8B", "gsm8k", {{{"weak", 0.116, "0.000"}, {"w2s naive", 0.092, "-2.432"}, {"w2s+rew.(s.)", 0.108, "-0.829"}, {"w2s+rew.", 0.124, "0.847"}, {"strong ceiling", 0.126, "1.000"}}}},
}};

}  // namespace relialign::acceptance
