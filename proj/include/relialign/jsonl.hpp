// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace relialign {

using Json = nlohmann::ordered_json;

/// Rounds to 9 significant digits; stage files store floats at this precision.
double round_sig9(double value);

std::string read_text(const std::filesystem::path& path);

/// One JSON value per non-blank line. ParseError names the offending line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over `path` on success.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
void write_jsonl_atomic(const std::filesystem::path& path, std::span<const Json> records);

std::string to_jsonl(std::span<const Json> records);

}  // namespace relialign
