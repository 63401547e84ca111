// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/jsonl.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relialign/error.hpp"

namespace relialign {

double round_sig9(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<Json> records;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::ParseError,
           path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string to_jsonl(std::span<const Json> records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::IoError, "cannot promote " + tmp.string() + ": " + ec.message());
}

void write_jsonl_atomic(const std::filesystem::path& path, std::span<const Json> records) {
  write_text_atomic(path, to_jsonl(records));
}

}  // namespace relialign
