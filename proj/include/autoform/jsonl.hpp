#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace autoform::jsonl {

using json = nlohmann::json;

// Parses one JSON object per non-empty line. Throws RecordError with the
// 1-based line number on malformed lines or non-object records.
std::vector<json> read_file(const std::filesystem::path& path);

// Streaming variant; `fn` receives (record, line_number).
void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const json&, std::size_t)>& fn);

// One compact record per line, LF endings, UTF-8 passed through unescaped.
// nlohmann objects keep keys sorted, so output is canonical.
void write_file(const std::filesystem::path& path, const std::vector<json>& records);

std::string dump_record(const json& record);

// Appends a single record and flushes; used for append-only stores.
void append_record(const std::filesystem::path& path, const json& record);

// Whole-file helpers shared across modules.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Write-to-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace autoform::jsonl
