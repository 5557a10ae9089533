#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

namespace biaxis::jsonl {

using json = nlohmann::json;

// Calls `fn(record, line_number)` for every non-blank line of a
// line-delimited JSON file. Throws ParseError with the offending line
// number on malformed JSON or on an unreadable file.
void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const json&, std::size_t)>& fn);

// Serializes one record per line, no pretty-printing. Overwrites.
void write_records(const std::filesystem::path& path,
                   const std::vector<json>& records);

// Field accessors that fail with the record's line number instead of
// nlohmann's generic type errors.
std::string require_string(const json& rec, const char* key, std::size_t line);
std::int64_t require_int(const json& rec, const char* key, std::size_t line);
double require_number(const json& rec, const char* key, std::size_t line);

}  // namespace biaxis::jsonl
