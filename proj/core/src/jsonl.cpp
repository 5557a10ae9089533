#include "biaxis/jsonl.hpp"

#include <fstream>

#include "biaxis/errors.hpp"

namespace biaxis::jsonl {

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path.string());
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) {
      throw ParseError("malformed record in " + path.filename().string(), lineno);
    }
    fn(rec, lineno);
  }
}

void write_records(const std::filesystem::path& path,
                   const std::vector<json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ParseError("cannot open file for writing: " + path.string());
  }
  for (const auto& rec : records) {
    out << rec.dump() << '\n';
  }
  if (!out) {
    throw ParseError("write failed: " + path.string());
  }
}

std::string require_string(const json& rec, const char* key, std::size_t line) {
  if (!rec.contains(key) || !rec[key].is_string()) {
    throw ParseError(std::string("missing or non-string field '") + key + "'", line);
  }
  return rec[key].get<std::string>();
}

std::int64_t require_int(const json& rec, const char* key, std::size_t line) {
  if (!rec.contains(key) || !rec[key].is_number_integer()) {
    throw ParseError(std::string("missing or non-integer field '") + key + "'", line);
  }
  return rec[key].get<std::int64_t>();
}

double require_number(const json& rec, const char* key, std::size_t line) {
  if (!rec.contains(key) || !rec[key].is_number()) {
    throw ParseError(std::string("missing or non-numeric field '") + key + "'", line);
  }
  return rec[key].get<double>();
}

}  // namespace biaxis::jsonl
