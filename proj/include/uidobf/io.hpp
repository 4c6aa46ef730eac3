#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace uidobf::io {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// RFC 4180 quoting: fields containing ',', '"' or a newline are quoted.
std::string csv_field(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

/// Parses a CSV file written by csv_row; the header row is returned first.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace uidobf::io
