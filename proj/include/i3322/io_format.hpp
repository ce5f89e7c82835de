#pragma once

// Shared text formatting and file helpers for the JSON/CSV/report surfaces.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace i3322 {

// 17 significant digits ("%.17g"); exact double round-trip.
std::string format_g17(double x);
// 12 decimals, used for every printed value.
std::string format_fixed12(double x);

// Parse errors become ValidationError("json", ...).
nlohmann::json parse_json_document(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace i3322
