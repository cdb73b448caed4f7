#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

// Small string utilities shared across modules.
namespace synrag::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Decodes UTF-8 into Unicode scalar values; nullopt on malformed input.
std::optional<std::u32string> decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view chars);
void append_utf8(std::string& out, char32_t cp);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and renames into place.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lowercase hex SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

}  // namespace synrag::text
