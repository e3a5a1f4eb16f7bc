#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace modalid {

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);

/// Writes bytes verbatim (no newline translation). Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace modalid
