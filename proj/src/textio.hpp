// Fixed-format number printing and atomic file output.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace casim {

// %.10g: stable, compact formatting for metrics output.
std::string format_g10(double v);

// %.17g: round-trip exact formatting for Q-table persistence.
std::string format_g17(double v);

// Writes content to a sibling temp file, then renames over path, so readers
// see either the previous file or the complete new one.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace casim
