#pragma once

#include <filesystem>
#include <string>

namespace radau {

// Shortest decimal form that parses back to the same double; keeps CSV
// output readable and byte-deterministic across runs.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace radau
