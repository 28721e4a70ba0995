#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ncc::csv {

// Shortest round-trippable decimal ("%.17g").
std::string fmt(double x);

std::vector<std::string> split_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws ValidationError naming `source` if absent.
    std::size_t column(std::string_view name, std::string_view source) const;
};

// Whole file; throws ValidationError if it cannot be opened.
std::string read_text(const std::filesystem::path& path);

// Reads a comma-separated file with a header row. Blank lines are skipped;
// every row must have as many fields as the header.
Table read_file(const std::filesystem::path& path);
Table parse(std::string_view text, std::string_view source);

// Strict decimal parse; throws ValidationError naming `what` on garbage,
// empty fields or explicit missing markers (NA, NaN, null).
double parse_double(std::string_view field, std::string_view what);

// Writes `content` to a sibling temp file then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ncc::csv
