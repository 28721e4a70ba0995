#include "ncc/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ncc/errors.hpp"

namespace ncc::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string fmt(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t Table::column(std::string_view name, std::string_view source) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ValidationError(std::string(source) + ": missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

Table parse(std::string_view text, std::string_view source) {
    Table table;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) {
            if (eol == text.size()) break;
            continue;
        }
        auto fields = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                                      ": expected " + std::to_string(table.header.size()) +
                                      " fields, got " + std::to_string(fields.size()));
            }
            table.rows.push_back(std::move(fields));
        }
        if (eol == text.size()) break;
    }
    if (table.header.empty()) throw ValidationError(std::string(source) + ": empty file");
    return table;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table read_file(const std::filesystem::path& path) { return parse(read_text(path), path.string()); }

double parse_double(std::string_view field, std::string_view what) {
    const std::string_view s = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(value))
        throw ValidationError(std::string(what) + ": not a finite number: '" + std::string(s) + "'");
    return value;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ncc::csv
