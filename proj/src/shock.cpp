#include "ncc/shock.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ncc/csv.hpp"
#include "ncc/errors.hpp"

namespace ncc {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400 + (m <= 2);
}

int field(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
    int v = 0;
    const char* b = text.data() + pos;
    auto res = std::from_chars(b, b + len, v);
    if (res.ec != std::errc() || res.ptr != b + len)
        throw ValidationError("malformed timestamp '" + std::string(whole) + "'");
    return v;
}

double window_mean(std::span<const MinuteBar> bars) {
    double sum = 0.0;
    for (const auto& b : bars) sum += b.price;
    return sum / static_cast<double>(bars.size());
}

}  // namespace

std::int64_t parse_minute_timestamp(std::string_view text) {
    const bool ok_shape = (text.size() == 16 || text.size() == 19) && text[4] == '-' &&
                          text[7] == '-' && (text[10] == 'T' || text[10] == ' ') && text[13] == ':' &&
                          (text.size() == 16 || text[16] == ':');
    if (!ok_shape) throw ValidationError("malformed timestamp '" + std::string(text) + "'");
    const int y = field(text, 0, 4, text);
    const int mo = field(text, 5, 2, text);
    const int d = field(text, 8, 2, text);
    const int h = field(text, 11, 2, text);
    const int mi = field(text, 14, 2, text);
    if (text.size() == 19) {
        const int s = field(text, 17, 2, text);
        if (s != 0)
            throw ValidationError("timestamp '" + std::string(text) + "' is not on a minute boundary");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59)
        throw ValidationError("timestamp out of range '" + std::string(text) + "'");
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 1440 + h * 60 + mi;
}

std::string format_minute_timestamp(std::int64_t minute) {
    std::int64_t days = minute / 1440;
    std::int64_t rem = minute % 1440;
    if (rem < 0) {
        rem += 1440;
        --days;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", y, m, d, static_cast<int>(rem / 60),
                  static_cast<int>(rem % 60));
    return buf;
}

void MinuteBarSeries::validate() const {
    for (std::size_t i = 0; i < bars.size(); ++i) {
        if (!(bars[i].price > 0.0) || !std::isfinite(bars[i].price))
            throw ValidationError(session + ": non-positive price at bar " + std::to_string(i));
        if (i > 0 && bars[i].minute <= bars[i - 1].minute)
            throw ValidationError(session + ": timestamps not strictly increasing at bar " +
                                  std::to_string(i));
    }
}

MinuteBarSeries read_minute_bars(const std::filesystem::path& path, std::string session) {
    const auto table = csv::read_file(path);
    const auto src = path.string();
    const std::size_t ts = table.column("timestamp", src);
    const std::size_t px = table.column("price", src);
    MinuteBarSeries series{std::move(session), {}};
    series.bars.reserve(table.rows.size());
    for (const auto& row : table.rows)
        series.bars.push_back({parse_minute_timestamp(row[ts]), csv::parse_double(row[px], src)});
    series.validate();
    return series;
}

void write_minute_bars(std::ostream& os, const MinuteBarSeries& series) {
    os << "timestamp,price\n";
    for (const auto& b : series.bars) os << format_minute_timestamp(b.minute) << ',' << csv::fmt(b.price) << '\n';
}

std::filesystem::path minute_bar_path(const std::filesystem::path& dir, std::string_view index,
                                      std::string_view date, SessionKind kind) {
    std::string name(index);
    name += '_';
    name += date;
    name += kind == SessionKind::PreClose ? "_preclose.csv" : "_postopen.csv";
    return dir / name;
}

OpeningGap opening_gap(const MinuteBarSeries& pre_close, const MinuteBarSeries& post_open, int k) {
    if (k < 1) throw DomainError("moving-average window k must be >= 1");
    const auto need = static_cast<std::size_t>(k);
    if (pre_close.bars.size() < need)
        throw InsufficientDataError(pre_close.session + ": fewer than " + std::to_string(k) + " bars");
    if (post_open.bars.size() < need)
        throw InsufficientDataError(post_open.session + ": fewer than " + std::to_string(k) + " bars");
    std::span<const MinuteBar> pre(pre_close.bars);
    std::span<const MinuteBar> post(post_open.bars);
    OpeningGap gap;
    gap.pre_close_ma = window_mean(pre.last(need));
    gap.post_open_ma = window_mean(post.first(need));
    gap.shock = (gap.post_open_ma - gap.pre_close_ma) / gap.pre_close_ma;
    return gap;
}

double opening_gap_shock(const MinuteBarSeries& pre_close, const MinuteBarSeries& post_open, int k) {
    return opening_gap(pre_close, post_open, k).shock;
}

double equal_weight_shock(std::span<const double> components) {
    if (components.empty()) throw DomainError("equal-weight shock of an empty component list");
    return std::accumulate(components.begin(), components.end(), 0.0) /
           static_cast<double>(components.size());
}

ShockSeries::ShockSeries(QuarterRange range) : range_(range) {
    if (range.size() < 1) throw DomainError("empty quarter range");
    values_.assign(range.size(), 0.0);
}

ShockSeries::ShockSeries(QuarterRange range, std::vector<double> values)
    : range_(range), values_(std::move(values)) {
    if (range.size() < 1) throw DomainError("empty quarter range");
    if (static_cast<int>(values_.size()) != range.size())
        throw DomainError("shock values do not match quarter range");
}

double ShockSeries::at(const Quarter& q) const {
    if (!contains(q)) throw DomainError("quarter " + q.str() + " outside shock series range");
    return values_[q - range_.first];
}

void ShockSeries::add(const Quarter& q, double value) {
    if (!contains(q)) throw DomainError("quarter " + q.str() + " outside shock series range");
    values_[q - range_.first] += value;
}

void ShockSeries::write_csv(std::ostream& os) const {
    os << "quarter,shock\n";
    for (int i = 0; i < range_.size(); ++i)
        os << (range_.first + i).str() << ',' << csv::fmt(values_[i]) << '\n';
}

ShockSeries ShockSeries::parse_csv(std::string_view text, std::string_view source) {
    const auto table = csv::parse(text, source);
    const std::size_t qc = table.column("quarter", source);
    const std::size_t sc = table.column("shock", source);
    if (table.rows.empty()) throw ValidationError(std::string(source) + ": no shock rows");
    const Quarter first = Quarter::parse(table.rows.front()[qc]);
    std::vector<double> values;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Quarter q = Quarter::parse(table.rows[i][qc]);
        if (q != first + static_cast<int>(i))
            throw ValidationError(std::string(source) + ": quarters not contiguous at " + q.str());
        values.push_back(csv::parse_double(table.rows[i][sc], source));
    }
    const int n = static_cast<int>(values.size());
    return ShockSeries({first, first + (n - 1)}, std::move(values));
}

ShockSeries ShockSeries::read_csv(const std::filesystem::path& path) {
    return parse_csv(csv::read_text(path), path.string());
}

ShockSeries build_quarterly_shock_series(double base_shock, const Quarter& base_quarter,
                                         std::span<const std::pair<Quarter, double>> reinforcements,
                                         const QuarterRange& range) {
    ShockSeries series(range);
    series.add(base_quarter, base_shock);
    for (const auto& [q, v] : reinforcements) series.add(q, v);
    return series;
}

}  // namespace ncc
