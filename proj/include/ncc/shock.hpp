#pragma once

// High-frequency narrative shock around an after-close announcement: the
// relative gap between the mean of the first k post-open minute prices and
// the mean of the last k pre-close minute prices. Index-level shocks are
// averaged with equal weights and placed on a quarterly grid.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncc/quarter.hpp"

namespace ncc {

struct MinuteBar {
    std::int64_t minute = 0;  // minutes since 1970-01-01T00:00
    double price = 0.0;
};

// One trading session of minute bars.
struct MinuteBarSeries {
    std::string session;  // e.g. "CSI300 preclose"
    std::vector<MinuteBar> bars;

    // Strictly increasing timestamps, positive finite prices.
    void validate() const;
};

// "YYYY-MM-DDTHH:MM" with optional ":SS" and either 'T' or ' ' separator.
std::int64_t parse_minute_timestamp(std::string_view text);
std::string format_minute_timestamp(std::int64_t minute);

MinuteBarSeries read_minute_bars(const std::filesystem::path& path, std::string session);
void write_minute_bars(std::ostream& os, const MinuteBarSeries& series);

enum class SessionKind { PreClose, PostOpen };
std::filesystem::path minute_bar_path(const std::filesystem::path& dir, std::string_view index,
                                      std::string_view date, SessionKind kind);

struct OpeningGap {
    double pre_close_ma = 0.0;
    double post_open_ma = 0.0;
    double shock = 0.0;
};

OpeningGap opening_gap(const MinuteBarSeries& pre_close, const MinuteBarSeries& post_open, int k);

double opening_gap_shock(const MinuteBarSeries& pre_close, const MinuteBarSeries& post_open, int k);

double equal_weight_shock(std::span<const double> components);

class ShockSeries {
public:
    explicit ShockSeries(QuarterRange range);
    ShockSeries(QuarterRange range, std::vector<double> values);

    const QuarterRange& range() const noexcept { return range_; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool contains(const Quarter& q) const noexcept { return range_.contains(q); }
    double at(const Quarter& q) const;
    void add(const Quarter& q, double value);

    void write_csv(std::ostream& os) const;
    static ShockSeries read_csv(const std::filesystem::path& path);
    static ShockSeries parse_csv(std::string_view text, std::string_view source);

private:
    QuarterRange range_;
    std::vector<double> values_;
};

ShockSeries build_quarterly_shock_series(double base_shock, const Quarter& base_quarter,
                                         std::span<const std::pair<Quarter, double>> reinforcements,
                                         const QuarterRange& range);

}  // namespace ncc
