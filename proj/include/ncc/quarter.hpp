#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace ncc {

// Calendar quarter, rendered as "YYYYQn".
class Quarter {
public:
    constexpr Quarter() = default;
    Quarter(int year, int q);

    static Quarter parse(std::string_view text);

    int year() const noexcept { return year_; }
    int q() const noexcept { return q_; }

    // Quarters since year 0 Q1; differences give distances in quarters.
    constexpr int ordinal() const noexcept { return year_ * 4 + (q_ - 1); }
    static Quarter from_ordinal(int ordinal);

    Quarter operator+(int n) const { return from_ordinal(ordinal() + n); }
    int operator-(const Quarter& other) const noexcept { return ordinal() - other.ordinal(); }

    std::string str() const;

    friend constexpr auto operator<=>(const Quarter& a, const Quarter& b) noexcept {
        return a.ordinal() <=> b.ordinal();
    }
    friend constexpr bool operator==(const Quarter& a, const Quarter& b) noexcept = default;

private:
    int year_ = 2000;
    int q_ = 1;
};

// Closed quarter range [first, last].
struct QuarterRange {
    Quarter first;
    Quarter last;

    int size() const noexcept { return last - first + 1; }
    bool contains(const Quarter& q) const noexcept { return q >= first && q <= last; }
};

}  // namespace ncc
