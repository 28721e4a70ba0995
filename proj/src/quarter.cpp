#include "ncc/quarter.hpp"

#include <charconv>

#include "ncc/errors.hpp"

namespace ncc {

Quarter::Quarter(int year, int q) : year_(year), q_(q) {
    if (q < 1 || q > 4) throw DomainError("quarter number must be 1..4");
    if (year < 0) throw DomainError("year must be non-negative");
}

Quarter Quarter::parse(std::string_view text) {
    const auto bad = [&] { return ValidationError("malformed quarter '" + std::string(text) + "'"); };
    if (text.size() != 6 || (text[4] != 'Q' && text[4] != 'q')) throw bad();
    int year = 0;
    auto res = std::from_chars(text.data(), text.data() + 4, year);
    if (res.ec != std::errc() || res.ptr != text.data() + 4) throw bad();
    const int q = text[5] - '0';
    if (q < 1 || q > 4) throw bad();
    return Quarter(year, q);
}

Quarter Quarter::from_ordinal(int ordinal) {
    if (ordinal < 0) throw DomainError("quarter ordinal negative");
    return Quarter(ordinal / 4, ordinal % 4 + 1);
}

std::string Quarter::str() const { return std::to_string(year_) + "Q" + std::to_string(q_); }

}  // namespace ncc
