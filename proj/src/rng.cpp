#include "ncc/rng.hpp"

#include <cmath>
#include <numbers>

namespace ncc {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t path, std::uint64_t period, DrawTag tag,
                               std::uint32_t lane) const noexcept {
    std::uint64_t h = mix64(seed_);
    h = mix64(h ^ path);
    h = mix64(h ^ period);
    h = mix64(h ^ ((static_cast<std::uint64_t>(tag) << 32) | lane));
    return h;
}

double CounterRng::uniform(std::uint64_t path, std::uint64_t period, DrawTag tag,
                           std::uint32_t lane) const noexcept {
    // 53 random bits, shifted by half an ulp so 0 and 1 are never returned.
    const std::uint64_t b = bits(path, period, tag, lane) >> 11;
    return (static_cast<double>(b) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t path, std::uint64_t period, DrawTag tag) const noexcept {
    const double u1 = uniform(path, period, tag, 0);
    const double u2 = uniform(path, period, tag, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ncc
