#pragma once

#include <cstdint>

namespace ncc {

// Stream tags for the per-period draws of one simulated path.
enum class DrawTag : std::uint32_t { Kappa = 1, Eps = 2, Nu = 3 };

// Counter-based generator: every draw is a pure function of
// (seed, path, period, tag), so paths can be simulated in any order or on
// any thread and still reproduce bit-for-bit.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t path, std::uint64_t period, DrawTag tag,
                       std::uint32_t lane = 0) const noexcept;

    // Uniform on the open interval (0, 1).
    double uniform(std::uint64_t path, std::uint64_t period, DrawTag tag,
                   std::uint32_t lane = 0) const noexcept;

    // Standard normal by Box-Muller over two lanes.
    double normal(std::uint64_t path, std::uint64_t period, DrawTag tag) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace ncc
