#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace vag {

/// Philox4x32-10 block function. Stateless: the same (counter, key) always
/// yields the same 128 output bits, which is what makes path generation
/// independent of scheduling.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Open-interval uniform in (0,1) from the top 52 bits of a 64-bit word. With
/// 53 bits the largest midpoint rounds to 1.0.
inline double uniform_from_bits(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Inverse standard normal CDF (Wichura, AS241), relative accuracy ~1e-16.
double inverse_normal_cdf(double p) noexcept;

/// Independent draw families. Each lane owns a disjoint part of the counter space.
enum class Lane : std::uint32_t {
    factors = 0,  // (Z1, Z2) per step of an outer variance/rate path
    equity = 1,   // Z3 for an inner equity path, two steps per block
    oracle = 2,   // single-date Black-Scholes draws
    asian = 3,    // multi-date Black-Scholes paths
};

/// Counter-based splittable normal generator. A draw is addressed by
/// (seed, outer, inner, step, lane); no state is carried between calls.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    /// Two independent N(0,1) variates for the addressed block.
    std::pair<double, double> pair(std::uint32_t outer, std::uint32_t inner,
                                   std::uint32_t step, Lane lane) const noexcept {
        const auto out = philox4x32({outer, inner, step, static_cast<std::uint32_t>(lane)}, key_);
        const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        return {inverse_normal_cdf(uniform_from_bits(a)), inverse_normal_cdf(uniform_from_bits(b))};
    }

    std::uint64_t seed() const noexcept {
        return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    }

private:
    std::array<std::uint32_t, 2> key_;
};

}  // namespace vag
