#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A trial's random numbers are a pure function of (master seed, trial index,
// block index), so any trial can be regenerated in isolation and results do
// not depend on how trials are spread across threads.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace rissop {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept
    {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Random stream of one Monte-Carlo trial. Block b of trial t is the Philox
/// output for counter (b_lo, b_hi, t_lo, t_hi) under the master seed.
class TrialStream {
public:
    TrialStream(std::uint64_t master_seed, std::uint64_t trial_index) noexcept
        : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
          trial_lo_(static_cast<std::uint32_t>(trial_index)),
          trial_hi_(static_cast<std::uint32_t>(trial_index >> 32))
    {
    }

    Philox4x32::Counter block(std::uint64_t index) const noexcept
    {
        return Philox4x32::generate(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), trial_lo_, trial_hi_},
            key_);
    }

    /// Two uniforms in the open interval (0, 1) with 53 random bits each.
    std::array<double, 2> uniforms(std::uint64_t index) const noexcept
    {
        const auto w = block(index);
        return {to_open_unit(w[0], w[1]), to_open_unit(w[2], w[3])};
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1) from one block (Box-Muller).
    std::complex<double> complex_normal(std::uint64_t index) const noexcept
    {
        const auto [u1, u2] = uniforms(index);
        const double r = std::sqrt(-std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

private:
    static double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept
    {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Philox4x32::Key key_;
    std::uint32_t trial_lo_;
    std::uint32_t trial_hi_;
};

} // namespace rissop
