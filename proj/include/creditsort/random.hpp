#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace creditsort {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is a
/// pure function of (counter, key), which is what makes per-draw streams
/// independent of how draws are partitioned across threads.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Random stream owned by one Monte Carlo draw. Seeded by (seed, draw index);
/// successive calls walk the block counter.
class DrawStream {
public:
    using result_type = std::uint64_t;

    DrawStream(std::uint64_t seed, std::uint64_t draw)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          draw_(draw)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()()
    {
        if (cursor_ == 2) {
            const Philox4x32::Counter ctr{static_cast<std::uint32_t>(draw_),
                                          static_cast<std::uint32_t>(draw_ >> 32),
                                          static_cast<std::uint32_t>(block_),
                                          static_cast<std::uint32_t>(block_ >> 32)};
            const auto out = Philox4x32::block(ctr, key_);
            buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
            buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
            ++block_;
            cursor_ = 0;
        }
        return buffer_[cursor_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Unit-rate exponential by inversion; finite and nonnegative.
    double exponential() { return -std::log1p(-uniform()); }

private:
    Philox4x32::Key key_;
    std::uint64_t draw_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

} // namespace creditsort
