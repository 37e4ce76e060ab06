#pragma once

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
//
// The 64-bit key is the user seed. The 128-bit counter is split into a 64-bit
// block index (low words) and a 64-bit stream id (high words), so every
// (seed, stream_id) pair names an independent, platform-independent sequence
// of 2^64 blocks. Each block yields two 64-bit outputs:
//     out0 = x0 | x1 << 32,   out1 = x2 | x3 << 32.
//
// Only integer arithmetic is used to turn outputs into variates, so results
// are bit-identical across compilers and standard libraries.

#include <array>
#include <cstdint>
#include <limits>

namespace polya {

struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMultiplier0 = 0xD2511F53U;
    static constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57U;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;
    static constexpr int kRounds = 10;

    explicit Philox4x32(RngSeed seed)
        : key_{static_cast<std::uint32_t>(seed.seed), static_cast<std::uint32_t>(seed.seed >> 32U)},
          stream_(seed.stream_id)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (buffered_ == 0) {
            const Block out = generate(counter_block(), key_);
            ++block_;
            cached_ = static_cast<std::uint64_t>(out[2]) | static_cast<std::uint64_t>(out[3]) << 32U;
            buffered_ = 1;
            return static_cast<std::uint64_t>(out[0]) | static_cast<std::uint64_t>(out[1]) << 32U;
        }
        buffered_ = 0;
        return cached_;
    }

    /// The raw bijection: ten rounds of Philox on one counter block.
    static constexpr Block generate(Block counter, Key key) noexcept
    {
        for (int r = 0; r < kRounds; ++r) {
            if (r != 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMultiplier0) * counter[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMultiplier1) * counter[2];
            counter = {static_cast<std::uint32_t>(p1 >> 32U) ^ counter[1] ^ key[0],
                       static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32U) ^ counter[3] ^ key[1],
                       static_cast<std::uint32_t>(p0)};
        }
        return counter;
    }

private:
    [[nodiscard]] Block counter_block() const noexcept
    {
        return {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32U),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32U)};
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint64_t cached_ = 0;
    int buffered_ = 0;
};

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject; bound > 0.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound)
{
    static_assert(Engine::min() == 0 && Engine::max() == std::numeric_limits<std::uint64_t>::max(),
                  "uniform_below needs a full-range 64-bit engine");
    unsigned __int128 product = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64U);
}

/// Uniform double on the open interval (0, 1): (k + 1/2) * 2^-52.
template <class Engine>
double uniform_open01(Engine& rng)
{
    return (static_cast<double>(rng() >> 12U) + 0.5) * 0x1.0p-52;
}

} // namespace polya
