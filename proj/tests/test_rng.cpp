#include "polya/rng.hpp"

#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <set>

using namespace polya;

TEST_CASE("Philox4x32-10 known-answer vectors", "[rng]")
{
    using Block = Philox4x32::Block;
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("engine output layout follows the counter", "[rng]")
{
    Philox4x32 rng(RngSeed{0, 0});
    const auto block0 = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    const auto block1 = Philox4x32::generate({1, 0, 0, 0}, {0, 0});
    CHECK(rng() == (std::uint64_t{block0[1]} << 32U | block0[0]));
    CHECK(rng() == (std::uint64_t{block0[3]} << 32U | block0[2]));
    CHECK(rng() == (std::uint64_t{block1[1]} << 32U | block1[0]));

    // Seed goes to the key, stream id to the high counter words.
    Philox4x32 keyed(RngSeed{0x0000000500000007ULL, 0x0000000300000002ULL});
    const auto expected = Philox4x32::generate({0, 0, 2, 3}, {7, 5});
    CHECK(keyed() == (std::uint64_t{expected[1]} << 32U | expected[0]));
}

TEST_CASE("identical seeds reproduce, distinct streams differ", "[rng]")
{
    Philox4x32 a(RngSeed{42, 3});
    Philox4x32 b(RngSeed{42, 3});
    Philox4x32 c(RngSeed{42, 4});
    Philox4x32 d(RngSeed{43, 3});
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        REQUIRE(x == b());
        same_c += x == c() ? 1 : 0;
        same_d += x == d() ? 1 : 0;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniform_below is in range and roughly uniform", "[rng]")
{
    Philox4x32 rng(RngSeed{1, 0});
    constexpr std::uint64_t kBins = 7;
    constexpr int kDraws = 700000;
    std::array<int, kBins> counts{};
    for (int i = 0; i < kDraws; ++i) {
        const auto v = uniform_below(rng, kBins);
        REQUIRE(v < kBins);
        ++counts[v];
    }
    double chi2 = 0.0;
    const double expected = static_cast<double>(kDraws) / kBins;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // chi-square with 6 degrees of freedom; 1e-6 upper tail is about 35.9.
    CHECK(chi2 < 35.9);

    CHECK(uniform_below(rng, 1) == 0);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) seen.insert(uniform_below(rng, 3));
    CHECK(seen == std::set<std::uint64_t>{0, 1, 2});
}

TEST_CASE("uniform_open01 stays strictly inside (0, 1)", "[rng]")
{
    struct Extreme {
        using result_type = std::uint64_t;
        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return ~result_type{0}; }
        result_type value;
        result_type operator()() const { return value; }
    };
    Extreme zero{0};
    Extreme ones{~std::uint64_t{0}};
    CHECK(uniform_open01(zero) > 0.0);
    CHECK(uniform_open01(ones) < 1.0);

    Philox4x32 rng(RngSeed{5, 0});
    double sum = 0.0;
    constexpr int kDraws = 1000000;
    for (int i = 0; i < kDraws; ++i) sum += uniform_open01(rng);
    // Mean 1/2, std err sqrt(1/12 / n).
    CHECK(std::fabs(sum / kDraws - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / kDraws));
}
