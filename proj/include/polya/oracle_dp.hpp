#pragma once

// Exact finite-horizon first-passage probabilities of the excess process
// S_n = B_n - W_n, and brute-force enumeration of draw sequences.
//
// After n draws with k black the urn holds b+k black and w+n-k white balls
// out of b+w+n, so every path of length n has probability
//     prod(black factors) * prod(white factors) / (b+w)(b+w+1)...(b+w+n-1).
// The DP carries integer numerators over that shared rising-factorial
// denominator, so no per-cell gcd is needed.

#include "polya/core_exact.hpp"
#include "polya/errors.hpp"
#include "polya/rational.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polya {

inline constexpr std::size_t kDefaultDpMemoryBudget = std::size_t{1} << 30; // 1 GiB

struct DpOptions {
    std::size_t memory_budget_bytes = kDefaultDpMemoryBudget;
};

/// Exact law of the first time tau at which S_n equals the target level.
struct DPTable {
    UrnConfig config;
    std::int64_t target_diff;
    std::int64_t horizon;
    std::vector<ExactProbability> hit_pmf; ///< P(tau = n), n = 0..horizon
    ExactProbability cumulative;           ///< P(tau <= horizon)

    /// P(tau <= n) for n <= horizon.
    [[nodiscard]] ExactProbability cumulative_at(std::int64_t n) const
    {
        if (n < 0 || n > horizon) throw std::out_of_range("DPTable::cumulative_at: n outside [0, horizon]");
        Rational sum = 0;
        for (std::int64_t i = 0; i <= n; ++i) sum += hit_pmf[static_cast<std::size_t>(i)].value();
        return ExactProbability(sum);
    }
};

/// Rough peak memory of first_passage_dp: one row of numerators plus the
/// stored pmf, all bounded by the bit length of the final denominator.
inline double estimate_dp_memory(const UrnConfig& config, std::int64_t horizon)
{
    double bits = 1.0;
    for (std::int64_t i = 0; i < horizon; ++i) bits += std::log2(static_cast<double>(config.total() + i));
    const double bytes_per_integer = bits / 8.0 + 48.0;
    const auto cells = static_cast<double>(horizon + 2);
    return 2.0 * cells * bytes_per_integer      // current and next row
           + 2.0 * cells * bytes_per_integer;   // pmf numerators and denominators
}

inline std::int64_t max_feasible_horizon(const UrnConfig& config, std::size_t budget_bytes)
{
    const auto budget = static_cast<double>(budget_bytes);
    if (estimate_dp_memory(config, 0) > budget) return -1;
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    while (estimate_dp_memory(config, hi) <= budget) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (estimate_dp_memory(config, mid) <= budget ? lo : hi) = mid;
    }
    return lo;
}

/// Forward DP over (step n, black draws k); S = (b - w) + 2k - n. Cells at
/// the target level are absorbed and removed from later rows.
inline DPTable first_passage_dp(const UrnConfig& config, std::int64_t target_diff, std::int64_t horizon,
                                const DpOptions& options = {})
{
    if (horizon < 0) throw std::domain_error("first_passage_dp: horizon must be >= 0");
    const std::int64_t start = config.excess();

    DPTable table{config, target_diff, horizon, {}, ExactProbability(Rational(0))};
    table.hit_pmf.reserve(static_cast<std::size_t>(horizon) + 1);
    if (target_diff == start) {
        table.hit_pmf.emplace_back(Rational(1));
        table.hit_pmf.resize(static_cast<std::size_t>(horizon) + 1, ExactProbability(Rational(0)));
        table.cumulative = ExactProbability(Rational(1));
        return table;
    }

    if (estimate_dp_memory(config, horizon) > static_cast<double>(options.memory_budget_bytes)) {
        const std::int64_t feasible = max_feasible_horizon(config, options.memory_budget_bytes);
        throw resource_error("first_passage_dp: horizon " + std::to_string(horizon) +
                                 " exceeds the memory budget of " +
                                 std::to_string(options.memory_budget_bytes) +
                                 " bytes; largest feasible horizon is " + std::to_string(feasible),
                             feasible);
    }

    const std::int64_t b = config.black();
    const std::int64_t w = config.white();
    std::vector<BigInt> row{BigInt(1)};
    std::vector<BigInt> next;
    BigInt denominator = 1;
    BigInt hit_numerator_total = 0;
    table.hit_pmf.emplace_back(Rational(0));

    for (std::int64_t n = 0; n < horizon; ++n) {
        next.assign(static_cast<std::size_t>(n) + 2, BigInt(0));
        for (std::int64_t k = 0; k <= n; ++k) {
            const BigInt& mass = row[static_cast<std::size_t>(k)];
            if (mass == 0) continue;
            next[static_cast<std::size_t>(k) + 1] += mass * (b + k);
            next[static_cast<std::size_t>(k)] += mass * (w + n - k);
        }
        const std::int64_t balls = b + w + n;
        denominator *= balls;
        hit_numerator_total *= balls;

        // At step n+1 the target is reached at k = (m - S_0 + n + 1) / 2.
        BigInt hit = 0;
        const std::int64_t twice_k = target_diff - start + n + 1;
        if (twice_k >= 0 && twice_k % 2 == 0 && twice_k / 2 <= n + 1) {
            auto& cell = next[static_cast<std::size_t>(twice_k / 2)];
            hit = cell;
            cell = 0;
        }
        hit_numerator_total += hit;
        table.hit_pmf.emplace_back(Rational(hit, denominator));
        row.swap(next);
    }
    table.cumulative = ExactProbability(Rational(hit_numerator_total, denominator));
    return table;
}

enum class Draw : std::uint8_t { black, white };

/// A finite draw sequence, stored as a bit mask (bit i set = draw i black).
class DrawSequence {
public:
    static constexpr std::int64_t kMaxLength = 32;

    DrawSequence() = default;
    DrawSequence(std::uint32_t black_mask, std::int64_t length) : mask_(black_mask), length_(length)
    {
        if (length < 0 || length > kMaxLength) throw std::domain_error("DrawSequence: length out of range");
    }

    [[nodiscard]] std::int64_t length() const noexcept { return length_; }
    [[nodiscard]] Draw at(std::int64_t i) const
    {
        return ((mask_ >> i) & 1U) != 0 ? Draw::black : Draw::white;
    }
    [[nodiscard]] std::int64_t black_count() const noexcept
    {
        return static_cast<std::int64_t>(__builtin_popcount(mask_));
    }
    [[nodiscard]] std::string str() const
    {
        std::string s;
        for (std::int64_t i = 0; i < length_; ++i) s += at(i) == Draw::black ? 'B' : 'W';
        return s;
    }

    friend bool operator==(const DrawSequence&, const DrawSequence&) = default;

private:
    std::uint32_t mask_ = 0;
    std::int64_t length_ = 0;
};

struct SequenceProbability {
    DrawSequence draws;
    Rational probability;
};

inline constexpr std::int64_t kMaxEnumerationLength = 20;

/// All 2^n draw sequences with their exact probabilities, black-first
/// lexicographic order. Each probability is the running product of
/// (balls of the drawn color) / (balls in the urn).
inline std::vector<SequenceProbability> enumerate_sequences(const UrnConfig& config, std::int64_t n)
{
    if (n < 0) throw std::domain_error("enumerate_sequences: n must be >= 0");
    if (n > kMaxEnumerationLength)
        throw resource_error("enumerate_sequences: n = " + std::to_string(n) + " exceeds the limit of " +
                                 std::to_string(kMaxEnumerationLength),
                             kMaxEnumerationLength);

    std::vector<SequenceProbability> out;
    out.reserve(std::size_t{1} << n);

    struct Frame {
        std::uint32_t mask;
        std::int64_t depth;
        std::int64_t black;
        std::int64_t white;
        Rational probability;
    };
    std::vector<Frame> stack;
    stack.push_back({0U, 0, config.black(), config.white(), Rational(1)});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.depth == n) {
            out.push_back({DrawSequence(f.mask, n), std::move(f.probability)});
            continue;
        }
        const std::int64_t balls = f.black + f.white;
        // Push white first so black is expanded first.
        stack.push_back({f.mask, f.depth + 1, f.black, f.white + 1,
                         f.probability * Rational(f.white, balls)});
        stack.push_back({f.mask | (1U << f.depth), f.depth + 1, f.black + 1, f.white,
                         f.probability * Rational(f.black, balls)});
    }
    return out;
}

/// P(tau_m <= n) summed directly over enumerated sequences.
inline Rational first_passage_by_enumeration(const UrnConfig& config, std::int64_t target_diff, std::int64_t n)
{
    if (target_diff == config.excess()) return Rational(1);
    Rational total = 0;
    for (const auto& seq : enumerate_sequences(config, n)) {
        std::int64_t s = config.excess();
        for (std::int64_t i = 0; i < n; ++i) {
            s += seq.draws.at(i) == Draw::black ? 1 : -1;
            if (s == target_diff) {
                total += seq.probability;
                break;
            }
        }
    }
    return total;
}

/// P(k black draws in n steps), k = 0..n:
///     C(n, k) * b(b+1)...(b+k-1) * w(w+1)...(w+n-k-1) / (b+w)...(b+w+n-1).
inline std::vector<ExactProbability> marginal_black_distribution(const UrnConfig& config, std::int64_t n)
{
    if (n < 0) throw std::domain_error("marginal_black_distribution: n must be >= 0");
    auto rising = [](std::int64_t base, std::int64_t count) {
        BigInt r = 1;
        for (std::int64_t i = 0; i < count; ++i) r *= base + i;
        return r;
    };
    const BigInt denominator = rising(config.total(), n);
    std::vector<ExactProbability> pmf;
    pmf.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= n; ++k) {
        const BigInt numerator =
            binomial_coefficient(n, k) * rising(config.black(), k) * rising(config.white(), n - k);
        pmf.emplace_back(Rational(numerator, denominator));
    }
    return pmf;
}

} // namespace polya
