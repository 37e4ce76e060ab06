#pragma once

// Exact equalization probability of a Polya urn and the beta/binomial
// identities behind it.
//
// An urn holding b black and w white balls (b > w) ever reaches equal counts
// with probability 2 F(1/2), F the Beta(b, w) distribution function. For
// integer shapes F is a binomial tail,
//
//     F(x) = sum_{j=b}^{n} C(n, j) x^j (1-x)^(n-j),   n = b + w - 1,
//
// which gives two explicit sums at x = 1/2:
//
//     2^-(n-1) sum_{j<w} C(n, j)   and   1 - 2^-n sum_{j=w}^{b-1} C(n, j).

#include "polya/rational.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polya {

/// Initial urn contents. Both counts are at least one.
class UrnConfig {
public:
    UrnConfig(std::int64_t black, std::int64_t white) : black_(black), white_(white)
    {
        if (black < 1 || white < 1)
            throw std::domain_error("UrnConfig: black and white counts must be >= 1");
    }

    [[nodiscard]] std::int64_t black() const noexcept { return black_; }
    [[nodiscard]] std::int64_t white() const noexcept { return white_; }
    [[nodiscard]] std::int64_t total() const noexcept { return black_ + white_; }
    /// S_0 = b - w.
    [[nodiscard]] std::int64_t excess() const noexcept { return black_ - white_; }
    [[nodiscard]] UrnConfig swapped() const noexcept { return {white_, black_}; }

    friend bool operator==(const UrnConfig&, const UrnConfig&) = default;

private:
    std::int64_t black_;
    std::int64_t white_;
};

/// Integer shape parameters of Beta(b, w).
class BetaParams {
public:
    BetaParams(std::int64_t b, std::int64_t w) : b_(b), w_(w)
    {
        if (b < 1 || w < 1) throw std::domain_error("BetaParams: shapes must be positive integers");
    }
    explicit BetaParams(const UrnConfig& config) : BetaParams(config.black(), config.white()) {}

    [[nodiscard]] std::int64_t b() const noexcept { return b_; }
    [[nodiscard]] std::int64_t w() const noexcept { return w_; }
    /// Number of uniforms whose b-th order statistic is Beta(b, w).
    [[nodiscard]] std::int64_t trials() const noexcept { return b_ + w_ - 1; }

    friend bool operator==(const BetaParams&, const BetaParams&) = default;

private:
    std::int64_t b_;
    std::int64_t w_;
};

/// A rational in [0, 1]. Always in lowest terms, so == is structural.
class ExactProbability {
public:
    ExactProbability() = default;
    explicit ExactProbability(Rational value) : value_(std::move(value))
    {
        if (value_ < 0 || value_ > 1)
            throw std::domain_error("ExactProbability: value " + fraction_string(value_) +
                                    " outside [0, 1]");
    }

    [[nodiscard]] const Rational& value() const noexcept { return value_; }
    [[nodiscard]] double to_double() const { return polya::to_double(value_); }
    [[nodiscard]] std::string fraction() const { return fraction_string(value_); }
    [[nodiscard]] std::string decimal(int digits = 15) const { return format_decimal(value_, digits); }

    friend bool operator==(const ExactProbability& a, const ExactProbability& b)
    {
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const ExactProbability& a, const ExactProbability& b)
    {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    Rational value_{0};
};

inline BigInt binomial_coefficient(std::int64_t n, std::int64_t k)
{
    if (n < 0 || k < 0) throw std::domain_error("binomial_coefficient: arguments must be nonnegative");
    if (k > n) throw std::domain_error("binomial_coefficient: k > n");
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        result *= n - i;
        result /= i + 1;
    }
    return result;
}

namespace detail {

/// Row C(n, 0..n) built incrementally.
inline std::vector<BigInt> binomial_row(std::int64_t n)
{
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    for (std::int64_t j = 0; j < n; ++j)
        row[static_cast<std::size_t>(j) + 1] = row[static_cast<std::size_t>(j)] * (n - j) / (j + 1);
    return row;
}

inline void require_unit_interval(const Rational& x, const char* who)
{
    if (x < 0 || x > 1) throw std::domain_error(std::string(who) + ": x outside [0, 1]");
}

} // namespace detail

/// Beta(b, w) density at p in (0, 1). The normalizer (b+w-1)!/((b-1)!(w-1)!)
/// is formed exactly and the product is taken in log space.
inline double beta_density(const BetaParams& params, double p)
{
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("beta_density: p must lie in (0, 1)");
    const std::int64_t b = params.b();
    const std::int64_t w = params.w();
    const BigInt normalizer = BigInt(b + w - 1) * binomial_coefficient(b + w - 2, b - 1);
    const double log_density = log_bigint(normalizer) + static_cast<double>(b - 1) * std::log(p) +
                               static_cast<double>(w - 1) * std::log1p(-p);
    return std::exp(log_density);
}

/// F(x) for Beta(b, w), exact: the probability that at least b of b+w-1
/// independent Bernoulli(x) trials succeed.
inline ExactProbability beta_cdf_rational(const BetaParams& params, const Rational& x)
{
    detail::require_unit_interval(x, "beta_cdf_rational");
    const std::int64_t n = params.trials();
    const BigInt p = numerator_of(x);
    const BigInt q = denominator_of(x);
    const BigInt complement = q - p;

    // sum_j C(n, j) p^j (q-p)^(n-j) / q^n over j = b..n.
    std::vector<BigInt> complement_powers(static_cast<std::size_t>(n - params.b()) + 1);
    complement_powers[0] = 1;
    for (std::size_t i = 1; i < complement_powers.size(); ++i)
        complement_powers[i] = complement_powers[i - 1] * complement;

    BigInt coefficient = binomial_coefficient(n, params.b());
    BigInt success_power = pow_int(p, static_cast<std::uint64_t>(params.b()));
    BigInt sum = 0;
    for (std::int64_t j = params.b(); j <= n; ++j) {
        sum += coefficient * success_power * complement_powers[static_cast<std::size_t>(n - j)];
        coefficient = coefficient * (n - j) / (j + 1);
        success_power *= p;
    }
    return ExactProbability(Rational(sum, pow_int(q, static_cast<std::uint64_t>(n))));
}

/// Floating-point F(x). Each binomial term is evaluated in log space from
/// the exact coefficient, and terms are summed smallest first.
inline double beta_cdf_real(const BetaParams& params, double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_cdf_real: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const std::int64_t n = params.trials();
    const double log_x = std::log(x);
    const double log_1mx = std::log1p(-x);

    const std::vector<BigInt> row = detail::binomial_row(n);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n - params.b() + 1));
    for (std::int64_t j = params.b(); j <= n; ++j) {
        const double log_term = log_bigint(row[static_cast<std::size_t>(j)]) +
                                static_cast<double>(j) * log_x +
                                static_cast<double>(n - j) * log_1mx;
        terms.push_back(std::exp(log_term));
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return std::min(sum, 1.0);
}

/// Probability that the urn ever holds equally many black and white balls.
/// b == w gives 1 (equal at the start); b < w is handled by swapping colors.
inline ExactProbability equalization_probability(const UrnConfig& config)
{
    if (config.black() == config.white()) return ExactProbability(Rational(1));
    const UrnConfig oriented = config.black() > config.white() ? config : config.swapped();
    const ExactProbability half_cdf = beta_cdf_rational(BetaParams(oriented), Rational(1, 2));
    return ExactProbability(half_cdf.value() * 2);
}

namespace detail {

inline void require_black_majority(const UrnConfig& config, const char* who)
{
    if (config.black() <= config.white())
        throw std::domain_error(std::string(who) + ": requires b > w");
}

} // namespace detail

/// 2^-(b+w-2) * sum_{j=0}^{w-1} C(b+w-1, j): at most w-1 heads in b+w-1 fair
/// tosses, doubled.
inline ExactProbability equalization_probability_binomial(const UrnConfig& config)
{
    detail::require_black_majority(config, "equalization_probability_binomial");
    const std::int64_t n = config.total() - 1;
    BigInt coefficient = 1;
    BigInt sum = 0;
    for (std::int64_t j = 0; j < config.white(); ++j) {
        sum += coefficient;
        coefficient = coefficient * (n - j) / (j + 1);
    }
    return ExactProbability(Rational(sum, BigInt(1) << static_cast<unsigned>(n - 1)));
}

/// 1 - 2^-(b+w-1) * sum_{j=w}^{b-1} C(b+w-1, j).
inline ExactProbability equalization_probability_complement(const UrnConfig& config)
{
    detail::require_black_majority(config, "equalization_probability_complement");
    const std::int64_t n = config.total() - 1;
    BigInt coefficient = binomial_coefficient(n, config.white());
    BigInt sum = 0;
    for (std::int64_t j = config.white(); j < config.black(); ++j) {
        sum += coefficient;
        coefficient = coefficient * (n - j) / (j + 1);
    }
    return ExactProbability(1 - Rational(sum, BigInt(1) << static_cast<unsigned>(n)));
}

} // namespace polya
