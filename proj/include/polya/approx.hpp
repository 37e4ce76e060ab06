#pragma once

// Asymptotic companions to the exact answer. With n = b + w - 1 the exact
// probability is 2 P(Bin(n, 1/2) <= w - 1), which the normal approximation
// (continuity corrected) and the Chernoff bound both target directly.

#include "polya/core_exact.hpp"
#include "polya/rational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

namespace polya {

enum class ApproxKind { approximation, upper_bound };

inline std::string_view to_string(ApproxKind kind)
{
    return kind == ApproxKind::approximation ? "approximation" : "upper_bound";
}

struct ApproxResult {
    double value = 0.0;
    ApproxKind kind = ApproxKind::approximation;
    std::optional<ExactProbability> exact_ref;
    std::optional<double> abs_error; ///< value - exact
    std::optional<double> rel_error; ///< |value - exact| / exact

    /// True unless this is an upper bound that falls below the reference.
    /// The comparison is exact: the double is converted to its rational value.
    [[nodiscard]] bool consistent_with_reference() const
    {
        if (!exact_ref || kind != ApproxKind::upper_bound) return true;
        return to_rational(value) >= exact_ref->value();
    }
};

/// Attaches an exact reference value and the resulting errors.
inline ApproxResult with_reference(ApproxResult result, const ExactProbability& exact)
{
    const Rational difference = to_rational(result.value) - exact.value();
    result.abs_error = to_double(difference);
    if (exact.value() != 0) result.rel_error = to_double(abs(difference) / exact.value());
    result.exact_ref = exact;
    return result;
}

/// Phi(z) = erfc(-z / sqrt 2) / 2, with the C library's erfc.
inline double standard_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

/// 2 Phi((w - 1/2 - n/2) / (sqrt(n) / 2)), n = b + w - 1.
inline ApproxResult normal_approximation(const UrnConfig& config)
{
    detail::require_black_majority(config, "normal_approximation");
    const auto n = static_cast<double>(config.total() - 1);
    const double z = (static_cast<double>(config.white()) - 0.5 - n / 2.0) / (std::sqrt(n) / 2.0);
    return ApproxResult{2.0 * standard_normal_cdf(z), ApproxKind::approximation, {}, {}, {}};
}

/// Kullback-Leibler divergence D(a || q) between Bernoulli laws, with
/// 0 ln 0 = 0.
inline double bernoulli_kl(double a, double q)
{
    double d = 0.0;
    if (a > 0.0) d += a * std::log(a / q);
    if (a < 1.0) d += (1.0 - a) * std::log((1.0 - a) / (1.0 - q));
    return d;
}

/// min(1, 2 exp(-n D(a || 1/2))) with a = (w - 1)/n, an upper bound on the
/// equalization probability. At a = 0 this is 2^(1-n), formed exactly.
inline ApproxResult chernoff_bound(const UrnConfig& config)
{
    detail::require_black_majority(config, "chernoff_bound");
    const std::int64_t n = config.total() - 1;
    double value = 0.0;
    if (config.white() == 1) {
        value = std::ldexp(1.0, static_cast<int>(std::max<std::int64_t>(1 - n, -1100)));
    } else {
        const double a = static_cast<double>(config.white() - 1) / static_cast<double>(n);
        value = 2.0 * std::exp(-static_cast<double>(n) * bernoulli_kl(a, 0.5));
    }
    return ApproxResult{std::min(1.0, value), ApproxKind::upper_bound, {}, {}, {}};
}

} // namespace polya
