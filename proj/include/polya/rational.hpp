#pragma once

// Arbitrary-precision integers and rationals, plus the conversions the rest
// of the library needs: correctly rounded rational -> double, exact
// double -> rational, "num/den" strings and fixed-significance decimals.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polya {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt pow_int(const BigInt& base, std::uint64_t exponent)
{
    BigInt result = 1;
    BigInt b = base;
    while (exponent != 0) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent != 0) b *= b;
    }
    return result;
}

/// Index of the most significant set bit; x must be positive.
inline std::int64_t bit_length(const BigInt& x)
{
    return static_cast<std::int64_t>(boost::multiprecision::msb(x)) + 1;
}

/// Natural logarithm of a positive big integer, accurate to a few ulps even
/// when the integer is far outside the range of double.
inline double log_bigint(const BigInt& x)
{
    if (x <= 0) throw std::domain_error("log_bigint: argument must be positive");
    const std::int64_t bits = bit_length(x);
    if (bits <= 1000) return std::log(static_cast<double>(x));
    const std::int64_t shift = bits - 64;
    const BigInt top = x >> static_cast<unsigned>(shift);
    return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

/// Round-to-nearest-even conversion. Handles numerators and denominators far
/// beyond the double range; results in the subnormal range may be off by one
/// ulp (double rounding).
inline double to_double(const Rational& q)
{
    const BigInt num = abs(numerator_of(q));
    if (num == 0) return 0.0;
    const BigInt den = denominator_of(q);
    const bool negative = numerator_of(q) < 0;

    // Scale so the integer quotient carries 64 or 65 significant bits.
    const std::int64_t shift = 64 - (bit_length(num) - bit_length(den));
    BigInt quotient;
    BigInt remainder;
    if (shift >= 0)
        divide_qr(BigInt(num << static_cast<unsigned>(shift)), den, quotient, remainder);
    else
        divide_qr(num, BigInt(den << static_cast<unsigned>(-shift)), quotient, remainder);

    std::int64_t exponent = -shift;
    bool sticky = remainder != 0;
    if (bit_length(quotient) > 64) {
        sticky = sticky || bit_test(quotient, 0);
        quotient >>= 1;
        ++exponent;
    }
    auto mantissa = quotient.convert_to<std::uint64_t>();
    // The sticky bit sits far below the 53-bit rounding position, so the
    // hardware conversion below rounds exactly as the full quotient would.
    if (sticky) mantissa |= 1U;
    if (exponent > std::numeric_limits<int>::max() / 2) return negative ? -HUGE_VAL : HUGE_VAL;
    if (exponent < std::numeric_limits<int>::min() / 2) return negative ? -0.0 : 0.0;
    const double value = std::ldexp(static_cast<double>(mantissa), static_cast<int>(exponent));
    return negative ? -value : value;
}

/// Exact value of a finite double.
inline Rational to_rational(double x)
{
    if (!std::isfinite(x)) throw std::domain_error("to_rational: value is not finite");
    if (x == 0.0) return Rational(0);
    int exponent = 0;
    const double fraction = std::frexp(x, &exponent);
    const auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
    exponent -= 53;
    Rational r{BigInt(mantissa)};
    if (exponent >= 0)
        r *= Rational(BigInt(1) << exponent);
    else
        r /= Rational(BigInt(1) << -exponent);
    return r;
}

/// "num/den" with the denominator always present ("1/1", "0/1").
inline std::string fraction_string(const Rational& q)
{
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

namespace detail {

inline bool is_integer_literal(std::string_view s)
{
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

} // namespace detail

/// Inverse of fraction_string; also accepts a bare integer.
inline Rational parse_fraction(std::string_view text)
{
    const auto slash = text.find('/');
    const std::string_view num_text = text.substr(0, slash);
    const std::string_view den_text =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!detail::is_integer_literal(num_text) || !detail::is_integer_literal(den_text))
        throw std::invalid_argument("parse_fraction: malformed rational '" + std::string(text) + "'");
    auto strip_plus = [](std::string_view s) {
        return std::string(s.front() == '+' ? s.substr(1) : s);
    };
    const BigInt num(strip_plus(num_text));
    const BigInt den(strip_plus(den_text));
    if (den == 0) throw std::invalid_argument("parse_fraction: zero denominator");
    return Rational(num, den);
}

/// Decimal rendering with `digits` significant digits, round-half-even on the
/// exact value. Plain notation for magnitudes in [1e-5, 1e15), scientific
/// otherwise; trailing zeros are kept so the width is fixed.
inline std::string format_decimal(const Rational& value, int digits = 15)
{
    if (digits < 1) throw std::domain_error("format_decimal: digits must be positive");
    if (value == 0) return "0";
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;

    // Decimal exponent e with 10^e <= magnitude < 10^(e+1).
    const BigInt& n = numerator_of(magnitude);
    const BigInt& d = denominator_of(magnitude);
    auto exponent = static_cast<std::int64_t>(
        std::floor(static_cast<double>(bit_length(n) - bit_length(d)) * std::log10(2.0)));
    auto power_of_ten = [](std::int64_t e) {
        return e >= 0 ? Rational(pow_int(10, static_cast<std::uint64_t>(e)))
                      : Rational(BigInt(1), pow_int(10, static_cast<std::uint64_t>(-e)));
    };
    while (power_of_ten(exponent) > magnitude) --exponent;
    while (power_of_ten(exponent + 1) <= magnitude) ++exponent;

    const Rational scaled = magnitude * power_of_ten(digits - 1 - exponent);
    BigInt quotient;
    BigInt remainder;
    divide_qr(numerator_of(scaled), denominator_of(scaled), quotient, remainder);
    const BigInt twice = remainder * 2;
    const BigInt& den = denominator_of(scaled);
    if (twice > den || (twice == den && bit_test(quotient, 0))) ++quotient;
    if (quotient == pow_int(10, static_cast<std::uint64_t>(digits))) {
        quotient /= 10;
        ++exponent;
    }

    const std::string mantissa = quotient.str();
    std::string out = negative ? "-" : "";
    if (exponent >= -5 && exponent < 15) {
        if (exponent < 0) {
            out += "0.";
            out.append(static_cast<std::size_t>(-exponent - 1), '0');
            out += mantissa;
        } else {
            const auto int_digits = static_cast<std::size_t>(exponent + 1);
            if (int_digits >= mantissa.size()) {
                out += mantissa;
                out.append(int_digits - mantissa.size(), '0');
            } else {
                out += mantissa.substr(0, int_digits);
                out += '.';
                out += mantissa.substr(int_digits);
            }
        }
    } else {
        out += mantissa.substr(0, 1);
        if (mantissa.size() > 1) {
            out += '.';
            out += mantissa.substr(1);
        }
        out += 'e';
        out += exponent < 0 ? '-' : '+';
        const std::string exp_digits = std::to_string(exponent < 0 ? -exponent : exponent);
        if (exp_digits.size() < 2) out += '0';
        out += exp_digits;
    }
    return out;
}

inline std::string format_decimal(double value, int digits = 15)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
    return format_decimal(to_rational(value), digits);
}

} // namespace polya
