#include "gdof/rational.hpp"

#include "gdof/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace gdof {

namespace {

Rational parse_decimal(std::string_view text, std::string_view whole)
{
    if (text.empty()) {
        throw InvalidParameter("empty number in '" + std::string(whole) + "'");
    }
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    BigInt numerator = 0;
    BigInt denominator = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw InvalidParameter("not a decimal number: '" + std::string(whole) + "'");
        }
        seen_digit = true;
        numerator = numerator * 10 + (c - '0');
        if (seen_point) {
            denominator *= 10;
        }
    }
    if (!seen_digit) {
        throw InvalidParameter("not a decimal number: '" + std::string(whole) + "'");
    }
    Rational value(numerator, denominator);
    return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const std::string_view whole = trim(text);
    const auto slash = whole.find('/');
    if (slash == std::string_view::npos) {
        return parse_decimal(whole, whole);
    }
    const Rational num = parse_decimal(trim(whole.substr(0, slash)), whole);
    const Rational den = parse_decimal(trim(whole.substr(slash + 1)), whole);
    if (den == 0) {
        throw InvalidParameter("zero denominator in '" + std::string(whole) + "'");
    }
    return num / den;
}

std::string format_exact(const Rational& value)
{
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    const bool negative = num < 0;
    if (negative) {
        num = -num;
    }

    BigInt rest = den;
    unsigned twos = 0;
    unsigned fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    std::string out = negative ? "-" : "";
    if (rest != 1) {
        return out + num.str() + "/" + den.str();
    }

    const unsigned places = std::max(twos, fives);
    const BigInt scaled = num * pow_big(10, places) / den;
    std::string digits = scaled.str();
    if (places == 0) {
        return out + digits;
    }
    if (digits.size() <= places) {
        digits.insert(0, places + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - places, 1, '.');
    return out + digits;
}

std::string format_real(double value)
{
    if (std::isnan(value)) {
        return "";
    }
    if (value == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double to_double(const Rational& value)
{
    return value.convert_to<double>();
}

BigInt floor_of(const Rational& value)
{
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    BigInt q = num / den;
    if (num % den != 0 && num < 0) {
        q -= 1;
    }
    return q;
}

BigInt pow_big(unsigned base, unsigned exponent)
{
    return boost::multiprecision::pow(BigInt(base), exponent);
}

} // namespace gdof
