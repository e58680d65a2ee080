#include "gdof/qary.hpp"

#include "gdof/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gdof {

namespace {

void check_base(std::uint32_t base)
{
    if (base < 3) {
        throw InvalidParameter("base must be at least 3, got " + std::to_string(base));
    }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

// Adds a small signed integer to an m-digit register modulo Q^m.
void add_small(std::vector<Digit>& reg, std::int64_t c, std::uint32_t base)
{
    const auto q = static_cast<std::int64_t>(base);
    for (auto& d : reg) {
        if (c == 0) {
            return;
        }
        const std::int64_t s = static_cast<std::int64_t>(d) + c;
        const std::int64_t carry = floor_div(s, q);
        d = static_cast<Digit>(s - carry * q);
        c = carry;
    }
}

std::vector<Digit> digits_of_u64(std::uint64_t v, std::uint32_t base, int m)
{
    std::vector<Digit> out(static_cast<std::size_t>(m), 0);
    for (auto& d : out) {
        d = static_cast<Digit>(v % base);
        v /= base;
    }
    return out;
}

// Largest J with Q^J <= 2^52, so fractions truncated to J digits divide
// exactly and stay strictly below 1.0.
int fraction_digits(std::uint32_t base)
{
    int j = 0;
    double p = 1.0;
    while (p * base <= 4503599627370496.0) {
        p *= base;
        ++j;
    }
    return j;
}

} // namespace

QaryVector::QaryVector(std::uint32_t base, std::vector<Digit> digits,
                       std::int64_t lowest_exponent)
    : base_(base), digits_(std::move(digits)), lowest_(lowest_exponent)
{
    check_base(base_);
    for (Digit d : digits_) {
        if (d >= base_) {
            throw InvalidParameter("digit " + std::to_string(d) + " out of range for base " +
                                   std::to_string(base_));
        }
    }
}

QaryVector QaryVector::from_value(const Rational& x, std::uint32_t base,
                                  std::int64_t lowest_exponent)
{
    check_base(base);
    if (x < 0) {
        throw InvalidParameter("negative value has no qit representation");
    }
    Rational scaled = x;
    if (lowest_exponent >= 0) {
        scaled /= Rational(pow_big(base, static_cast<unsigned>(lowest_exponent)));
    } else {
        scaled *= Rational(pow_big(base, static_cast<unsigned>(-lowest_exponent)));
    }
    if (boost::multiprecision::denominator(scaled) != 1) {
        throw InvalidParameter("value " + format_exact(x) +
                               " is not representable at the requested exponent");
    }
    BigInt n = boost::multiprecision::numerator(scaled);
    std::vector<Digit> digits;
    while (n > 0) {
        digits.push_back(static_cast<Digit>(n % base));
        n /= base;
    }
    return QaryVector(base, std::move(digits), lowest_exponent);
}

Digit QaryVector::digit_at(std::int64_t exponent) const
{
    if (exponent < lowest_ || exponent >= end_exponent()) {
        return 0;
    }
    return digits_[static_cast<std::size_t>(exponent - lowest_)];
}

bool operator==(const QaryVector& a, const QaryVector& b)
{
    if (a.base_ != b.base_) {
        return false;
    }
    const auto lo = std::min(a.lowest_, b.lowest_);
    const auto hi = std::max(a.end_exponent(), b.end_exponent());
    for (auto e = lo; e < hi; ++e) {
        if (a.digit_at(e) != b.digit_at(e)) {
            return false;
        }
    }
    return true;
}

Rational value_of(const QaryVector& v)
{
    BigInt acc = 0;
    const auto digits = v.digits();
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        acc = acc * v.base() + *it;
    }
    Rational value(acc);
    const auto e = v.lowest_exponent();
    if (e > 0) {
        value *= Rational(pow_big(v.base(), static_cast<unsigned>(e)));
    } else if (e < 0) {
        value /= Rational(pow_big(v.base(), static_cast<unsigned>(-e)));
    }
    return value;
}

QaryVector shift(const QaryVector& v, std::int64_t s)
{
    const auto d = v.digits();
    return QaryVector(v.base(), std::vector<Digit>(d.begin(), d.end()), v.lowest_exponent() + s);
}

QaryVector add_carry_free(std::span<const QaryVector> vs)
{
    if (vs.empty()) {
        throw InvalidParameter("add_carry_free needs at least one vector");
    }
    const std::uint32_t base = vs.front().base();
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& v : vs) {
        if (v.base() != base) {
            throw InvalidParameter("add_carry_free: mixed bases");
        }
        if (v.size() == 0) {
            continue;
        }
        lo = std::min(lo, v.lowest_exponent());
        hi = std::max(hi, v.end_exponent());
    }
    if (lo > hi) {
        return QaryVector(base);
    }

    std::vector<std::uint64_t> sums(static_cast<std::size_t>(hi - lo), 0);
    for (const auto& v : vs) {
        const auto d = v.digits();
        const auto off = static_cast<std::size_t>(v.lowest_exponent() - lo);
        for (std::size_t i = 0; i < d.size(); ++i) {
            sums[off + i] += d[i];
        }
    }
    std::vector<Digit> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (sums[i] >= base) {
            throw CarryOverflow("digit sum " + std::to_string(sums[i]) + " at exponent " +
                                std::to_string(lo + static_cast<std::int64_t>(i)) +
                                " exceeds Q-1 = " + std::to_string(base - 1));
        }
        out[i] = static_cast<Digit>(sums[i]);
    }
    return QaryVector(base, std::move(out), lo);
}

QaryVector receiver_reduce(double y, std::uint32_t base, int m)
{
    check_base(base);
    if (m < 1) {
        throw InvalidParameter("receiver_reduce: m must be at least 1");
    }
    if (!std::isfinite(y)) {
        throw InvalidParameter("receiver_reduce: non-finite input");
    }
    double a = std::floor(std::fabs(y));
    std::vector<Digit> digits(static_cast<std::size_t>(m), 0);
    const double q = base;
    for (auto& d : digits) {
        if (a == 0.0) {
            break;
        }
        const double r = std::fmod(a, q);
        d = static_cast<Digit>(r);
        a = (a - r) / q;
    }
    return QaryVector(base, std::move(digits), 0);
}

QaryVector receiver_reduce(const QaryVector& noiseless, double noise, int m)
{
    if (m < 1) {
        throw InvalidParameter("receiver_reduce: m must be at least 1");
    }
    if (!std::isfinite(noise)) {
        throw InvalidParameter("receiver_reduce: non-finite noise");
    }
    const std::uint32_t base = noiseless.base();

    // Fractional part of the noiseless signal, truncated to J digits.
    double frac = 0.0;
    if (noiseless.lowest_exponent() < 0) {
        const int j = fraction_digits(base);
        std::uint64_t scaled = 0;
        double denom = 1.0;
        for (int k = 1; k <= j; ++k) {
            scaled = scaled * base + noiseless.digit_at(-k);
            denom *= base;
        }
        frac = static_cast<double>(scaled) / denom;
    }
    const double t = frac + noise;
    if (std::fabs(t) > 1.0e9) {
        throw InvalidParameter("receiver_reduce: noise magnitude too large for the exact path");
    }
    const auto carry = static_cast<std::int64_t>(std::floor(t));

    // Integer part, if small enough to matter for the sign test.
    bool small = true;
    std::uint64_t integer = 0;
    for (auto e = std::max<std::int64_t>(noiseless.end_exponent(), 0) - 1; e >= 0; --e) {
        const Digit d = noiseless.digit_at(e);
        if (integer > (std::uint64_t{1} << 62) / base) {
            small = false;
            break;
        }
        integer = integer * base + d;
    }

    if (small && static_cast<std::int64_t>(integer) + carry < 0) {
        // |Y| = -(I + t): floor(|Y|) = -I - ceil(t).
        const auto c = static_cast<std::int64_t>(std::ceil(t));
        const std::int64_t v = -static_cast<std::int64_t>(integer) - c;
        return QaryVector(base, digits_of_u64(static_cast<std::uint64_t>(v), base, m), 0);
    }

    std::vector<Digit> reg(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        reg[static_cast<std::size_t>(i)] = noiseless.digit_at(i);
    }
    add_small(reg, carry, base);
    return QaryVector(base, std::move(reg), 0);
}

} // namespace gdof
