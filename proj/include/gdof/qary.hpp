#pragma once

#include "gdof/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gdof {

using Digit = std::uint32_t;

/*
 * A nonnegative fixed-point number in base Q, stored as its digit string.
 *
 *     value = sum_i digits[i] * Q^(lowest_exponent + i)
 *
 * The digit string is itself an arbitrary-precision representation, so all
 * arithmetic here is exact. Positions outside the stored range read as 0.
 * Values are immutable once constructed.
 */
class QaryVector {
public:
    explicit QaryVector(std::uint32_t base, std::vector<Digit> digits = {},
                        std::int64_t lowest_exponent = 0);

    /// Digits of x starting at Q^lowest_exponent. x * Q^-lowest_exponent must
    /// be a nonnegative integer; throws InvalidParameter otherwise.
    static QaryVector from_value(const Rational& x, std::uint32_t base,
                                 std::int64_t lowest_exponent = 0);

    std::uint32_t base() const { return base_; }
    std::span<const Digit> digits() const { return digits_; }
    std::int64_t lowest_exponent() const { return lowest_; }
    // One past the most significant stored position.
    std::int64_t end_exponent() const
    {
        return lowest_ + static_cast<std::int64_t>(digits_.size());
    }
    std::size_t size() const { return digits_.size(); }

    Digit digit_at(std::int64_t exponent) const;

    // Equal bases and equal digits at every exponent (padding zeros ignored).
    friend bool operator==(const QaryVector& a, const QaryVector& b);

private:
    std::uint32_t base_;
    std::vector<Digit> digits_;
    std::int64_t lowest_;
};

Rational value_of(const QaryVector& v);

/// Multiplies by Q^s by moving the radix point.
QaryVector shift(const QaryVector& v, std::int64_t s);

/// Position-wise digit sum of vectors in a common base. Throws CarryOverflow
/// when any position sums past Q-1.
QaryVector add_carry_free(std::span<const QaryVector> vs);

/// The receiver front end: m-digit expansion of floor(|y| mod Q^m), digits
/// at exponents 0..m-1. This is the one lossy boundary in the library; y is
/// exact only while |y| < 2^53. Use the overload below for large signals.
QaryVector receiver_reduce(double y, std::uint32_t base, int m);

/// Same reduction applied to noiseless + noise, where the noiseless part is
/// kept exact and only the noise (plus the fraction of the noiseless part)
/// passes through floating point.
QaryVector receiver_reduce(const QaryVector& noiseless, double noise, int m);

} // namespace gdof
