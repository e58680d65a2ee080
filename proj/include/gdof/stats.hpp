#pragma once

#include <cstdint>

namespace gdof {

// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

/// P(Z > x) for a standard normal Z.
double gaussian_tail(double x);

} // namespace gdof
