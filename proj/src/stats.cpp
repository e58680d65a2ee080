#include "gdof/stats.hpp"

#include <algorithm>
#include <cmath>

namespace gdof {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double gaussian_tail(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

} // namespace gdof
