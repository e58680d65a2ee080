#pragma once

#include "gdof/qary.hpp"
#include "gdof/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gdof {

/*
 * Symmetric K-user channel on the sequence SNR = Q^(2M/|alpha-1|):
 *
 *     Y[k] = X[k] + Q^(sgn(alpha-1) M) * sum_{j != k} X[j] + Z[k]
 *
 * SNR is carried only as its exact base-Q exponent; alpha near 1 makes the
 * linear value astronomically large.
 */
struct ChannelParams {
    int users = 0;           // K
    std::uint32_t base = 0;  // Q
    int levels = 0;          // M
    Rational alpha;
    Rational snr_log_q;      // log_Q SNR = 2M/|alpha-1|
    int shift = 0;           // +M for alpha > 1, -M for alpha < 1
    int span = 0;            // integer-part positions of each transmit signal
    int window = 0;          // m = max(span, span + shift)

    double snr_log2() const;
};

/// Throws AlphaOneUnsupported, BaseTooSmall (Q < 2K+4) or InvalidParameter.
ChannelParams derive_params(int users, std::uint32_t base, int levels, const Rational& alpha,
                            int span);

/// True iff Q^(2*span) <= SNR, i.e. span <= snr_log_q / 2 (exact).
bool check_power(const ChannelParams& params, int span);

/// Noise-free receiver signals Yhat[k] = X[k] + Q^shift * sum_{j != k} X[j],
/// exact. Propagates CarryOverflow from the superposition.
std::vector<QaryVector> apply_deterministic(const ChannelParams& params,
                                            std::span<const QaryVector> inputs);

/// splitmix64 mix of (seed, trial, stream). Every random draw in the library
/// comes from an engine seeded this way, so results do not depend on how
/// trials are scheduled across workers.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

struct NoiseModel {
    std::uint64_t seed = 0;
    double stddev = 1.0;  // 0 is the noise-free test hook

    /// Z[receiver] for one channel use. Stream receiver + 1 of the trial.
    double sample(std::uint64_t trial, int receiver) const;
};

/// Received signal with its exact and floating parts kept apart.
struct Observation {
    QaryVector noiseless;
    double noise = 0.0;
};

std::vector<Observation> observe_gaussian(const ChannelParams& params,
                                          std::span<const QaryVector> inputs,
                                          const NoiseModel& noise, std::uint64_t trial);

/// Y[k] as plain reals. Loses precision once the signal passes 2^53; the
/// simulators use observe_gaussian + receiver_reduce instead.
std::vector<double> apply_gaussian(const ChannelParams& params,
                                   std::span<const QaryVector> inputs, const NoiseModel& noise,
                                   std::uint64_t trial);

} // namespace gdof
