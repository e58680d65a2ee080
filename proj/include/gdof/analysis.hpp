#pragma once

#include "gdof/channel.hpp"
#include "gdof/rational.hpp"
#include "gdof/schemes.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gdof {

/// Per-user GDOF d(alpha) of the symmetric K-user channel. The outer bound and
/// the achievable value coincide, so this one function is both.
///
///   1 - alpha     0 <= alpha <= 1/2
///   alpha         1/2 <= alpha <= 2/3
///   1 - alpha/2   2/3 <= alpha < 1
///   1/K           alpha = 1
///   alpha/2       1 < alpha <= 2
///   1             alpha >= 2
Rational gdof_theoretical(const Rational& alpha, int users);
double gdof_theoretical(double alpha, int users);

/// rate / (1/2 log_Q SNR) with 1/2 log_Q SNR = M/|alpha-1|.
double empirical_gdof(double rate_qits, int levels, const Rational& alpha);

/// Formula-path GDOF of the noisy-interference scheme on the SNR sequence
/// SNR = Q^(2M/(1-alpha)).
double noisy_gdof(const Rational& alpha, int users, std::uint32_t base, int levels);

/// log_Q(Q / |alphabet|): how far the alphabet keeps the rate below log_Q Q.
double alphabet_penalty(const SignalLayout& layout);

struct LevelEstimate {
    int level = 0;
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

// Per-level mismatch rates between the noise-free composite and the
// reduced noisy signal, levels 0..m-1.
struct ErrorProfile {
    std::vector<LevelEstimate> levels;
};

struct SimOptions {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double noise_stddev = 1.0;
    double threshold = 1e-3;  // measured-rate cut-off per info digit
    int threads = 1;
};

struct SimResult {
    Regime regime = Regime::VeryStrong;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    ErrorProfile profile;                          // receiver 0
    std::vector<LevelEstimate> info_digit_error;   // level = info index, pooled over receivers
    std::vector<LevelEstimate> user_message_error; // level = user index
    std::uint64_t decodes = 0;
    std::uint64_t flagged_decodes = 0;
    double rate_formula_qits = 0.0;
    double rate_measured_qits = 0.0;
    double d_formula = 0.0;
    double d_measured = 0.0;
    Rational d_theory;
};

/// Monte-Carlo run of encode -> Gaussian channel -> reduce -> decode for all
/// K users. Trials are independent and seeded per (seed, trial, stream), so
/// the result does not depend on opts.threads.
SimResult simulate(const SignalLayout& layout, const ChannelParams& params,
                   const SimOptions& opts);

ErrorProfile estimate_error_profile(const ChannelParams& params, const SignalLayout& layout,
                                    std::uint64_t trials, std::uint64_t seed,
                                    double noise_stddev = 1.0);

enum class RatePath { Formula, Measured };

struct GdofPoint {
    Rational alpha;
    Regime regime = Regime::Noisy;
    Rational d_theory;
    std::optional<double> d_empirical;
    std::optional<double> d_measured;
    int users = 0;
    std::uint32_t base = 0;
    int levels = 0;
    std::uint64_t trials = 0;  // Monte-Carlo trials actually run
    std::uint64_t seed = 0;
    std::vector<LevelEstimate> per_level_error;
    std::optional<double> max_level_error;    // worst decoded info-digit error rate
    std::optional<double> alphabet_penalty;
    std::optional<double> floor_penalty;      // d_theory*log_Q|A| - formula-path d
    std::string error;
};

struct SweepOptions {
    int users = 3;
    std::uint32_t base = 64;
    int levels = 8;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double noise_stddev = 1.0;
    RatePath path = RatePath::Formula;
    int threads = 1;
};

/// One GdofPoint per alpha. Per-point failures land in GdofPoint::error.
std::vector<GdofPoint> sweep(std::span<const Rational> alphas, const SweepOptions& opts);

} // namespace gdof
