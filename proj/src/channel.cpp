#include "gdof/channel.hpp"

#include "gdof/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace gdof {

double ChannelParams::snr_log2() const
{
    return to_double(snr_log_q) * std::log2(static_cast<double>(base));
}

ChannelParams derive_params(int users, std::uint32_t base, int levels, const Rational& alpha,
                            int span)
{
    if (users < 2) {
        throw InvalidParameter("users (K) must be at least 2, got " + std::to_string(users));
    }
    if (levels < 1) {
        throw InvalidParameter("levels (M) must be at least 1, got " + std::to_string(levels));
    }
    if (alpha < 0) {
        throw InvalidParameter("alpha must be nonnegative, got " + format_exact(alpha));
    }
    if (alpha == 1) {
        throw AlphaOneUnsupported(
            "alpha = 1 has no layered scheme; its GDOF is the closed form 1/K");
    }
    const auto min_base = static_cast<std::uint32_t>(2 * users + 4);
    if (base < min_base) {
        throw BaseTooSmall("base (Q) must be at least 2K+4 = " + std::to_string(min_base) +
                           ", got " + std::to_string(base));
    }
    if (span < 0) {
        throw InvalidParameter("span must be nonnegative");
    }

    ChannelParams p;
    p.users = users;
    p.base = base;
    p.levels = levels;
    p.alpha = alpha;
    const Rational gap = alpha > 1 ? Rational(alpha - 1) : Rational(1 - alpha);
    p.snr_log_q = Rational(2 * levels) / gap;
    p.shift = alpha > 1 ? levels : -levels;
    p.span = span;
    p.window = std::max(span, span + p.shift);
    if (p.window < 1) {
        throw InvalidParameter("receiver window is empty for span " + std::to_string(span));
    }
    return p;
}

bool check_power(const ChannelParams& params, int span)
{
    return Rational(2 * span) <= params.snr_log_q;
}

std::vector<QaryVector> apply_deterministic(const ChannelParams& params,
                                            std::span<const QaryVector> inputs)
{
    const auto k_users = static_cast<std::size_t>(params.users);
    if (inputs.size() != k_users) {
        throw InvalidParameter("apply_deterministic: expected " + std::to_string(k_users) +
                               " inputs, got " + std::to_string(inputs.size()));
    }
    std::vector<QaryVector> shifted;
    shifted.reserve(k_users);
    for (const auto& x : inputs) {
        shifted.push_back(shift(x, params.shift));
    }

    std::vector<QaryVector> out;
    out.reserve(k_users);
    std::vector<QaryVector> terms;
    terms.reserve(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        terms.clear();
        terms.push_back(inputs[k]);
        for (std::size_t j = 0; j < k_users; ++j) {
            if (j != k) {
                terms.push_back(shifted[j]);
            }
        }
        out.push_back(add_carry_free(terms));
    }
    return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ trial) ^ stream);
}

double NoiseModel::sample(std::uint64_t trial, int receiver) const
{
    if (stddev == 0.0) {
        return 0.0;
    }
    std::mt19937_64 engine(stream_seed(seed, trial, static_cast<std::uint64_t>(receiver) + 1));
    std::normal_distribution<double> normal(0.0, stddev);
    return normal(engine);
}

std::vector<Observation> observe_gaussian(const ChannelParams& params,
                                          std::span<const QaryVector> inputs,
                                          const NoiseModel& noise, std::uint64_t trial)
{
    auto clean = apply_deterministic(params, inputs);
    std::vector<Observation> out;
    out.reserve(clean.size());
    for (std::size_t k = 0; k < clean.size(); ++k) {
        out.push_back({std::move(clean[k]), noise.sample(trial, static_cast<int>(k))});
    }
    return out;
}

std::vector<double> apply_gaussian(const ChannelParams& params,
                                   std::span<const QaryVector> inputs, const NoiseModel& noise,
                                   std::uint64_t trial)
{
    std::vector<double> out;
    for (const auto& obs : observe_gaussian(params, inputs, noise, trial)) {
        out.push_back(to_double(value_of(obs.noiseless)) + obs.noise);
    }
    return out;
}

} // namespace gdof
