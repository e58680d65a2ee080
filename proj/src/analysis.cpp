#include "gdof/analysis.hpp"

#include "gdof/canceller.hpp"
#include "gdof/error.hpp"
#include "gdof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace gdof {

Rational gdof_theoretical(const Rational& alpha, int users)
{
    if (alpha < 0) {
        throw InvalidParameter("alpha must be nonnegative");
    }
    if (users < 2) {
        throw InvalidParameter("users (K) must be at least 2");
    }
    if (alpha <= Rational(1, 2)) return 1 - alpha;
    if (alpha <= Rational(2, 3)) return alpha;
    if (alpha < 1) return 1 - alpha / 2;
    if (alpha == 1) return Rational(1, users);
    if (alpha <= 2) return alpha / 2;
    return Rational(1);
}

double gdof_theoretical(double alpha, int users)
{
    if (alpha < 0.0 || users < 2) {
        throw InvalidParameter("gdof_theoretical: alpha >= 0 and K >= 2 required");
    }
    if (alpha <= 0.5) return 1.0 - alpha;
    if (alpha <= 2.0 / 3.0) return alpha;
    if (alpha < 1.0) return 1.0 - alpha / 2.0;
    if (alpha == 1.0) return 1.0 / users;
    if (alpha <= 2.0) return alpha / 2.0;
    return 1.0;
}

double empirical_gdof(double rate_qits, int levels, const Rational& alpha)
{
    if (levels < 1 || alpha == 1) {
        throw InvalidParameter("empirical_gdof: M >= 1 and alpha != 1 required");
    }
    const double gap = std::fabs(to_double(alpha) - 1.0);
    return rate_qits / (levels / gap);
}

double noisy_gdof(const Rational& alpha, int users, std::uint32_t base, int levels)
{
    const double log2_snr =
        to_double(Rational(2 * levels) / (1 - alpha)) * std::log2(static_cast<double>(base));
    return noisy_regime_rate_log2(log2_snr, to_double(alpha), users) / (0.5 * log2_snr);
}

double alphabet_penalty(const SignalLayout& layout)
{
    return std::log(static_cast<double>(layout.base) / layout.alphabet.size()) /
           std::log(static_cast<double>(layout.base));
}

namespace {

struct Tally {
    std::vector<std::uint64_t> level_errors;
    std::vector<std::uint64_t> digit_errors;
    std::vector<std::uint64_t> user_errors;
    std::uint64_t flagged = 0;

    Tally(std::size_t levels, std::size_t digits, std::size_t users)
        : level_errors(levels, 0), digit_errors(digits, 0), user_errors(users, 0)
    {
    }

    void merge(const Tally& o)
    {
        for (std::size_t i = 0; i < level_errors.size(); ++i) level_errors[i] += o.level_errors[i];
        for (std::size_t i = 0; i < digit_errors.size(); ++i) digit_errors[i] += o.digit_errors[i];
        for (std::size_t i = 0; i < user_errors.size(); ++i) user_errors[i] += o.user_errors[i];
        flagged += o.flagged;
    }
};

void run_trials(const SignalLayout& layout, const ChannelParams& params,
                const SuccessiveCanceller& canceller, const NoiseModel& noise,
                std::uint64_t first, std::uint64_t last, Tally& tally)
{
    const auto users = static_cast<std::size_t>(params.users);
    const auto n = static_cast<std::size_t>(layout.info_count());
    const auto m = static_cast<std::size_t>(params.window);
    std::uniform_int_distribution<Digit> pick(1, layout.alphabet.max);

    std::vector<Message> msgs(users, Message(n));
    std::vector<QaryVector> inputs;
    std::vector<Digit> reduced(m);
    std::vector<Digit> desired(n);
    std::vector<Digit> interference(n);

    for (std::uint64_t t = first; t < last; ++t) {
        std::mt19937_64 engine(stream_seed(noise.seed, t, 0));
        inputs.clear();
        for (auto& msg : msgs) {
            for (auto& d : msg) {
                d = pick(engine);
            }
            inputs.push_back(encode(layout, msg));
        }
        const auto clean = apply_deterministic(params, inputs);
        for (std::size_t k = 0; k < users; ++k) {
            const double z = noise.sample(t, static_cast<int>(k));
            const QaryVector noisy = receiver_reduce(clean[k], z, params.window);
            for (std::size_t i = 0; i < m; ++i) {
                reduced[i] = noisy.digit_at(static_cast<std::int64_t>(i));
            }
            if (k == 0) {
                for (std::size_t i = 0; i < m; ++i) {
                    if (reduced[i] != clean[k].digit_at(static_cast<std::int64_t>(i))) {
                        ++tally.level_errors[i];
                    }
                }
            }
            if (!canceller.decode_into(reduced, desired, interference)) {
                ++tally.flagged;
            }
            bool wrong = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (desired[v] != msgs[k][v]) {
                    ++tally.digit_errors[v];
                    wrong = true;
                }
            }
            if (wrong) {
                ++tally.user_errors[k];
            }
        }
    }
}

LevelEstimate estimate(int level, std::uint64_t errors, std::uint64_t trials)
{
    const Interval ci = wilson_interval(errors, trials);
    const double rate = trials ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
    return {level, errors, trials, rate, ci.low, ci.high};
}

} // namespace

SimResult simulate(const SignalLayout& layout, const ChannelParams& params,
                   const SimOptions& opts)
{
    if (opts.trials < 1) {
        throw InvalidParameter("trials must be at least 1");
    }
    const SuccessiveCanceller canceller(layout, params);
    const NoiseModel noise{opts.seed, opts.noise_stddev};
    const auto users = static_cast<std::size_t>(params.users);
    const auto n = static_cast<std::size_t>(layout.info_count());
    const auto m = static_cast<std::size_t>(params.window);

    const auto workers = static_cast<std::uint64_t>(
        std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(opts.threads, 1)), 1,
                                  opts.trials));
    std::vector<Tally> partial(workers, Tally(m, n, users));
    {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t first = opts.trials * w / workers;
            const std::uint64_t last = opts.trials * (w + 1) / workers;
            if (workers == 1) {
                run_trials(layout, params, canceller, noise, first, last, partial[w]);
            } else {
                pool.emplace_back([&, first, last, w] {
                    run_trials(layout, params, canceller, noise, first, last, partial[w]);
                });
            }
        }
    }
    Tally total(m, n, users);
    for (const auto& p : partial) {
        total.merge(p);
    }

    SimResult r;
    r.regime = layout.regime;
    r.trials = opts.trials;
    r.seed = opts.seed;
    for (std::size_t i = 0; i < m; ++i) {
        r.profile.levels.push_back(estimate(static_cast<int>(i), total.level_errors[i], opts.trials));
    }
    const std::uint64_t pooled = opts.trials * users;
    const double per_digit = n ? symmetric_rate_qits(layout) / static_cast<double>(n) : 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto e = estimate(static_cast<int>(v), total.digit_errors[v], pooled);
        if (e.rate < opts.threshold) {
            r.rate_measured_qits += per_digit;
        }
        r.info_digit_error.push_back(e);
    }
    for (std::size_t k = 0; k < users; ++k) {
        r.user_message_error.push_back(estimate(static_cast<int>(k), total.user_errors[k], opts.trials));
    }
    r.decodes = pooled;
    r.flagged_decodes = total.flagged;
    r.rate_formula_qits = symmetric_rate_qits(layout);
    r.d_formula = empirical_gdof(r.rate_formula_qits, params.levels, params.alpha);
    r.d_measured = empirical_gdof(r.rate_measured_qits, params.levels, params.alpha);
    r.d_theory = gdof_theoretical(params.alpha, params.users);
    return r;
}

ErrorProfile estimate_error_profile(const ChannelParams& params, const SignalLayout& layout,
                                    std::uint64_t trials, std::uint64_t seed,
                                    double noise_stddev)
{
    SimOptions opts;
    opts.trials = trials;
    opts.seed = seed;
    opts.noise_stddev = noise_stddev;
    return simulate(layout, params, opts).profile;
}

std::vector<GdofPoint> sweep(std::span<const Rational> alphas, const SweepOptions& opts)
{
    std::vector<GdofPoint> points;
    points.reserve(alphas.size());
    for (const auto& alpha : alphas) {
        GdofPoint pt;
        pt.alpha = alpha;
        pt.users = opts.users;
        pt.base = opts.base;
        pt.levels = opts.levels;
        pt.seed = opts.seed;
        try {
            pt.regime = classify(alpha);
            pt.d_theory = gdof_theoretical(alpha, opts.users);
            if (pt.regime == Regime::Noisy) {
                derive_params(opts.users, opts.base, opts.levels, alpha, 1);
                pt.d_empirical = noisy_gdof(alpha, opts.users, opts.base, opts.levels);
                pt.alphabet_penalty = 0.0;
                pt.floor_penalty = to_double(pt.d_theory) - *pt.d_empirical;
            } else if (pt.regime != Regime::AlphaOne) {
                const SignalLayout layout =
                    build_layout(pt.regime, opts.users, opts.base, opts.levels, alpha);
                const ChannelParams params = params_for(layout, alpha);
                SimOptions so;
                so.trials = opts.trials;
                so.seed = opts.seed;
                so.noise_stddev = opts.noise_stddev;
                so.threads = opts.threads;
                const SimResult sim = simulate(layout, params, so);
                pt.trials = opts.trials;
                pt.d_measured = sim.d_measured;
                pt.d_empirical =
                    opts.path == RatePath::Formula ? sim.d_formula : sim.d_measured;
                pt.per_level_error = sim.profile.levels;
                double worst = 0.0;
                for (const auto& e : sim.info_digit_error) {
                    worst = std::max(worst, e.rate);
                }
                pt.max_level_error = worst;
                pt.alphabet_penalty = alphabet_penalty(layout);
                const double log_a = 1.0 - *pt.alphabet_penalty;
                const double floor_gap = to_double(pt.d_theory) * log_a - sim.d_formula;
                // Exact floors give exactly zero; drop the round-off.
                pt.floor_penalty = std::fabs(floor_gap) < 1e-12 ? 0.0 : floor_gap;
            }
        } catch (const Error& e) {
            pt.error = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

} // namespace gdof
