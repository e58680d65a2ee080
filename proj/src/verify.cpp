#include "gdof/verify.hpp"

#include "gdof/canceller.hpp"
#include "gdof/error.hpp"

#include <limits>

namespace gdof {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
// Full enumeration goes through the general QaryVector pipeline and is kept
// for runs it can finish quickly; bigger runs use the reduced loop.
constexpr std::uint64_t kFullPreferred = std::uint64_t{1} << 21;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > kSaturated / a) {
        return kSaturated;
    }
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t a, std::size_t n)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < n; ++i) {
        r = sat_mul(r, a);
    }
    return r;
}

// Info variables of the interference sum that reach the receive window.
std::vector<char> visible_interference(const SignalLayout& layout, const ChannelParams& params)
{
    std::vector<char> visible(static_cast<std::size_t>(layout.info_count()), 0);
    for (int p = 0; p < layout.span; ++p) {
        const int var = layout.slot_var[static_cast<std::size_t>(p)];
        const int level = p + params.shift;
        if (var >= 0 && level >= 0 && level < params.window) {
            visible[static_cast<std::size_t>(var)] = 1;
        }
    }
    return visible;
}

// Odometer step over digits in [lo, hi]; false once it wraps around.
bool advance(std::vector<Digit>& v, Digit lo, Digit hi)
{
    for (auto& d : v) {
        if (d < hi) {
            ++d;
            return true;
        }
        d = lo;
    }
    return false;
}

bool advance(std::vector<Digit>& v, const std::vector<Digit>& lo, const std::vector<Digit>& hi)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < hi[i]) {
            ++v[i];
            return true;
        }
        v[i] = lo[i];
    }
    return false;
}

VerifyReport run_full(const SignalLayout& layout, const SignalLayout& encoder,
                      const ChannelParams& params, const VerifyOptions& opts)
{
    const SuccessiveCanceller canceller(layout, params);
    const auto users = static_cast<std::size_t>(params.users);
    const auto n = static_cast<std::size_t>(layout.info_count());
    const auto m = static_cast<std::size_t>(params.window);

    VerifyReport report;
    report.mode = VerifyMode::Full;
    std::vector<Digit> all(users * n, 1);
    std::vector<Digit> reduced(m);
    Message decoded(n);
    std::vector<Digit> interference(n);

    do {
        std::vector<Message> msgs(users);
        std::vector<QaryVector> inputs;
        for (std::size_t k = 0; k < users; ++k) {
            msgs[k].assign(all.begin() + static_cast<std::ptrdiff_t>(k * n),
                           all.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
            inputs.push_back(encode(encoder, msgs[k]));
        }
        std::vector<QaryVector> clean;
        std::string overflow;
        try {
            clean = apply_deterministic(params, inputs);
        } catch (const CarryOverflow& e) {
            overflow = e.what();
        }
        for (std::size_t k = 0; k < users; ++k) {
            ++report.evaluations;
            std::string reason = overflow;
            if (reason.empty()) {
                const QaryVector r = receiver_reduce(clean[k], 0.0, params.window);
                for (std::size_t i = 0; i < m; ++i) {
                    reduced[i] = r.digit_at(static_cast<std::int64_t>(i));
                }
                canceller.decode_into(reduced, decoded, interference);
                if (decoded != msgs[k]) {
                    reason = "decoded message differs";
                }
            }
            if (reason.empty()) {
                continue;
            }
            ++report.failures;
            if (report.counterexamples.size() < opts.max_counterexamples) {
                Counterexample ce;
                ce.receiver = static_cast<int>(k);
                ce.messages = msgs;
                ce.desired = msgs[k];
                ce.reason = reason;
                if (overflow.empty()) {
                    ce.reduced = reduced;
                    ce.decoded = decoded;
                    ce.trace = canceller.trace(reduced);
                }
                report.counterexamples.push_back(std::move(ce));
            }
            if (!overflow.empty()) {
                report.evaluations += users - 1 - k;
                break;
            }
        }
    } while (advance(all, 1, layout.alphabet.max));
    return report;
}

VerifyReport run_reduced(const SignalLayout& layout, const SignalLayout& encoder,
                         const ChannelParams& params, const VerifyOptions& opts)
{
    const SuccessiveCanceller canceller(layout, params);
    const auto n = static_cast<std::size_t>(layout.info_count());
    const auto m = static_cast<std::size_t>(params.window);
    const auto span = static_cast<std::size_t>(encoder.span);
    const auto others = static_cast<Digit>(params.users - 1);
    const Digit a = layout.alphabet.max;
    const Digit q = layout.base;

    const auto visible = visible_interference(encoder, params);
    std::vector<Digit> lo(n, others);
    std::vector<Digit> hi(n, others);
    for (std::size_t v = 0; v < n; ++v) {
        if (visible[v]) {
            hi[v] = others * a;
        }
    }

    // Receiver level -> slot variable on each side, -1 for a known zero.
    std::vector<int> x_var(m, -1);
    std::vector<int> s_var(m, -1);
    for (std::size_t p = 0; p < m; ++p) {
        if (p < span) {
            x_var[p] = encoder.slot_var[p];
        }
        const auto sp = static_cast<std::ptrdiff_t>(p) - params.shift;
        if (sp >= 0 && static_cast<std::size_t>(sp) < span) {
            s_var[p] = encoder.slot_var[static_cast<std::size_t>(sp)];
        }
    }

    VerifyReport report;
    report.mode = VerifyMode::Reduced;
    std::vector<Digit> x(n, 1);
    std::vector<Digit> s = lo;
    std::vector<Digit> reduced(m);
    Message decoded(n);
    std::vector<Digit> interference(n);

    do {
        do {
            ++report.evaluations;
            bool overflow = false;
            for (std::size_t p = 0; p < m; ++p) {
                const Digit d = (x_var[p] >= 0 ? x[static_cast<std::size_t>(x_var[p])] : 0) +
                                (s_var[p] >= 0 ? s[static_cast<std::size_t>(s_var[p])] : 0);
                overflow = overflow || d >= q;
                reduced[p] = d % q;
            }
            if (!overflow) {
                canceller.decode_into(reduced, decoded, interference);
                if (decoded == x) {
                    continue;
                }
            }
            ++report.failures;
            if (report.counterexamples.size() < opts.max_counterexamples) {
                Counterexample ce;
                ce.desired = x;
                ce.interference_sum = s;
                ce.reduced = reduced;
                ce.reason = overflow ? "digit sum reached the base (carry)"
                                     : "decoded message differs";
                if (!overflow) {
                    ce.decoded = decoded;
                    ce.trace = canceller.trace(reduced);
                }
                report.counterexamples.push_back(std::move(ce));
            }
        } while (advance(s, lo, hi));
    } while (advance(x, 1, a));
    return report;
}

} // namespace

std::string_view to_string(VerifyMode mode)
{
    return mode == VerifyMode::Full ? "full" : "reduced";
}

VerifyPlan plan_verification(const SignalLayout& layout, const ChannelParams& params)
{
    const auto n = static_cast<std::size_t>(layout.info_count());
    const std::uint64_t a = layout.alphabet.max;
    VerifyPlan plan;
    plan.full = sat_mul(sat_pow(a, n * static_cast<std::size_t>(params.users)),
                        static_cast<std::uint64_t>(params.users));
    const std::uint64_t sum_values = static_cast<std::uint64_t>(params.users - 1) * (a - 1) + 1;
    std::size_t shown = 0;
    for (const char v : visible_interference(layout, params)) {
        shown += v ? 1 : 0;
    }
    plan.reduced = sat_mul(sat_pow(a, n), sat_pow(sum_values, shown));
    return plan;
}

VerifyReport verify_round_trip(const SignalLayout& layout, const ChannelParams& params,
                               const VerifyOptions& opts)
{
    const SignalLayout encoder = opts.corrupt_copy_map ? corrupt_copy_map(layout) : layout;
    const VerifyPlan plan = plan_verification(encoder, params);
    if (plan.full <= opts.cap && plan.full <= kFullPreferred) {
        return run_full(layout, encoder, params, opts);
    }
    if (plan.reduced <= opts.cap) {
        return run_reduced(layout, encoder, params, opts);
    }
    throw CapExceeded("exhaustive check needs " +
                      (plan.reduced == kSaturated ? std::string("more than 2^64")
                                                  : std::to_string(plan.reduced)) +
                      " decoder evaluations, above the cap of " + std::to_string(opts.cap));
}

} // namespace gdof
