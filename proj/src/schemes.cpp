#include "gdof/schemes.hpp"

#include "gdof/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gdof {

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::Noisy: return "Noisy";
    case Regime::Weak: return "Weak";
    case Regime::ModeratelyWeak: return "ModeratelyWeak";
    case Regime::AlphaOne: return "AlphaOne";
    case Regime::Strong: return "Strong";
    case Regime::VeryStrong: return "VeryStrong";
    }
    return "?";
}

Regime classify(const Rational& alpha)
{
    if (alpha < 0) {
        throw InvalidParameter("alpha must be nonnegative, got " + format_exact(alpha));
    }
    if (alpha < Rational(1, 2)) return Regime::Noisy;
    if (alpha < Rational(2, 3)) return Regime::Weak;
    if (alpha < 1) return Regime::ModeratelyWeak;
    if (alpha == 1) return Regime::AlphaOne;
    if (alpha < 2) return Regime::Strong;
    return Regime::VeryStrong;
}

Alphabet regime_alphabet(Regime regime, int users, std::uint32_t base)
{
    if (users < 2) {
        throw InvalidParameter("users (K) must be at least 2");
    }
    const auto k = static_cast<std::uint32_t>(users);
    std::int64_t max = 0;
    switch (regime) {
    case Regime::Strong:
    case Regime::ModeratelyWeak:
        max = static_cast<std::int64_t>((base - 1) / k) - 1;
        break;
    case Regime::VeryStrong:
    case Regime::Weak:
        max = std::min<std::int64_t>(base - 2, static_cast<std::int64_t>((base - 1) / (k - 1)) - 1);
        break;
    default:
        throw RegimeUnsupported(std::string(to_string(regime)) + " has no qit alphabet");
    }
    if (max < 1) {
        throw AlphabetEmpty("no usable digits for K=" + std::to_string(users) +
                            ", Q=" + std::to_string(base) + " in " +
                            std::string(to_string(regime)));
    }
    return Alphabet{static_cast<Digit>(max)};
}

namespace {

int floor_int(const Rational& r)
{
    return static_cast<int>(floor_of(r));
}

void check_interval(Regime regime, const Rational& alpha)
{
    bool ok = false;
    switch (regime) {
    case Regime::Weak: ok = alpha >= Rational(1, 2) && alpha <= Rational(2, 3); break;
    case Regime::ModeratelyWeak: ok = alpha >= Rational(2, 3) && alpha < 1; break;
    case Regime::Strong: ok = alpha > 1 && alpha <= 2; break;
    case Regime::VeryStrong: ok = alpha >= 2; break;
    default: break;
    }
    if (!ok) {
        throw InvalidParameter("alpha = " + format_exact(alpha) + " is outside the " +
                               std::string(to_string(regime)) + " scheme's interval");
    }
}

void add_block(SignalLayout& layout, SlotKind kind, int first, int count,
               std::vector<int> sources = {})
{
    if (count > 0) {
        layout.blocks.push_back(Block{kind, first, count, std::move(sources)});
    }
}

void index_slots(SignalLayout& layout)
{
    layout.info_positions.clear();
    layout.slot_var.assign(static_cast<std::size_t>(layout.span), -1);
    for (const auto& b : layout.blocks) {
        if (b.kind == SlotKind::Info) {
            for (int p = b.first; p < b.first + b.count; ++p) {
                layout.info_positions.push_back(p);
            }
        }
    }
    std::sort(layout.info_positions.begin(), layout.info_positions.end());
    for (std::size_t i = 0; i < layout.info_positions.size(); ++i) {
        layout.slot_var[static_cast<std::size_t>(layout.info_positions[i])] = static_cast<int>(i);
    }
    for (const auto& b : layout.blocks) {
        if (b.kind == SlotKind::Copy) {
            for (int i = 0; i < b.count; ++i) {
                const auto src = static_cast<std::size_t>(b.sources[static_cast<std::size_t>(i)]);
                layout.slot_var[static_cast<std::size_t>(b.first + i)] = layout.slot_var[src];
            }
        }
    }
}

} // namespace

SignalLayout build_layout(Regime regime, int users, std::uint32_t base, int levels,
                          const Rational& alpha)
{
    if (regime == Regime::Noisy || regime == Regime::AlphaOne) {
        throw RegimeUnsupported(std::string(to_string(regime)) +
                                " has no layered signal construction");
    }
    if (levels < 1) {
        throw InvalidParameter("levels (M) must be at least 1");
    }
    check_interval(regime, alpha);

    SignalLayout layout;
    layout.regime = regime;
    layout.users = users;
    layout.base = base;
    layout.M = levels;
    layout.alphabet = regime_alphabet(regime, users, base);
    const int M = levels;

    switch (regime) {
    case Regime::VeryStrong: {
        const int n = floor_int(Rational(M) / (alpha - 1));
        layout.N = n;
        layout.span = n;
        add_block(layout, SlotKind::Info, 0, n);
        break;
    }
    case Regime::Strong: {
        const int n = floor_int(Rational(M) * alpha / (2 * (alpha - 1)));
        const int span = 2 * n - M;
        layout.N = n;
        layout.span = span;
        add_block(layout, SlotKind::Info, 0, n);
        // X_{2N-M-i} = X_{i-1}, i = 1..N-M: reversed copies of the lowest qits.
        std::vector<int> sources;
        for (int p = n; p < span; ++p) {
            sources.push_back(span - 1 - p);
        }
        add_block(layout, SlotKind::Copy, n, span - n, std::move(sources));
        break;
    }
    case Regime::ModeratelyWeak: {
        const int n = floor_int(Rational(M) * (3 * alpha - 2) / (2 * (1 - alpha)));
        const int span = 2 * n + 3 * M;
        layout.N = n;
        layout.span = span;
        add_block(layout, SlotKind::Info, 0, M);
        add_block(layout, SlotKind::Zero, M, M);
        // X_{2N+3M-i} = X_{2M+i-1}, i = 1..N: the top N qits, reversed.
        std::vector<int> sources;
        for (int i = 1; i <= n; ++i) {
            sources.push_back(span - i);
        }
        add_block(layout, SlotKind::Copy, 2 * M, n, std::move(sources));
        add_block(layout, SlotKind::Info, 2 * M + n, M);
        add_block(layout, SlotKind::Info, 3 * M + n, n);
        break;
    }
    case Regime::Weak: {
        const int n = floor_int(Rational(M) * (2 * alpha - 1) / (1 - alpha));
        layout.N = n;
        layout.span = n + 2 * M;
        add_block(layout, SlotKind::Info, 0, M);
        add_block(layout, SlotKind::Zero, M, M);
        add_block(layout, SlotKind::Info, 2 * M, n);
        break;
    }
    default:
        break;
    }

    index_slots(layout);
    validate_layout(layout);
    return layout;
}

SignalLayout corrupt_copy_map(const SignalLayout& layout)
{
    SignalLayout bad = layout;
    for (auto& b : bad.blocks) {
        if (b.kind != SlotKind::Copy) {
            continue;
        }
        if (bad.info_positions.size() < 2) {
            break;
        }
        const int src = b.sources.front();
        const int var = layout.slot_var[static_cast<std::size_t>(src)];
        const int other = (var + 1) % bad.info_count();
        b.sources.front() = bad.info_positions[static_cast<std::size_t>(other)];
        index_slots(bad);
        return bad;
    }
    throw InvalidParameter("layout has no copy map to corrupt");
}

void validate_layout(const SignalLayout& layout)
{
    std::vector<int> cover(static_cast<std::size_t>(layout.span), 0);
    for (const auto& b : layout.blocks) {
        if (b.first < 0 || b.first + b.count > layout.span) {
            throw InvalidParameter("block outside span");
        }
        for (int p = b.first; p < b.first + b.count; ++p) {
            ++cover[static_cast<std::size_t>(p)];
        }
        if (b.kind == SlotKind::Copy) {
            if (static_cast<int>(b.sources.size()) != b.count) {
                throw InvalidParameter("copy block without a full source map");
            }
        }
    }
    for (int c : cover) {
        if (c != 1) {
            throw InvalidParameter("blocks do not tile the span exactly");
        }
    }
    for (const auto& b : layout.blocks) {
        for (int src : b.sources) {
            if (src < 0 || src >= layout.span ||
                !std::binary_search(layout.info_positions.begin(), layout.info_positions.end(),
                                    src)) {
                throw InvalidParameter("copy source is not an information position");
            }
        }
    }
    if (layout.alphabet.max < 1 || layout.alphabet.max > layout.base - 2) {
        throw InvalidParameter("alphabet must lie within {1..Q-2}");
    }
}

QaryVector encode(const SignalLayout& layout, const Message& msg)
{
    if (static_cast<int>(msg.size()) != layout.info_count()) {
        throw MessageMismatch("message has " + std::to_string(msg.size()) +
                              " digits, layout expects " + std::to_string(layout.info_count()));
    }
    for (std::size_t i = 0; i < msg.size(); ++i) {
        if (!layout.alphabet.contains(msg[i])) {
            throw MessageMismatch("digit " + std::to_string(msg[i]) + " at index " +
                                  std::to_string(i) + " outside alphabet {1.." +
                                  std::to_string(layout.alphabet.max) + "}");
        }
    }
    return QaryVector(layout.base, place_digits(layout, msg), 0);
}

std::vector<Digit> place_digits(const SignalLayout& layout, std::span<const Digit> values)
{
    std::vector<Digit> digits(static_cast<std::size_t>(layout.span), 0);
    for (std::size_t p = 0; p < digits.size(); ++p) {
        const int var = layout.slot_var[p];
        if (var >= 0) {
            digits[p] = values[static_cast<std::size_t>(var)];
        }
    }
    return digits;
}

ChannelParams params_for(const SignalLayout& layout, const Rational& alpha)
{
    return derive_params(layout.users, layout.base, layout.M, alpha, layout.span);
}

bool check_power(const ChannelParams& params, const SignalLayout& layout)
{
    return check_power(params, layout.span);
}

double symmetric_rate_qits(const SignalLayout& layout)
{
    if (layout.info_count() == 0) {
        return 0.0;
    }
    return layout.info_count() * std::log(static_cast<double>(layout.alphabet.size())) /
           std::log(static_cast<double>(layout.base));
}

namespace {

// log2(2^a + 2^b) without overflow.
double log2_add(double a, double b)
{
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp2(lo - hi)) / std::log(2.0);
}

} // namespace

double noisy_regime_rate_log2(double log2_snr, double alpha, int users)
{
    if (users < 2) {
        throw InvalidParameter("users (K) must be at least 2");
    }
    // log2(1 + (K-1) SNR^alpha)
    const double denom = log2_add(0.0, std::log2(users - 1.0) + alpha * log2_snr);
    // 1/2 log2(1 + SNR / denom)
    return 0.5 * log2_add(0.0, log2_snr - denom);
}

double noisy_regime_rate(double snr, double alpha, int users)
{
    if (!(snr > 0.0)) {
        throw InvalidParameter("snr must be positive");
    }
    return noisy_regime_rate_log2(std::log2(snr), alpha, users);
}

} // namespace gdof
