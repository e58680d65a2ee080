#include "gdof/canceller.hpp"
#include "gdof/error.hpp"
#include "gdof/schemes.hpp"
#include "gdof/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>

using namespace gdof;

namespace {

// Independent reference layout: position -> info index (or -1), built
// straight from the block formulas with integer floors on alpha = p/q.
struct RefLayout {
    int span = 0;
    std::vector<int> var;  // by position
    int info = 0;
};

RefLayout reference_layout(Regime r, int M, std::int64_t p, std::int64_t q)
{
    RefLayout L;
    std::vector<int> role;  // -1 zero, -2 info, >=0 copy of position
    int N = 0;
    switch (r) {
    case Regime::VeryStrong:
        N = static_cast<int>(M * q / (p - q));
        role.assign(static_cast<std::size_t>(N), -2);
        break;
    case Regime::Strong: {
        N = static_cast<int>(M * p / (2 * (p - q)));
        role.assign(static_cast<std::size_t>(2 * N - M), -2);
        for (int i = 1; i <= N - M; ++i) {
            role[static_cast<std::size_t>(2 * N - M - i)] = i - 1;
        }
        break;
    }
    case Regime::ModeratelyWeak: {
        N = static_cast<int>(M * (3 * p - 2 * q) / (2 * (q - p)));
        const int span = 2 * N + 3 * M;
        role.assign(static_cast<std::size_t>(span), -2);
        for (int i = M; i < 2 * M; ++i) role[static_cast<std::size_t>(i)] = -1;
        for (int i = 1; i <= N; ++i) {
            role[static_cast<std::size_t>(2 * M + i - 1)] = span - i;
        }
        break;
    }
    case Regime::Weak: {
        N = static_cast<int>(M * (2 * p - q) / (q - p));
        role.assign(static_cast<std::size_t>(N + 2 * M), -2);
        for (int i = M; i < 2 * M; ++i) role[static_cast<std::size_t>(i)] = -1;
        break;
    }
    default:
        break;
    }
    L.span = static_cast<int>(role.size());
    L.var.assign(role.size(), -1);
    for (std::size_t i = 0; i < role.size(); ++i) {
        if (role[i] == -2) L.var[i] = L.info++;
    }
    for (std::size_t i = 0; i < role.size(); ++i) {
        if (role[i] >= 0) L.var[i] = L.var[static_cast<std::size_t>(role[i])];
    }
    return L;
}

std::int64_t ref_encode(const RefLayout& L, const std::vector<Digit>& msg, std::int64_t Q)
{
    std::int64_t v = 0;
    for (int pos = L.span - 1; pos >= 0; --pos) {
        const int var = L.var[static_cast<std::size_t>(pos)];
        v = v * Q + (var >= 0 ? msg[static_cast<std::size_t>(var)] : 0);
    }
    return v;
}

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool next(std::vector<Digit>& v, Digit max)
{
    for (auto& d : v) {
        if (d < max) {
            ++d;
            return true;
        }
        d = 1;
    }
    return false;
}

// Every message tuple through plain integer channel arithmetic, decoded by
// the library at every receiver.
void exhaustive_round_trip(Regime regime, int K, int M, std::int64_t p, std::int64_t q)
{
    const std::int64_t Q = 10;
    const Rational alpha(p, q);
    const auto layout = build_layout(regime, K, 10, M, alpha);
    const auto params = params_for(layout, alpha);
    const RefLayout ref = reference_layout(regime, M, p, q);
    REQUIRE(layout.span == ref.span);
    REQUIRE(layout.info_count() == ref.info);

    const auto n = static_cast<std::size_t>(ref.info);
    const Digit a = layout.alphabet.max;
    std::vector<std::vector<Digit>> msgs;
    std::vector<std::int64_t> values;
    std::vector<Digit> m(n, 1);
    do {
        msgs.push_back(m);
        values.push_back(ref_encode(ref, m, Q));
        CHECK(value_of(encode(layout, m)) == Rational(values.back()));
    } while (next(m, a));

    const SuccessiveCanceller dec(layout, params);
    const int window = params.window;
    const std::int64_t mod = ipow(Q, window);
    const std::int64_t scale = ipow(Q, M);
    std::vector<std::size_t> idx(static_cast<std::size_t>(K), 0);
    std::vector<Digit> reduced(static_cast<std::size_t>(window));
    std::vector<Digit> out(n);
    std::vector<Digit> s(n);
    std::uint64_t failures = 0;
    std::uint64_t checked = 0;
    for (;;) {
        std::int64_t total = 0;
        for (auto i : idx) total += values[i];
        for (int k = 0; k < K; ++k) {
            const std::int64_t own = values[idx[static_cast<std::size_t>(k)]];
            const std::int64_t others = total - own;
            std::int64_t y = alpha > 1 ? own + scale * others : (own * scale + others) / scale;
            y %= mod;
            for (int i = 0; i < window; ++i) {
                reduced[static_cast<std::size_t>(i)] = static_cast<Digit>(y % Q);
                y /= Q;
            }
            dec.decode_into(reduced, out, s);
            failures += out != msgs[idx[static_cast<std::size_t>(k)]] ? 1 : 0;
            ++checked;
        }
        std::size_t u = 0;
        while (u < idx.size() && ++idx[u] == msgs.size()) {
            idx[u++] = 0;
        }
        if (u == idx.size()) break;
    }
    INFO("regime " << to_string(regime) << " M=" << M << " alpha=" << p << "/" << q);
    CHECK(failures == 0);
    CHECK(checked == static_cast<std::uint64_t>(std::pow(msgs.size(), K)) * K);
}

} // namespace

TEST_CASE("classify partitions alpha left-closed")
{
    CHECK(classify(Rational(3, 10)) == Regime::Noisy);
    CHECK(classify(Rational(0)) == Regime::Noisy);
    CHECK(classify(Rational(1, 2)) == Regime::Weak);
    CHECK(classify(Rational(2, 3)) == Regime::ModeratelyWeak);
    CHECK(classify(Rational(1)) == Regime::AlphaOne);
    CHECK(classify(Rational(3, 2)) == Regime::Strong);
    CHECK(classify(Rational(2)) == Regime::VeryStrong);
    CHECK_THROWS_AS(classify(Rational(-1, 10)), InvalidParameter);
}

TEST_CASE("layout examples")
{
    const auto st = build_layout(Regime::Strong, 3, 16, 2, Rational(3, 2));
    CHECK(st.N == 3);
    CHECK(st.span == 4);
    CHECK(st.slot_var[3] == st.slot_var[0]);
    CHECK(st.info_count() == 3);

    const auto mw = build_layout(Regime::ModeratelyWeak, 3, 64, 4, Rational(3, 4));
    CHECK(mw.N == 2);
    CHECK(mw.span == 16);
    CHECK(mw.info_count() == 10);

    const auto wk = build_layout(Regime::Weak, 2, 10, 3, Rational(1, 2));
    CHECK(wk.N == 0);
    CHECK(wk.span == 6);
    CHECK(wk.info_count() == 3);
    for (int p = 3; p < 6; ++p) CHECK(wk.slot_var[static_cast<std::size_t>(p)] == -1);

    CHECK_THROWS_AS(build_layout(Regime::Noisy, 3, 16, 2, Rational(1, 4)), RegimeUnsupported);
    CHECK_THROWS_AS(build_layout(Regime::AlphaOne, 3, 16, 2, Rational(1)), RegimeUnsupported);
    CHECK_THROWS_AS(build_layout(Regime::Strong, 3, 16, 2, Rational(5, 2)), InvalidParameter);
}

TEST_CASE("layouts agree with the block formulas")
{
    const std::vector<std::tuple<Regime, std::int64_t, std::int64_t>> cases = {
        {Regime::VeryStrong, 5, 2}, {Regime::VeryStrong, 2, 1},  {Regime::Strong, 3, 2},
        {Regime::Strong, 19, 10},   {Regime::Strong, 2, 1},       {Regime::ModeratelyWeak, 3, 4},
        {Regime::ModeratelyWeak, 7, 10}, {Regime::ModeratelyWeak, 9, 10},
        {Regime::Weak, 3, 5},       {Regime::Weak, 1, 2},         {Regime::Weak, 2, 3}};
    for (const auto& [r, p, q] : cases) {
        for (int M = 1; M <= 12; ++M) {
            const auto layout = build_layout(r, 3, 16, M, Rational(p, q));
            const auto ref = reference_layout(r, M, p, q);
            CHECK(layout.span == ref.span);
            CHECK(layout.slot_var == ref.var);
            CHECK_NOTHROW(validate_layout(layout));
        }
    }
}

TEST_CASE("alphabets")
{
    CHECK(regime_alphabet(Regime::Strong, 3, 64).max == 20);
    CHECK(regime_alphabet(Regime::ModeratelyWeak, 3, 10).max == 2);
    CHECK(regime_alphabet(Regime::VeryStrong, 2, 10).max == 8);
    CHECK(regime_alphabet(Regime::Weak, 2, 64).max == 62);
    CHECK(regime_alphabet(Regime::VeryStrong, 3, 10).max == 3);
    CHECK_THROWS_AS(regime_alphabet(Regime::Strong, 5, 10), AlphabetEmpty);
}

TEST_CASE("with digits up to Q-2, three weak-regime users would carry")
{
    // Two interferers at Q-2 collide in the same position.
    const std::vector<QaryVector> xs = {QaryVector(10, {8}), QaryVector(10, {8})};
    CHECK_THROWS_AS(add_carry_free(xs), CarryOverflow);
}

TEST_CASE("encode places info, copy and zero digits")
{
    const auto vs = build_layout(Regime::VeryStrong, 2, 10, 2, Rational(2));
    REQUIRE(vs.N == 2);
    CHECK(value_of(encode(vs, {3, 7})) == Rational(73));

    const auto st = build_layout(Regime::Strong, 3, 16, 2, Rational(3, 2));
    const auto x = encode(st, {4, 1, 3});
    CHECK(x == QaryVector(16, {4, 1, 3, 4}));

    const auto wk = build_layout(Regime::Weak, 2, 10, 3, Rational(1, 2));
    CHECK(value_of(encode(wk, {1, 2, 3})) == Rational(321));
    CHECK_THROWS_AS(encode(wk, {1, 2}), MessageMismatch);
    CHECK_THROWS_AS(encode(wk, {1, 2, 9}), MessageMismatch);
    CHECK_THROWS_AS(encode(wk, {1, 0, 3}), MessageMismatch);
}

TEST_CASE("very strong worked example")
{
    const auto layout = build_layout(Regime::VeryStrong, 3, 10, 2, Rational(2));
    const auto params = params_for(layout, Rational(2));
    const std::vector<QaryVector> xs = {encode(layout, {1, 2}), encode(layout, {1, 2}),
                                        encode(layout, {2, 1})};
    const auto ys = apply_deterministic(params, xs);
    CHECK(value_of(ys[0]) == Rational(3321));
    const auto reduced = receiver_reduce(ys[0], 0.0, params.window);
    CHECK(decode(layout, params, reduced).message == Message{1, 2});
}

TEST_CASE("strong regime cancellation schedule")
{
    const auto layout = build_layout(Regime::Strong, 2, 16, 2, Rational(3, 2));
    const auto params = params_for(layout, Rational(3, 2));
    REQUIRE(params.window == 6);
    const SuccessiveCanceller dec(layout, params);
    const auto steps = dec.steps();
    REQUIRE(steps.size() == 4);
    using T = CancelStep::Target;
    CHECK((steps[0].target == T::Desired && steps[0].var == 0 && steps[0].level == 0));
    CHECK((steps[1].target == T::Desired && steps[1].var == 1 && steps[1].level == 1));
    CHECK((steps[2].target == T::Interference && steps[2].var == 0 && steps[2].level == 5));
    CHECK((steps[3].target == T::Desired && steps[3].var == 2 && steps[3].level == 2 &&
           steps[3].other == 0 && steps[3].round == 2));

    const std::vector<QaryVector> xs = {encode(layout, {5, 6, 4}), encode(layout, {1, 2, 3})};
    const auto ys = apply_deterministic(params, xs);
    std::vector<Digit> r(6);
    for (int i = 0; i < 6; ++i) r[static_cast<std::size_t>(i)] = ys[0].digit_at(i);
    const auto lines = dec.trace(r);
    REQUIRE(lines.size() == 4);
    CHECK(lines[3] == "round 2: X[2] = R[2] - S[0] = 5 - 1 = 4");
    CHECK(dec.decode(receiver_reduce(ys[0], 0.0, 6)).message == Message{5, 6, 4});
}

TEST_CASE("exhaustive noise-free round trip, K=3, Q=10")
{
    for (int M = 1; M <= 3; ++M) {
        exhaustive_round_trip(Regime::VeryStrong, 3, M, 5, 2);
        exhaustive_round_trip(Regime::Strong, 3, M, 3, 2);
        exhaustive_round_trip(Regime::ModeratelyWeak, 3, M, 3, 4);
        exhaustive_round_trip(Regime::Weak, 3, M, 3, 5);
        exhaustive_round_trip(Regime::Weak, 3, M, 1, 2);
    }
}

TEST_CASE("randomised round trip at larger parameters")
{
    std::mt19937_64 rng(99);
    const std::vector<std::pair<Regime, Rational>> cases = {
        {Regime::VeryStrong, Rational(9, 4)}, {Regime::Strong, Rational(6, 5)},
        {Regime::ModeratelyWeak, Rational(17, 20)}, {Regime::Weak, Rational(13, 20)}};
    for (const auto& [regime, alpha] : cases) {
        for (int K : {2, 4}) {
            const auto layout = build_layout(regime, K, 64, 8, alpha);
            const auto params = params_for(layout, alpha);
            std::uniform_int_distribution<Digit> pick(1, layout.alphabet.max);
            for (int rep = 0; rep < 200; ++rep) {
                std::vector<Message> msgs(static_cast<std::size_t>(K));
                std::vector<QaryVector> xs;
                for (auto& m : msgs) {
                    m.resize(static_cast<std::size_t>(layout.info_count()));
                    for (auto& d : m) d = pick(rng);
                    xs.push_back(encode(layout, m));
                    // copy consistency
                    for (int p = 0; p < layout.span; ++p) {
                        const int v = layout.slot_var[static_cast<std::size_t>(p)];
                        CHECK(xs.back().digit_at(p) ==
                              (v >= 0 ? m[static_cast<std::size_t>(v)] : 0u));
                    }
                }
                std::vector<QaryVector> ys;
                REQUIRE_NOTHROW(ys = apply_deterministic(params, xs));
                for (int k = 0; k < K; ++k) {
                    const auto res =
                        decode(layout, params, receiver_reduce(ys[static_cast<std::size_t>(k)], 0.0,
                                                               params.window));
                    CHECK(res.message == msgs[static_cast<std::size_t>(k)]);
                    CHECK_FALSE(res.out_of_alphabet);
                }
            }
        }
    }
}

TEST_CASE("corrupted copy map is caught by the verifier")
{
    const auto layout = build_layout(Regime::Strong, 2, 16, 2, Rational(3, 2));
    const auto params = params_for(layout, Rational(3, 2));
    CHECK(verify_round_trip(layout, params).passed());
    VerifyOptions opts;
    opts.corrupt_copy_map = true;
    const auto rep = verify_round_trip(layout, params, opts);
    CHECK_FALSE(rep.passed());
    REQUIRE_FALSE(rep.counterexamples.empty());
    CHECK_FALSE(rep.counterexamples.front().trace.empty());

    const auto vs = build_layout(Regime::VeryStrong, 2, 16, 2, Rational(5, 2));
    CHECK_THROWS_AS(corrupt_copy_map(vs), InvalidParameter);
}

TEST_CASE("verifier modes and cap")
{
    const Rational alpha(3, 4);
    const auto layout = build_layout(Regime::ModeratelyWeak, 2, 16, 1, alpha);
    const auto params = params_for(layout, alpha);
    const auto plan = plan_verification(layout, params);
    CHECK(plan.reduced < plan.full);
    VerifyOptions opts;
    opts.cap = plan.full;
    const auto full = verify_round_trip(layout, params, opts);
    CHECK(full.mode == VerifyMode::Full);
    CHECK(full.evaluations == plan.full);
    CHECK(full.passed());
    opts.cap = plan.reduced;
    const auto red = verify_round_trip(layout, params, opts);
    CHECK(red.mode == VerifyMode::Reduced);
    CHECK(red.evaluations == plan.reduced);
    CHECK(red.passed());
    opts.cap = plan.reduced - 1;
    CHECK_THROWS_AS(verify_round_trip(layout, params, opts), CapExceeded);
}

TEST_CASE("rates")
{
    const auto vs = build_layout(Regime::VeryStrong, 2, 10, 2, Rational(2));
    CHECK(symmetric_rate_qits(vs) == doctest::Approx(2 * std::log10(8.0)));
    const auto mw = build_layout(Regime::ModeratelyWeak, 3, 64, 4, Rational(3, 4));
    CHECK(symmetric_rate_qits(mw) == doctest::Approx(10 * std::log(20.0) / std::log(64.0)));
    const auto wk = build_layout(Regime::Weak, 2, 10, 3, Rational(1, 2));
    CHECK(symmetric_rate_qits(wk) == doctest::Approx(3 * std::log10(8.0)));
}

TEST_CASE("noisy-interference rate")
{
    for (int K : {2, 3, 7}) {
        for (double a : {0.0, 0.3}) {
            CHECK(noisy_regime_rate(1.0, a, K) == doctest::Approx(0.5 * std::log2(1.0 + 1.0 / K)));
        }
    }
    const double r = noisy_regime_rate(1e12, 0.25, 3);
    // Independent evaluation: 1e12 / (1 + 2 * 10^3).
    CHECK(r == doctest::Approx(0.5 * std::log2(1.0 + 1e12 / 2001.0)));
    CHECK(r == doctest::Approx(14.43).epsilon(0.002));
    CHECK(r / (0.5 * std::log2(1e12)) == doctest::Approx(0.724).epsilon(0.002));
    CHECK(noisy_regime_rate(1e12, 0.0, 3) ==
          doctest::Approx(0.5 * std::log2(1.0 + 1e12 / 3.0)));
    // Log-domain evaluation survives SNRs beyond double range.
    const double big = noisy_regime_rate_log2(4000.0, 0.25, 3);
    CHECK(big / 2000.0 == doctest::Approx(0.75).epsilon(0.01));
}
