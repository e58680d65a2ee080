#include "gdof/channel.hpp"
#include "gdof/error.hpp"
#include "gdof/schemes.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gdof;

namespace {

QaryVector random_vector(std::mt19937_64& rng, std::uint32_t q, Digit max, int len)
{
    std::uniform_int_distribution<Digit> pick(0, max);
    std::vector<Digit> d(static_cast<std::size_t>(len));
    for (auto& x : d) {
        x = pick(rng);
    }
    return QaryVector(q, d);
}

} // namespace

TEST_CASE("derive_params")
{
    const auto p = derive_params(3, 10, 2, Rational(2), 2);
    CHECK(p.shift == 2);
    CHECK(p.snr_log_q == Rational(4));
    CHECK(p.window == 4);

    const auto w = derive_params(3, 10, 2, Rational(3, 5), 5);
    CHECK(w.shift == -2);
    CHECK(w.snr_log_q == Rational(10));
    CHECK(w.window == 5);

    CHECK_THROWS_AS(derive_params(3, 10, 2, Rational(1), 2), AlphaOneUnsupported);
    CHECK_THROWS_AS(derive_params(3, 9, 2, Rational(2), 2), BaseTooSmall);
    CHECK_THROWS_AS(derive_params(1, 10, 2, Rational(2), 2), InvalidParameter);
    CHECK_THROWS_AS(derive_params(3, 10, 0, Rational(2), 2), InvalidParameter);
    CHECK_THROWS_AS(derive_params(3, 10, 2, Rational(-1), 2), InvalidParameter);
}

TEST_CASE("snr in bits stays finite near alpha = 1")
{
    const auto p = derive_params(2, 64, 8, Rational(1001, 1000), 1);
    CHECK(p.snr_log_q == Rational(16000));
    CHECK(p.snr_log2() == doctest::Approx(96000.0));
}

TEST_CASE("check_power")
{
    const auto vs = derive_params(2, 10, 4, Rational(3), 2);
    CHECK(check_power(vs, 2));
    const auto st = derive_params(2, 10, 2, Rational(3, 2), 4);
    CHECK(check_power(st, 4));
    CHECK_FALSE(check_power(st, 5));
}

TEST_CASE("deterministic channel matches exact arithmetic")
{
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const int shift = (rep % 2) ? 2 : -2;
        const Rational alpha = shift > 0 ? Rational(5, 2) : Rational(3, 5);
        const auto params = derive_params(3, 10, 2, alpha, 4);
        std::vector<QaryVector> xs;
        for (int k = 0; k < 3; ++k) {
            xs.push_back(random_vector(rng, 10, 3, 4));
        }
        const auto ys = apply_deterministic(params, xs);
        const Rational scale = shift > 0 ? Rational(100) : Rational(1, 100);
        for (int k = 0; k < 3; ++k) {
            Rational others = 0;
            for (int j = 0; j < 3; ++j) {
                if (j != k) others += value_of(xs[j]);
            }
            CHECK(value_of(ys[k]) == value_of(xs[k]) + scale * others);
        }
    }
}

TEST_CASE("interference sits above the desired digits for shift +M")
{
    std::mt19937_64 rng(11);
    const auto params = derive_params(2, 10, 2, Rational(3), 2);
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<QaryVector> xs = {random_vector(rng, 10, 8, 2),
                                            random_vector(rng, 10, 8, 2)};
        const auto ys = apply_deterministic(params, xs);
        for (int i = 0; i < 2; ++i) {
            CHECK(ys[0].digit_at(i) == xs[0].digit_at(i));
            CHECK(ys[1].digit_at(i) == xs[1].digit_at(i));
        }
    }
}

TEST_CASE("zero inputs give zero outputs and the channel is user symmetric")
{
    const auto params = derive_params(3, 10, 1, Rational(5, 2), 2);
    const std::vector<QaryVector> zeros(3, QaryVector(10, {0, 0}));
    for (const auto& y : apply_deterministic(params, zeros)) {
        CHECK(value_of(y) == Rational(0));
    }
    std::mt19937_64 rng(3);
    std::vector<QaryVector> xs;
    for (int k = 0; k < 3; ++k) {
        xs.push_back(random_vector(rng, 10, 3, 2));
    }
    const std::vector<QaryVector> perm = {xs[2], xs[0], xs[1]};
    const auto a = apply_deterministic(params, xs);
    const auto b = apply_deterministic(params, perm);
    CHECK(b[0] == a[2]);
    CHECK(b[1] == a[0]);
    CHECK(b[2] == a[1]);
}

TEST_CASE("gaussian channel is reproducible and zero noise is the deterministic channel")
{
    const auto params = derive_params(3, 10, 2, Rational(5, 2), 1);
    const std::vector<QaryVector> xs = {QaryVector(10, {1}), QaryVector(10, {2}),
                                        QaryVector(10, {3})};
    const NoiseModel noise{42, 1.0};
    CHECK(apply_gaussian(params, xs, noise, 5) == apply_gaussian(params, xs, noise, 5));
    CHECK(apply_gaussian(params, xs, noise, 5) != apply_gaussian(params, xs, noise, 6));

    const NoiseModel silent{42, 0.0};
    const auto y = apply_gaussian(params, xs, silent, 0);
    const auto clean = apply_deterministic(params, xs);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(y[k] == to_double(value_of(clean[k])));
        CHECK(receiver_reduce(y[k], 10, params.window) ==
              receiver_reduce(clean[k], 0.0, params.window));
    }
}

TEST_CASE("noise samples are standard normal")
{
    const NoiseModel noise{2024, 1.0};
    const int n = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int t = 0; t < n; ++t) {
        const double z = noise.sample(static_cast<std::uint64_t>(t), 0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
    // Streams are distinct per receiver.
    CHECK(noise.sample(0, 0) != noise.sample(0, 1));
    CHECK(stream_seed(1, 2, 3) != stream_seed(1, 3, 2));
}

TEST_CASE("every scheme layout meets the power constraint")
{
    const std::vector<std::pair<Regime, std::vector<Rational>>> grid = {
        {Regime::VeryStrong, {Rational(2), Rational(5, 2), Rational(3), Rational(7)}},
        {Regime::Strong, {Rational(11, 10), Rational(3, 2), Rational(19, 10), Rational(2)}},
        {Regime::ModeratelyWeak, {Rational(2, 3), Rational(7, 10), Rational(3, 4), Rational(19, 20)}},
        {Regime::Weak, {Rational(1, 2), Rational(11, 20), Rational(3, 5), Rational(2, 3)}},
    };
    for (const auto& [regime, alphas] : grid) {
        for (const auto& a : alphas) {
            for (int m = 1; m <= 20; ++m) {
                const auto layout = build_layout(regime, 3, 16, m, a);
                CHECK(check_power(params_for(layout, a), layout));
            }
        }
    }
}
