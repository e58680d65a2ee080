#pragma once

#include "gdof/channel.hpp"
#include "gdof/schemes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gdof {

/*
 * Exhaustive noise-free round-trip check of a layered scheme.
 *
 * Full mode enumerates every K-user message tuple, runs the exact channel and
 * receiver reduction, and decodes at every receiver.
 *
 * Reduced mode is used when the full product is too large. Users are
 * symmetric and superposition is carry-free, so receiver 0 only ever sees its
 * own message plus the digit-wise interference sum S. Each S digit ranges
 * over [K-1, (K-1)|A|] independently, and only S digits that land inside the
 * receive window can influence the decoder; the rest are fixed. Reduced mode
 * enumerates desired message x visible S values, which covers every
 * received vector the full enumeration can produce.
 *
 * The cap bounds decoder evaluations.
 */
enum class VerifyMode { Full, Reduced };

std::string_view to_string(VerifyMode mode);

struct VerifyOptions {
    std::uint64_t cap = 1'000'000;
    bool corrupt_copy_map = false;   // fault-injection hook on the encoder side
    std::size_t max_counterexamples = 10;
};

struct Counterexample {
    int receiver = 0;
    std::vector<Message> messages;  // full mode: every user's message
    Message desired;
    std::vector<Digit> interference_sum;  // reduced mode: S per info digit
    std::vector<Digit> reduced;           // receiver digits, level 0 first
    Message decoded;
    std::string reason;
    std::vector<std::string> trace;
};

struct VerifyPlan {
    std::uint64_t full = 0;     // saturating
    std::uint64_t reduced = 0;  // saturating
};

struct VerifyReport {
    VerifyMode mode = VerifyMode::Full;
    std::uint64_t evaluations = 0;
    std::uint64_t failures = 0;
    std::vector<Counterexample> counterexamples;  // first max_counterexamples

    bool passed() const { return failures == 0; }
};

VerifyPlan plan_verification(const SignalLayout& layout, const ChannelParams& params);

/// Throws CapExceeded when neither mode fits under opts.cap.
VerifyReport verify_round_trip(const SignalLayout& layout, const ChannelParams& params,
                               const VerifyOptions& opts = {});

} // namespace gdof
