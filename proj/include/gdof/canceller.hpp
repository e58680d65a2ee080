#pragma once

#include "gdof/channel.hpp"
#include "gdof/schemes.hpp"

#include <span>
#include <string>
#include <vector>

namespace gdof {

/*
 * Successive cancellation at one receiver.
 *
 * With carry-free superposition every reduced digit is an equation
 *
 *     R[p] = X[p] + S[p - shift]      (mod Q, exact when noise-free)
 *
 * where X is the desired signal and S the sum of the K-1 interferers. Both
 * share the layout's copy map, so each side is a function of one digit
 * variable (or a known zero). The interference sum is cancelled as a whole;
 * individual interferers are never decoded.
 *
 * Decoding proceeds in rounds. A round resolves every variable that some
 * equation leaves as its only unknown, using only what earlier rounds
 * resolved; when several equations qualify, the highest (least noisy) level
 * wins. For the very strong and weak layouts one round suffices. For strong
 * and moderately weak layouts each round yields a new block of M desired
 * qits and a new block of the interference sum, matching the stepwise
 * block procedure of those schemes.
 *
 * The schedule depends only on the layout, so it is compiled once and then
 * replayed per received vector.
 */
struct CancelStep {
    enum class Target { Desired, Interference };

    Target target = Target::Desired;
    int var = 0;     // information-digit index
    int level = 0;   // receiver digit read
    int other = -1;  // variable on the opposite side subtracted, -1 when zero
    int round = 0;
};

struct DecodeResult {
    Message message;
    bool out_of_alphabet = false;  // DigitOutOfAlphabet flag
    std::vector<int> flagged;      // info indices outside the alphabet
};

class SuccessiveCanceller {
public:
    SuccessiveCanceller(const SignalLayout& layout, int shift, int window);
    SuccessiveCanceller(const SignalLayout& layout, const ChannelParams& params);

    DecodeResult decode(const QaryVector& reduced) const;

    // Allocation-free core. reduced holds window digits; desired and
    // interference hold info_count() values. Returns false if any decoded
    // digit falls outside the alphabet.
    bool decode_into(std::span<const Digit> reduced, std::span<Digit> desired,
                     std::span<Digit> interference) const;

    std::vector<std::string> trace(std::span<const Digit> reduced) const;

    std::span<const CancelStep> steps() const { return steps_; }
    int rounds() const { return rounds_; }
    int window() const { return window_; }
    int info_count() const { return info_count_; }

private:
    std::vector<CancelStep> steps_;
    std::vector<int> var_position_;
    std::uint32_t base_;
    Alphabet alphabet_;
    int window_;
    int info_count_;
    int rounds_ = 0;
};

DecodeResult decode(const SignalLayout& layout, const ChannelParams& params,
                    const QaryVector& reduced);

} // namespace gdof
