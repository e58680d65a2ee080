#pragma once

#include "gdof/channel.hpp"
#include "gdof/qary.hpp"
#include "gdof/rational.hpp"

#include <string_view>
#include <vector>

namespace gdof {

// Partition of alpha in [0, inf); each interval is left-closed:
//   Noisy [0,1/2)  Weak [1/2,2/3)  ModeratelyWeak [2/3,1)  AlphaOne {1}
//   Strong (1,2)   VeryStrong [2,inf)
enum class Regime { Noisy, Weak, ModeratelyWeak, AlphaOne, Strong, VeryStrong };

std::string_view to_string(Regime regime);
Regime classify(const Rational& alpha);

// Digits {1, ..., max}. Zero is never transmitted on an information qit.
struct Alphabet {
    Digit max = 0;

    std::size_t size() const { return max; }
    bool contains(Digit d) const { return d >= 1 && d <= max; }
};

/// Alphabet used by a regime. Strong and ModeratelyWeak superpose the desired
/// qits with K-1 interferers: {1..floor((Q-1)/K)-1}. VeryStrong and Weak only
/// ever superpose the K-1 interferers with each other:
/// {1..floor((Q-1)/(K-1))-1}, which is {1..Q-2} for two users.
Alphabet regime_alphabet(Regime regime, int users, std::uint32_t base);

enum class SlotKind { Info, Copy, Zero };

struct Block {
    SlotKind kind;
    int first = 0;  // least significant position of the block
    int count = 0;
    // Copy blocks only: sources[i] is the info position copied into first + i.
    std::vector<int> sources;
};

/*
 * Placement of information, copy and zero qits over positions 0..span-1 of
 * every transmit signal (identical for all users).
 *
 * slot_var maps a position to the index of the information digit it carries
 * (its own for info slots, the source's for copies) or -1 for zeros.
 */
struct SignalLayout {
    Regime regime = Regime::VeryStrong;
    int users = 0;
    std::uint32_t base = 0;
    int N = 0;
    int M = 0;
    int span = 0;
    std::vector<Block> blocks;  // ordered from least significant
    Alphabet alphabet;

    std::vector<int> info_positions;  // info index -> position (ascending)
    std::vector<int> slot_var;        // position -> info index or -1

    int info_count() const { return static_cast<int>(info_positions.size()); }
};

/// Layout for a layered regime. Accepts alpha on the closed interval covered
/// by the regime's scheme (Weak [1/2,2/3], ModeratelyWeak [2/3,1),
/// Strong (1,2], VeryStrong [2,inf)) so neighbouring schemes can be compared
/// at shared breakpoints. Throws RegimeUnsupported for Noisy/AlphaOne,
/// AlphabetEmpty, or InvalidParameter.
SignalLayout build_layout(Regime regime, int users, std::uint32_t base, int levels,
                          const Rational& alpha);

/// Fault-injection hook: the first copy slot is re-pointed at a different
/// information digit. Throws InvalidParameter when the layout has no copies.
SignalLayout corrupt_copy_map(const SignalLayout& layout);

/// Checks tiling, copy-map and alphabet invariants; throws InvalidParameter.
void validate_layout(const SignalLayout& layout);

using Message = std::vector<Digit>;

/// Transmit signal for one user. Throws MessageMismatch when the message
/// length or any digit does not fit the layout.
QaryVector encode(const SignalLayout& layout, const Message& msg);

/// Unchecked placement of arbitrary per-variable values into span digits.
/// Used for the interference sum, whose digits run past the alphabet.
std::vector<Digit> place_digits(const SignalLayout& layout, std::span<const Digit> values);

ChannelParams params_for(const SignalLayout& layout, const Rational& alpha);

bool check_power(const ChannelParams& params, const SignalLayout& layout);

/// info_count * log_Q |alphabet|, qits per channel use (uncoded, o(M) = 0).
double symmetric_rate_qits(const SignalLayout& layout);

/// Treating interference as noise with Gaussian codebooks:
/// 1/2 log2(1 + SNR / (1 + (K-1) SNR^alpha)) bits per channel use.
double noisy_regime_rate(double snr, double alpha, int users);

/// Same rate with SNR given as log2 SNR, for SNRs that overflow a double.
double noisy_regime_rate_log2(double log2_snr, double alpha, int users);

} // namespace gdof
