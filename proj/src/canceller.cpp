#include "gdof/canceller.hpp"

#include "gdof/error.hpp"

#include <algorithm>
#include <sstream>

namespace gdof {

namespace {

struct Equation {
    int level;
    int desired;       // -1: known zero
    int interference;  // -1: known zero
};

int var_at(const SignalLayout& layout, int position)
{
    if (position < 0 || position >= layout.span) {
        return -1;
    }
    return layout.slot_var[static_cast<std::size_t>(position)];
}

} // namespace

SuccessiveCanceller::SuccessiveCanceller(const SignalLayout& layout, const ChannelParams& params)
    : SuccessiveCanceller(layout, params.shift, params.window)
{
}

SuccessiveCanceller::SuccessiveCanceller(const SignalLayout& layout, int shift, int window)
    : var_position_(layout.info_positions),
      base_(layout.base),
      alphabet_(layout.alphabet),
      window_(window),
      info_count_(layout.info_count())
{
    std::vector<Equation> eqs;
    for (int p = 0; p < window; ++p) {
        const Equation e{p, var_at(layout, p), var_at(layout, p - shift)};
        if (e.desired >= 0 || e.interference >= 0) {
            eqs.push_back(e);
        }
    }

    const auto n = static_cast<std::size_t>(info_count_);
    std::vector<char> known_d(n, 0);
    std::vector<char> known_s(n, 0);
    std::size_t resolved_d = 0;
    std::vector<CancelStep> all;

    while (resolved_d < n) {
        ++rounds_;
        std::vector<int> pick_d(n, -1);
        std::vector<int> pick_s(n, -1);
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            const auto& e = eqs[i];
            const bool open_d = e.desired >= 0 && !known_d[static_cast<std::size_t>(e.desired)];
            const bool open_s =
                e.interference >= 0 && !known_s[static_cast<std::size_t>(e.interference)];
            // eqs ascend in level, so later matches are higher levels.
            if (open_d && !open_s) {
                pick_d[static_cast<std::size_t>(e.desired)] = static_cast<int>(i);
            } else if (open_s && !open_d) {
                pick_s[static_cast<std::size_t>(e.interference)] = static_cast<int>(i);
            }
        }
        bool progress = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (pick_d[v] >= 0) {
                const auto& e = eqs[static_cast<std::size_t>(pick_d[v])];
                all.push_back({CancelStep::Target::Desired, static_cast<int>(v), e.level,
                               e.interference, rounds_});
                known_d[v] = 1;
                ++resolved_d;
                progress = true;
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (pick_s[v] >= 0) {
                const auto& e = eqs[static_cast<std::size_t>(pick_s[v])];
                all.push_back({CancelStep::Target::Interference, static_cast<int>(v), e.level,
                               e.desired, rounds_});
                known_s[v] = 1;
                progress = true;
            }
        }
        if (!progress) {
            break;
        }
    }
    if (resolved_d < n) {
        throw UndecodableLayout("successive cancellation stalled with " +
                                std::to_string(n - resolved_d) + " of " + std::to_string(n) +
                                " desired digits unresolved");
    }

    // Keep only the steps some desired digit depends on.
    std::vector<char> need_s(n, 0);
    std::vector<CancelStep> kept;
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
        if (it->target == CancelStep::Target::Desired) {
            kept.push_back(*it);
            if (it->other >= 0) {
                need_s[static_cast<std::size_t>(it->other)] = 1;
            }
        } else if (need_s[static_cast<std::size_t>(it->var)]) {
            kept.push_back(*it);
        }
    }
    std::reverse(kept.begin(), kept.end());
    steps_ = std::move(kept);
    rounds_ = steps_.empty() ? 0 : steps_.back().round;
}

bool SuccessiveCanceller::decode_into(std::span<const Digit> reduced, std::span<Digit> desired,
                                      std::span<Digit> interference) const
{
    const Digit q = base_;
    for (const auto& s : steps_) {
        const Digit r = reduced[static_cast<std::size_t>(s.level)];
        if (s.target == CancelStep::Target::Desired) {
            const Digit o = s.other >= 0 ? interference[static_cast<std::size_t>(s.other)] : 0;
            desired[static_cast<std::size_t>(s.var)] = (r + q - o) % q;
        } else {
            const Digit o = s.other >= 0 ? desired[static_cast<std::size_t>(s.other)] : 0;
            interference[static_cast<std::size_t>(s.var)] = (r + q - o) % q;
        }
    }
    bool ok = true;
    for (int v = 0; v < info_count_; ++v) {
        ok = ok && alphabet_.contains(desired[static_cast<std::size_t>(v)]);
    }
    return ok;
}

DecodeResult SuccessiveCanceller::decode(const QaryVector& reduced) const
{
    if (reduced.base() != base_) {
        throw InvalidParameter("decode: reduced signal has the wrong base");
    }
    std::vector<Digit> r(static_cast<std::size_t>(window_));
    for (int p = 0; p < window_; ++p) {
        r[static_cast<std::size_t>(p)] = reduced.digit_at(p);
    }
    DecodeResult out;
    out.message.assign(static_cast<std::size_t>(info_count_), 0);
    std::vector<Digit> s(static_cast<std::size_t>(info_count_), 0);
    out.out_of_alphabet = !decode_into(r, out.message, s);
    for (int v = 0; v < info_count_; ++v) {
        if (!alphabet_.contains(out.message[static_cast<std::size_t>(v)])) {
            out.flagged.push_back(v);
        }
    }
    return out;
}

std::vector<std::string> SuccessiveCanceller::trace(std::span<const Digit> reduced) const
{
    const auto n = static_cast<std::size_t>(info_count_);
    std::vector<Digit> d(n, 0);
    std::vector<Digit> s(n, 0);
    std::vector<std::string> lines;
    const Digit q = base_;
    for (const auto& st : steps_) {
        std::ostringstream line;
        const Digit r = reduced[static_cast<std::size_t>(st.level)];
        const bool want_d = st.target == CancelStep::Target::Desired;
        const char* self = want_d ? "X" : "S";
        const char* opp = want_d ? "S" : "X";
        const int pos = var_position_[static_cast<std::size_t>(st.var)];
        Digit o = 0;
        line << "round " << st.round << ": " << self << "[" << pos << "] = R[" << st.level
             << "]";
        if (st.other >= 0) {
            o = want_d ? s[static_cast<std::size_t>(st.other)] : d[static_cast<std::size_t>(st.other)];
            line << " - " << opp << "[" << var_position_[static_cast<std::size_t>(st.other)]
                 << "] = " << r << " - " << o;
        }
        const Digit v = (r + q - o) % q;
        line << " = " << v;
        (want_d ? d : s)[static_cast<std::size_t>(st.var)] = v;
        lines.push_back(line.str());
    }
    return lines;
}

DecodeResult decode(const SignalLayout& layout, const ChannelParams& params,
                    const QaryVector& reduced)
{
    return SuccessiveCanceller(layout, params).decode(reduced);
}

} // namespace gdof
