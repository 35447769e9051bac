#pragma once

#include <cstdint>
#include <string_view>

#include "psg/core/rules.hpp"

namespace psg {

enum class RoundPhase { AwaitQuestion, AwaitReplies, AwaitDecisions, AwaitBeliefs, Revealed };

enum class RoundEventType {
    QuestionSubmitted,
    ReplySubmitted,
    ChoiceSubmitted,
    ReturnSubmitted,
    BeliefsSubmitted,
    GuessSubmitted,
};

struct RoundEvent {
    RoundEventType type;
    Slot slot = Slot::A;  // only meaningful for candidate events

    static RoundEvent question() { return {RoundEventType::QuestionSubmitted}; }
    static RoundEvent reply(Slot s) { return {RoundEventType::ReplySubmitted, s}; }
    static RoundEvent choice() { return {RoundEventType::ChoiceSubmitted}; }
    static RoundEvent return_decision(Slot s) { return {RoundEventType::ReturnSubmitted, s}; }
    static RoundEvent beliefs() { return {RoundEventType::BeliefsSubmitted}; }
    static RoundEvent guess(Slot s) { return {RoundEventType::GuessSubmitted, s}; }
};

std::string_view to_string(RoundPhase p) noexcept;
std::string_view to_string(RoundEventType t) noexcept;

// Phase plus which submissions of the current phase have already arrived.
// A value type: advance() returns a new progress and never mutates.
class RoundProgress {
public:
    RoundProgress() = default;

    RoundPhase phase() const noexcept { return phase_; }
    bool received(RoundEvent e) const noexcept;

    // Throws IllegalEvent for an event that is not legal in the current phase
    // or that duplicates an earlier submission.
    RoundProgress advance(RoundEvent e) const;
    bool accepts(RoundEvent e) const noexcept;

private:
    static std::uint32_t bit(RoundEvent e) noexcept;

    RoundPhase phase_ = RoundPhase::AwaitQuestion;
    std::uint32_t seen_ = 0;
};

// Convenience form over the bare phase enum for single-step events.
RoundPhase advance_phase(const RoundProgress& state, RoundEvent e);

}  // namespace psg
