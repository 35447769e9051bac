#include "psg/core/phase.hpp"

#include <string>

#include "psg/core/errors.hpp"

namespace psg {

std::string_view to_string(RoundPhase p) noexcept {
    switch (p) {
        case RoundPhase::AwaitQuestion: return "await_question";
        case RoundPhase::AwaitReplies: return "await_replies";
        case RoundPhase::AwaitDecisions: return "await_decisions";
        case RoundPhase::AwaitBeliefs: return "await_beliefs";
        case RoundPhase::Revealed: return "revealed";
    }
    return "revealed";
}

std::string_view to_string(RoundEventType t) noexcept {
    switch (t) {
        case RoundEventType::QuestionSubmitted: return "question";
        case RoundEventType::ReplySubmitted: return "reply";
        case RoundEventType::ChoiceSubmitted: return "choice";
        case RoundEventType::ReturnSubmitted: return "return";
        case RoundEventType::BeliefsSubmitted: return "beliefs";
        case RoundEventType::GuessSubmitted: return "guess";
    }
    return "unknown";
}

namespace {

RoundPhase phase_of(RoundEventType t) noexcept {
    switch (t) {
        case RoundEventType::QuestionSubmitted: return RoundPhase::AwaitQuestion;
        case RoundEventType::ReplySubmitted: return RoundPhase::AwaitReplies;
        case RoundEventType::ChoiceSubmitted:
        case RoundEventType::ReturnSubmitted: return RoundPhase::AwaitDecisions;
        case RoundEventType::BeliefsSubmitted:
        case RoundEventType::GuessSubmitted: return RoundPhase::AwaitBeliefs;
    }
    return RoundPhase::Revealed;
}

std::uint32_t event_bit(RoundEvent e) noexcept {
    const bool slotted = e.type == RoundEventType::ReplySubmitted || e.type == RoundEventType::ReturnSubmitted ||
                         e.type == RoundEventType::GuessSubmitted;
    return 1u << (static_cast<unsigned>(e.type) * 2 + (slotted && e.slot == Slot::B ? 1 : 0));
}

// Submissions required to leave each phase.
std::uint32_t required_bits(RoundPhase p) noexcept {
    const auto b = event_bit;
    switch (p) {
        case RoundPhase::AwaitQuestion: return b(RoundEvent::question());
        case RoundPhase::AwaitReplies: return b(RoundEvent::reply(Slot::A)) | b(RoundEvent::reply(Slot::B));
        case RoundPhase::AwaitDecisions:
            return b(RoundEvent::choice()) | b(RoundEvent::return_decision(Slot::A)) |
                   b(RoundEvent::return_decision(Slot::B));
        case RoundPhase::AwaitBeliefs:
            return b(RoundEvent::beliefs()) | b(RoundEvent::guess(Slot::A)) | b(RoundEvent::guess(Slot::B));
        case RoundPhase::Revealed: return 0;
    }
    return 0;
}

RoundPhase next(RoundPhase p) noexcept {
    switch (p) {
        case RoundPhase::AwaitQuestion: return RoundPhase::AwaitReplies;
        case RoundPhase::AwaitReplies: return RoundPhase::AwaitDecisions;
        case RoundPhase::AwaitDecisions: return RoundPhase::AwaitBeliefs;
        case RoundPhase::AwaitBeliefs:
        case RoundPhase::Revealed: return RoundPhase::Revealed;
    }
    return RoundPhase::Revealed;
}

}  // namespace

std::uint32_t RoundProgress::bit(RoundEvent e) noexcept {
    return event_bit(e);
}

bool RoundProgress::received(RoundEvent e) const noexcept {
    return phase_of(e.type) == phase_ ? (seen_ & bit(e)) != 0 : static_cast<int>(phase_of(e.type)) < static_cast<int>(phase_);
}

bool RoundProgress::accepts(RoundEvent e) const noexcept {
    return phase_of(e.type) == phase_ && (seen_ & bit(e)) == 0;
}

RoundProgress RoundProgress::advance(RoundEvent e) const {
    if (!accepts(e)) {
        throw IllegalEvent("event '" + std::string(to_string(e.type)) + "' not accepted in phase '" +
                           std::string(to_string(phase_)) + "'");
    }
    RoundProgress out = *this;
    out.seen_ |= bit(e);
    if (out.seen_ == required_bits(phase_)) {
        out.phase_ = next(phase_);
        out.seen_ = 0;
    }
    return out;
}

RoundPhase advance_phase(const RoundProgress& state, RoundEvent e) {
    return state.advance(e).phase();
}

}  // namespace psg
