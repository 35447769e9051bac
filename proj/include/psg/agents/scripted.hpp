#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psg/agents/policies.hpp"
#include "psg/model/belief.hpp"

namespace psg::agents {

// Message material for scripted agents. Promise templates hold "{n}" where
// the promised amount goes; nothing else in the pack mentions numbers.
struct TemplatePack {
    std::string id = "default";
    std::map<QuestionCategory, std::vector<std::string>> questions;
    std::map<QuestionCategory, std::vector<std::string>> replies;
    std::vector<std::string> filler;
    std::vector<std::string> promises;
};

const TemplatePack& default_template_pack();
TemplatePack template_pack_from_json(const nlohmann::json& j);
TemplatePack load_template_pack(const std::string& path);

// Offline keyword heuristic used by scripted candidates to pick a reply style.
QuestionCategory heuristic_question_category(const std::string& question);

enum class PromiseKind { None, Truthful, OverPromise };

struct PromisePolicy {
    PromiseKind kind = PromiseKind::None;
    int delta = 0;
};

struct ScriptedCandidateParams {
    double return_mean = 11.38;
    double return_sd = 6.48;
    PromisePolicy promise{PromiseKind::OverPromise, 4};
    double promise_rate = 0.5;  // probability that a reply carries a promise
    double message_length_mean = 47.63;
    double message_length_sd = 20.0;
    std::string template_set = "default";
};

// Human stand-in: lower, noisier returns, short messages, over-promising.
ScriptedCandidateParams human_candidate_defaults();
// Bot stand-in: high, stable returns, long messages, promises kept.
ScriptedCandidateParams bot_candidate_defaults();

nlohmann::json to_json(const ScriptedCandidateParams& p);
ScriptedCandidateParams scripted_params_from_json(const nlohmann::json& j, ScriptedCandidateParams base);

struct ScriptedTurn {
    std::string text;
    ReturnDecision decision{0};
    std::optional<int> promised;
};

// Return ~ round(clip(N(mean, sd), 0, 30)); message assembled from templates
// toward a N(length_mean, length_sd) character target. A promise, when
// made, leads the message so truncation never removes it.
ScriptedTurn scripted_reply_and_return(const ScriptedCandidateParams& params, const TemplatePack& pack,
                                       QuestionCategory question_kind, Rng& rng,
                                       const GameRules& rules = kDefaultRules);

class ScriptedCandidate final : public CandidatePolicy {
public:
    ScriptedCandidate(ScriptedCandidateParams params, const TemplatePack& pack, GameRules rules = kDefaultRules);

    std::string reply(const std::string& question, const CandidateContext& ctx, Rng& rng) override;
    ReturnDecision decide_return(const std::string& question, const std::string& own_reply,
                                 const CandidateContext& ctx, Rng& rng) override;

    const ScriptedCandidateParams& params() const noexcept { return params_; }

private:
    ScriptedCandidateParams params_;
    TemplatePack pack_;
    GameRules rules_;
    std::optional<ScriptedTurn> pending_;
};

struct QuestionMix {
    double traits = 0.35;
    double points = 0.35;
    double reasons = 0.2;
    double other = 0.1;
};

std::string scripted_question(const TemplatePack& pack, const QuestionMix& mix, Rng& rng);

struct LearningSelectorParams {
    model::ModelParams model;
    model::ModelKind model_kind = model::ModelKind::M0;
    double beta = 0.5;
    double keep_value = 10.0;
    // Opaque sessions: probability that a candidate's type is perceived correctly.
    double p_correct = 0.5;
    QuestionMix questions;
};

nlohmann::json to_json(const LearningSelectorParams& p);
LearningSelectorParams learning_params_from_json(const nlohmann::json& j, LearningSelectorParams base);

// Selector driven by the belief model. Beliefs are read before the round's
// update; reports are the type belief plus N(0, sigma) noise, rounded and
// clipped to the slider range. Updates and reports follow the true type of
// each candidate (misattribution lives in the cross rates); the choice uses
// the shown type when disclosed and a noisy perception otherwise.
class LearningSelector final : public SelectorPolicy {
public:
    LearningSelector(LearningSelectorParams params, const TemplatePack& pack, GameRules rules = kDefaultRules);

    std::string ask(int round, Rng& rng) override;
    SelectorChoice choose(const SelectorView& view, Rng& rng) override;
    BeliefReport report_beliefs(const SelectorView& view, Rng& rng) override;
    void observe(const RoundFeedback& feedback) override;

    const model::BeliefState& beliefs() const noexcept { return state_; }

private:
    Kind perceive(Kind truth, const std::optional<Kind>& shown, Rng& rng) const;

    LearningSelectorParams params_;
    TemplatePack pack_;
    GameRules rules_;
    model::BeliefState state_;
};

// Longer-reply baseline selector. Reports the keep value for both
// candidates since it holds no beliefs.
class RuleBasedSelector final : public SelectorPolicy {
public:
    explicit RuleBasedSelector(const TemplatePack& pack, QuestionMix mix = {}, GameRules rules = kDefaultRules);

    std::string ask(int round, Rng& rng) override;
    SelectorChoice choose(const SelectorView& view, Rng& rng) override;
    BeliefReport report_beliefs(const SelectorView& view, Rng& rng) override;

private:
    TemplatePack pack_;
    QuestionMix mix_;
    GameRules rules_;
};

}  // namespace psg::agents
