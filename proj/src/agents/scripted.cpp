#include "psg/agents/scripted.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "psg/core/errors.hpp"

namespace psg::agents {

namespace {

constexpr const char* kDefaultPackJson = R"json({
  "id": "default",
  "questions": {
    "traits": [
      "What is your favorite color?",
      "What do you do for fun?",
      "Do you take risks?",
      "What do you think of green energy?",
      "Are you a morning person?",
      "What kind of music do you like?"
    ],
    "points": [
      "How many points will you return?",
      "Will you split the points equally?",
      "50/50?",
      "How much will you give me if I pick you?",
      "What share of the points do I get?"
    ],
    "reasons": [
      "Why should I choose you?",
      "Convince me that you are trustworthy.",
      "What makes you reliable?",
      "Give me a reason to pick you."
    ],
    "other": [
      "Hi there",
      "How is your day going?",
      "Anything to say?",
      ""
    ]
  },
  "replies": {
    "traits": [
      "I like blue, it feels calm.",
      "I enjoy hiking and cooking.",
      "I am careful with decisions.",
      "I think it matters a lot to me.",
      "I love reading in the evening."
    ],
    "points": [
      "I will be fair with you.",
      "You can count on me.",
      "I think sharing is right.",
      "Fair is fair."
    ],
    "reasons": [
      "I always keep my word.",
      "I am honest and I value trust.",
      "Pick me and you will not regret it.",
      "I treat people the way I want to be treated."
    ],
    "other": [
      "Hello!",
      "Doing well, thanks.",
      "Nice to meet you.",
      "Good luck to us both."
    ]
  },
  "filler": [
    "I believe cooperation makes everyone better off.",
    "Honesty has always mattered to me.",
    "I hope we can both do well in this game.",
    "Trust is something I take seriously.",
    "I would rather build a good partnership than win alone.",
    "Thanks for asking, I appreciate the question.",
    "I try to be fair in everything I do.",
    "Let us make this a good round for both of us."
  ],
  "promises": [
    "I will return {n} points.",
    "I'll send back {n} points to you.",
    "I promise to give you {n} points.",
    "You will get {n} points back from me."
  ]
})json";

std::map<QuestionCategory, std::vector<std::string>> category_map(const nlohmann::json& j) {
    std::map<QuestionCategory, std::vector<std::string>> out;
    for (const auto& [key, value] : j.items()) {
        out[question_category_from_string(key)] = value.get<std::vector<std::string>>();
    }
    return out;
}

const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
    static const std::string empty;
    if (v.empty()) return empty;
    return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool contains_any(const std::string& text, std::initializer_list<const char*> needles) {
    return std::any_of(needles.begin(), needles.end(),
                       [&](const char* n) { return text.find(n) != std::string::npos; });
}

std::string promise_kind_name(PromiseKind k) {
    switch (k) {
        case PromiseKind::None: return "none";
        case PromiseKind::Truthful: return "truthful";
        case PromiseKind::OverPromise: return "over_promise";
    }
    return "none";
}

PromiseKind promise_kind_from_name(const std::string& s) {
    if (s == "none") return PromiseKind::None;
    if (s == "truthful") return PromiseKind::Truthful;
    if (s == "over_promise") return PromiseKind::OverPromise;
    throw ConfigError("unknown promise policy: " + s);
}

}  // namespace

const TemplatePack& default_template_pack() {
    static const TemplatePack pack = template_pack_from_json(nlohmann::json::parse(kDefaultPackJson));
    return pack;
}

TemplatePack template_pack_from_json(const nlohmann::json& j) {
    TemplatePack p;
    p.id = j.value("id", "custom");
    p.questions = category_map(j.at("questions"));
    p.replies = category_map(j.at("replies"));
    p.filler = j.at("filler").get<std::vector<std::string>>();
    p.promises = j.at("promises").get<std::vector<std::string>>();
    for (const auto& t : p.promises) {
        if (t.find("{n}") == std::string::npos) throw ConfigError("promise template lacks {n}: " + t);
    }
    return p;
}

TemplatePack load_template_pack(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open template pack: " + path);
    try {
        return template_pack_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

QuestionCategory heuristic_question_category(const std::string& question) {
    const std::string q = lower(question);
    if (contains_any(q, {"point", "return", "split", "50", "share", "how much", "give me", "%"})) {
        return QuestionCategory::Points;
    }
    if (contains_any(q, {"why", "convince", "trust", "reason", "prove", "reliable", "choose you", "pick you"})) {
        return QuestionCategory::Reasons;
    }
    if (contains_any(q, {"you", "your"})) return QuestionCategory::Traits;
    return QuestionCategory::Other;
}

ScriptedCandidateParams human_candidate_defaults() {
    return {};
}

ScriptedCandidateParams bot_candidate_defaults() {
    ScriptedCandidateParams p;
    p.return_mean = 19.1;
    p.return_sd = 3.37;
    p.promise = {PromiseKind::Truthful, 0};
    p.promise_rate = 0.8;
    p.message_length_mean = 120.43;
    p.message_length_sd = 25.0;
    return p;
}

nlohmann::json to_json(const ScriptedCandidateParams& p) {
    return {{"return_mean", p.return_mean},
            {"return_sd", p.return_sd},
            {"promise_policy", promise_kind_name(p.promise.kind)},
            {"promise_delta", p.promise.delta},
            {"promise_rate", p.promise_rate},
            {"message_length_mean", p.message_length_mean},
            {"message_length_sd", p.message_length_sd},
            {"template_set", p.template_set}};
}

ScriptedCandidateParams scripted_params_from_json(const nlohmann::json& j, ScriptedCandidateParams base) {
    base.return_mean = j.value("return_mean", base.return_mean);
    base.return_sd = j.value("return_sd", base.return_sd);
    if (j.contains("promise_policy")) base.promise.kind = promise_kind_from_name(j.at("promise_policy").get<std::string>());
    base.promise.delta = j.value("promise_delta", base.promise.delta);
    base.promise_rate = j.value("promise_rate", base.promise_rate);
    base.message_length_mean = j.value("message_length_mean", base.message_length_mean);
    base.message_length_sd = j.value("message_length_sd", base.message_length_sd);
    base.template_set = j.value("template_set", base.template_set);
    if (base.return_sd < 0 || base.message_length_sd < 0) throw ConfigError("standard deviations must be >= 0");
    if (base.promise_rate < 0 || base.promise_rate > 1) throw ConfigError("promise_rate must be in [0,1]");
    return base;
}

ScriptedTurn scripted_reply_and_return(const ScriptedCandidateParams& params, const TemplatePack& pack,
                                       QuestionCategory question_kind, Rng& rng, const GameRules& rules) {
    const int cap = rules.max_return();
    const double raw = params.return_mean + params.return_sd * standard_normal(rng);
    const int amount = static_cast<int>(std::lround(std::clamp(raw, 0.0, static_cast<double>(cap))));
    const double target_raw = params.message_length_mean + params.message_length_sd * standard_normal(rng);
    const auto target = static_cast<std::size_t>(std::max(0L, std::lround(target_raw)));

    ScriptedTurn turn{"", ReturnDecision(amount, rules), std::nullopt};
    std::string text;
    if (params.promise.kind != PromiseKind::None && uniform01(rng) < params.promise_rate) {
        const int promised = params.promise.kind == PromiseKind::Truthful
                                 ? amount
                                 : std::clamp(amount + params.promise.delta, 0, cap);
        std::string sentence = pick(pack.promises, rng);
        sentence.replace(sentence.find("{n}"), 3, std::to_string(promised));
        text = sentence;
        turn.promised = promised;
    }
    const std::size_t protected_len = message_length(text);

    const auto replies = pack.replies.find(question_kind);
    if (replies != pack.replies.end() && !replies->second.empty() && message_length(text) < target) {
        text += (text.empty() ? "" : " ") + pick(replies->second, rng);
    }
    while (message_length(text) < target && !pack.filler.empty()) {
        text += (text.empty() ? "" : " ") + pick(pack.filler, rng);
    }
    text = clamp_message(text, std::max(target, protected_len));
    while (!text.empty() && text.back() == ' ') text.pop_back();
    turn.text = clamp_message(text, rules.max_message_chars);
    return turn;
}

ScriptedCandidate::ScriptedCandidate(ScriptedCandidateParams params, const TemplatePack& pack, GameRules rules)
    : params_(std::move(params)), pack_(pack), rules_(rules) {}

std::string ScriptedCandidate::reply(const std::string& question, const CandidateContext&, Rng& rng) {
    pending_ = scripted_reply_and_return(params_, pack_, heuristic_question_category(question), rng, rules_);
    return pending_->text;
}

ReturnDecision ScriptedCandidate::decide_return(const std::string& question, const std::string&,
                                                const CandidateContext& ctx, Rng& rng) {
    if (!pending_) reply(question, ctx, rng);
    const ReturnDecision d = pending_->decision;
    pending_.reset();
    return d;
}

std::string scripted_question(const TemplatePack& pack, const QuestionMix& mix, Rng& rng) {
    const double total = mix.traits + mix.points + mix.reasons + mix.other;
    double u = uniform01(rng) * total;
    QuestionCategory cat = QuestionCategory::Other;
    if ((u -= mix.traits) < 0) {
        cat = QuestionCategory::Traits;
    } else if ((u -= mix.points) < 0) {
        cat = QuestionCategory::Points;
    } else if ((u -= mix.reasons) < 0) {
        cat = QuestionCategory::Reasons;
    }
    const auto it = pack.questions.find(cat);
    if (it == pack.questions.end()) return "";
    return pick(it->second, rng);
}

namespace {

nlohmann::json mix_to_json(const QuestionMix& m) {
    return {{"traits", m.traits}, {"points", m.points}, {"reasons", m.reasons}, {"other", m.other}};
}

}  // namespace

nlohmann::json to_json(const LearningSelectorParams& p) {
    const auto& m = p.model;
    return {{"model", std::string(model::to_string(p.model_kind))},
            {"alpha_hh", m.alpha_hh},
            {"alpha_hb", m.alpha_hb},
            {"alpha_bh", m.alpha_bh},
            {"alpha_bb", m.alpha_bb},
            {"b0_h", m.b0_h},
            {"b0_b", m.b0_b},
            {"sigma", m.sigma},
            {"beta", p.beta},
            {"keep_value", p.keep_value},
            {"p_correct", p.p_correct},
            {"questions", mix_to_json(p.questions)}};
}

LearningSelectorParams learning_params_from_json(const nlohmann::json& j, LearningSelectorParams base) {
    if (j.contains("model")) base.model_kind = model::model_from_string(j.at("model").get<std::string>());
    auto& m = base.model;
    m.alpha_hh = j.value("alpha_hh", m.alpha_hh);
    m.alpha_hb = j.value("alpha_hb", m.alpha_hb);
    m.alpha_bh = j.value("alpha_bh", m.alpha_bh);
    m.alpha_bb = j.value("alpha_bb", m.alpha_bb);
    m.b0_h = j.value("b0_h", m.b0_h);
    m.b0_b = j.value("b0_b", m.b0_b);
    m.sigma = j.value("sigma", m.sigma);
    base.beta = j.value("beta", base.beta);
    base.keep_value = j.value("keep_value", base.keep_value);
    base.p_correct = j.value("p_correct", base.p_correct);
    if (j.contains("questions")) {
        const auto& q = j.at("questions");
        base.questions = {q.value("traits", base.questions.traits), q.value("points", base.questions.points),
                          q.value("reasons", base.questions.reasons), q.value("other", base.questions.other)};
    }
    try {
        model::validate(base.model, base.model_kind);
    } catch (const InvalidValue& e) {
        throw ConfigError(std::string("selector model: ") + e.what());
    }
    if (base.beta < 0) throw ConfigError("beta must be >= 0");
    if (base.p_correct < 0.5 || base.p_correct > 1.0) throw ConfigError("p_correct must be in [0.5, 1]");
    return base;
}

LearningSelector::LearningSelector(LearningSelectorParams params, const TemplatePack& pack, GameRules rules)
    : params_(std::move(params)), pack_(pack), rules_(rules), state_(model::initial_state(params_.model)) {
    model::validate(params_.model, params_.model_kind);
    if (params_.beta < 0) throw InvalidValue("beta must be >= 0");
}

std::string LearningSelector::ask(int, Rng& rng) {
    return scripted_question(pack_, params_.questions, rng);
}

Kind LearningSelector::perceive(Kind truth, const std::optional<Kind>& shown, Rng& rng) const {
    if (shown) return *shown;
    if (uniform01(rng) < params_.p_correct) return truth;
    return truth == Kind::Human ? Kind::Bot : Kind::Human;
}

SelectorChoice LearningSelector::choose(const SelectorView& view, Rng& rng) {
    const Kind pa = perceive(view.true_a, view.shown_a, rng);
    const Kind pb = perceive(view.true_b, view.shown_b, rng);
    return softmax_choose(state_.about(pa), state_.about(pb), params_.keep_value, params_.beta, rng);
}

BeliefReport LearningSelector::report_beliefs(const SelectorView& view, Rng& rng) {
    const auto noisy = [&](Kind k) {
        const double v = state_.about(k) + params_.model.sigma * standard_normal(rng);
        return static_cast<int>(std::lround(std::clamp(v, 0.0, static_cast<double>(rules_.max_return()))));
    };
    const int a = noisy(view.true_a);
    const int b = noisy(view.true_b);
    return make_belief_report(a, b, rules_);
}

void LearningSelector::observe(const RoundFeedback& feedback) {
    model::ObservationStep step;
    if (feedback.choice == SelectorChoice::InvestA) {
        step.selected = feedback.true_a;
        step.observed_return = feedback.return_a;
    } else if (feedback.choice == SelectorChoice::InvestB) {
        step.selected = feedback.true_b;
        step.observed_return = feedback.return_b;
    }
    state_ = model::update(params_.model_kind, state_, step, params_.model);
}

RuleBasedSelector::RuleBasedSelector(const TemplatePack& pack, QuestionMix mix, GameRules rules)
    : pack_(pack), mix_(mix), rules_(rules) {}

std::string RuleBasedSelector::ask(int, Rng& rng) {
    return scripted_question(pack_, mix_, rng);
}

SelectorChoice RuleBasedSelector::choose(const SelectorView& view, Rng& rng) {
    return rule_based_choose(view.reply_a, view.reply_b, rng);
}

BeliefReport RuleBasedSelector::report_beliefs(const SelectorView&, Rng&) {
    return make_belief_report(rules_.endowment, rules_.endowment, rules_);
}

}  // namespace psg::agents
