#include "psg/session/live.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>

#include "psg/agents/scripted.hpp"
#include "psg/core/errors.hpp"

namespace psg::session {

using nlohmann::json;

namespace {

const std::array<RoundEvent, 9> kEventOrder{
    RoundEvent::question(),           RoundEvent::reply(Slot::A),        RoundEvent::reply(Slot::B),
    RoundEvent::return_decision(Slot::A), RoundEvent::return_decision(Slot::B), RoundEvent::choice(),
    RoundEvent::beliefs(),            RoundEvent::guess(Slot::A),        RoundEvent::guess(Slot::B)};

bool selector_event(RoundEvent e) {
    return e.type == RoundEventType::QuestionSubmitted || e.type == RoundEventType::ChoiceSubmitted ||
           e.type == RoundEventType::BeliefsSubmitted;
}

std::string action_name(RoundEventType t) {
    switch (t) {
        case RoundEventType::QuestionSubmitted: return "question";
        case RoundEventType::ReplySubmitted: return "reply";
        case RoundEventType::ReturnSubmitted: return "return";
        case RoundEventType::ChoiceSubmitted: return "choice";
        case RoundEventType::BeliefsSubmitted: return "beliefs";
        case RoundEventType::GuessSubmitted: return "guess";
    }
    return "?";
}

std::optional<RoundEventType> action_type(const std::string& a) {
    for (auto t : {RoundEventType::QuestionSubmitted, RoundEventType::ReplySubmitted, RoundEventType::ReturnSubmitted,
                   RoundEventType::ChoiceSubmitted, RoundEventType::BeliefsSubmitted, RoundEventType::GuessSubmitted}) {
        if (action_name(t) == a) return t;
    }
    return std::nullopt;
}

std::string random_token() {
    static std::random_device rd;
    static const char* hex = "0123456789abcdef";
    std::string t;
    for (int i = 0; i < 32; ++i) t += hex[rd() % 16];
    return t;
}

int int_field(const json& p, const char* key) {
    if (!p.contains(key) || !p[key].is_number_integer()) throw InvalidValue(std::string("expected integer field '") + key + "'");
    return p[key].get<int>();
}

std::string text_field(const json& p) {
    if (!p.contains("text") || !p["text"].is_string()) throw InvalidValue("expected string field 'text'");
    return p["text"].get<std::string>();
}

SelectorChoice choice_field(const json& p) {
    if (!p.contains("choice") || !p["choice"].is_string()) throw InvalidValue("expected string field 'choice'");
    try {
        return choice_from_string(p["choice"].get<std::string>());
    } catch (const Error& e) {
        throw InvalidValue(e.what());
    }
}

}  // namespace

json timeout_default(RoundEvent e, int slider_value, const GameRules& rules) {
    switch (e.type) {
        case RoundEventType::QuestionSubmitted:
        case RoundEventType::ReplySubmitted: return {{"text", ""}};
        case RoundEventType::ReturnSubmitted: return {{"amount", std::clamp(slider_value, 0, rules.max_return())}};
        case RoundEventType::ChoiceSubmitted: return {{"choice", to_string(SelectorChoice::Keep)}};
        case RoundEventType::BeliefsSubmitted: return {{"a", rules.endowment}, {"b", rules.endowment}};
        case RoundEventType::GuessSubmitted: return {{"choice", to_string(SelectorChoice::Keep)}};
    }
    return json::object();
}

LiveSession::LiveSession(SessionConfig config, LiveOptions options)
    : config_(std::move(config)), options_(std::move(options)), root_(config_.seed), log_(config_.id) {
    validate(config_);
    if (config_.n_groups != 1) throw ConfigError("live sessions run exactly one group");
    if (config_.sync != matching::SyncMode::Barrier) throw ConfigError("live sessions use barrier synchronisation");

    const Seed gs = root_.derive("group", 0);
    Rng sched = gs.derive("schedule").engine();
    schedule_ = matching::build_schedule(config_.n_selectors, config_.n_candidates(), config_.n_rounds, sched);
    policies_ = options_.factory ? options_.factory(config_, 0, gs) : default_policies(config_, 0, gs, options_.gateway);

    for (int s = 0; s < config_.n_selectors; ++s) {
        const PlayerId id{0, Role::Selector, s, Kind::Human};
        seats_.push_back({id, id.label(), false, "", {}});
    }
    for (int c = 0; c < config_.n_candidates(); ++c) {
        const PlayerId id{0, Role::Candidate, c, policies_.candidate_kinds[static_cast<std::size_t>(c)]};
        seats_.push_back({id, id.label(), false, "", {}});
    }
    for (const auto& wanted : options_.human_seats) {
        std::string label = wanted;
        if (wanted == "selector" || wanted == "candidate") {
            // First unreserved seat of that role (humans only for candidates).
            const Role role = wanted == "selector" ? Role::Selector : Role::Candidate;
            const auto it = std::find_if(seats_.begin(), seats_.end(), [&](const Seat& s) {
                return !s.human && s.id.role == role && s.id.kind == Kind::Human;
            });
            if (it == seats_.end()) throw ConfigError("no free " + wanted + " seat");
            label = it->label;
        }
        const auto it = std::find_if(seats_.begin(), seats_.end(), [&](const Seat& s) { return s.label == label; });
        if (it == seats_.end()) throw ConfigError("no seat " + label);
        if (it->id.kind == Kind::Bot) throw ConfigError("seat " + label + " belongs to a bot");
        it->human = true;
    }

    json humans = json::array();
    for (const auto& s : seats_) {
        if (s.human) humans.push_back(s.label);
    }
    emit("session_start", Audience::Server, nullptr,
         {{"schema", kEventLogSchema},
          {"version", PSG_VERSION},
          {"config", to_json(config_)},
          {"config_hash", config_hash(config_)},
          {"seed", config_.seed},
          {"live", true},
          {"human_seats", humans}});
    json players = json::array();
    for (const auto& s : seats_) {
        json pj = player_json(s.id);
        pj["seated"] = s.human ? "human" : "agent";
        if (s.id.role == Role::Candidate && !policies_.bot_names[static_cast<std::size_t>(s.id.index)].empty()) {
            pj["bot_name"] = policies_.bot_names[static_cast<std::size_t>(s.id.index)];
        }
        players.push_back(pj);
    }
    emit("group_formed", Audience::Server, nullptr, {{"group", 0}, {"players", players}, {"seed", gs.path()}});
    json rounds = json::array();
    for (const auto& r : schedule_.rounds) {
        json rr = json::array();
        for (const auto& a : r.assignments) rr.push_back({a.selector, a.candidate_a, a.candidate_b});
        rounds.push_back(rr);
    }
    emit("schedule", Audience::Server, nullptr, {{"group", 0}, {"mode", "barrier"}, {"rounds", rounds}});

    std::lock_guard lock(mutex_);
    start_round();
    pump();
    persist();
}

Clock::time_point LiveSession::now() const { return options_.clock ? options_.clock() : Clock::now(); }

int LiveSession::timeout_for(RoundPhase p) const {
    switch (p) {
        case RoundPhase::AwaitQuestion: return config_.timeouts.question;
        case RoundPhase::AwaitReplies: return config_.timeouts.reply;
        case RoundPhase::AwaitDecisions: return config_.timeouts.decision;
        case RoundPhase::AwaitBeliefs: return std::max(config_.timeouts.beliefs, config_.timeouts.guess);
        case RoundPhase::Revealed: return 0;
    }
    return 0;
}

LiveSession::Seat& LiveSession::seat_by_token(const std::string& token) {
    for (auto& s : seats_) {
        if (s.human && !s.token.empty() && s.token == token) return s;
    }
    throw AuthError("unknown seat token");
}

const LiveSession::Seat& LiveSession::seat_by_token(const std::string& token) const {
    return const_cast<LiveSession*>(this)->seat_by_token(token);
}

LiveSession::Seat& LiveSession::seat_of(const PlayerId& p) {
    const auto offset = p.role == Role::Selector ? 0 : config_.n_selectors;
    return seats_[static_cast<std::size_t>(offset + p.index)];
}

bool LiveSession::is_human(const PlayerId& p) const { return const_cast<LiveSession*>(this)->seat_of(p).human; }

LiveSession::TriadRound* LiveSession::triad_of(const PlayerId& p) {
    for (auto& t : triads_) {
        if ((p.role == Role::Selector && t.selector == p.index) ||
            (p.role == Role::Candidate && (t.cand_a == p.index || t.cand_b == p.index))) {
            return &t;
        }
    }
    return nullptr;
}

const LiveSession::TriadRound* LiveSession::triad_of(const PlayerId& p) const {
    return const_cast<LiveSession*>(this)->triad_of(p);
}

std::optional<Slot> LiveSession::slot_of(const TriadRound& t, const PlayerId& p) {
    if (p.role != Role::Candidate) return std::nullopt;
    return p.index == t.cand_a ? Slot::A : Slot::B;
}

const json& LiveSession::emit(const std::string& type, Audience audience, const TriadRound* t, json fields) {
    if (t) {
        fields["group"] = 0;
        fields["round"] = round_;
        fields["selector"] = t->selector;
    }
    const json& e = log_.append(type, audience, std::move(fields));
    if (t && audience != Audience::Server) {
        const auto deliver = [&](const PlayerId& p) {
            auto& seat = seat_of(p);
            if (seat.human) seat.outbox.push_back(e);
        };
        if (audience == Audience::Selector || audience == Audience::Triad) deliver(t->rec.triad.selector);
        if (audience == Audience::CandidateA || audience == Audience::Candidates || audience == Audience::Triad) {
            deliver(t->rec.triad.candidate_a);
        }
        if (audience == Audience::CandidateB || audience == Audience::Candidates || audience == Audience::Triad) {
            deliver(t->rec.triad.candidate_b);
        }
    }
    changed_.notify_all();
    return e;
}

void LiveSession::start_round() {
    ++round_;
    triads_.clear();
    if (round_ >= config_.n_rounds) {
        for (const auto& s : seats_) {
            if (s.id.kind != Kind::Human) continue;
            const Seed bs = root_.derive("group", 0).derive("bonus").derive(s.label);
            Rng rng = bs.engine();
            try {
                const auto b = compute_bonus(records_, s.id, rng);
                emit("bonus", Audience::Server, nullptr,
                     {{"group", 0}, {"player", s.label}, {"rounds", b.rounds}, {"points", b.points}, {"amount", b.amount}, {"seed", bs.path()}});
            } catch (const InsufficientRounds&) {
                emit("bonus_skipped", Audience::Server, nullptr, {{"group", 0}, {"player", s.label}});
            }
        }
        emit("session_end", Audience::Server, nullptr, {{"rounds", records_.size()}});
        for (auto& s : seats_) {
            if (s.human) s.outbox.push_back({{"type", "session_end"}, {"session", config_.id}});
        }
        finished_ = true;
        changed_.notify_all();
        return;
    }
    const Seed gs = root_.derive("group", 0);
    const Seed rs = gs.derive("round", static_cast<std::uint64_t>(round_)).derive("attempt", 0);
    const auto& assignments = schedule_.rounds[static_cast<std::size_t>(round_)].assignments;
    triads_.reserve(assignments.size());
    for (const auto& a : assignments) {
        TriadRound t;
        t.selector = a.selector;
        t.cand_a = a.candidate_a;
        t.cand_b = a.candidate_b;
        t.rec.triad = make_triad({0, Role::Selector, a.selector, Kind::Human},
                                 {0, Role::Candidate, a.candidate_a, policies_.candidate_kinds[static_cast<std::size_t>(a.candidate_a)]},
                                 {0, Role::Candidate, a.candidate_b, policies_.candidate_kinds[static_cast<std::size_t>(a.candidate_b)]});
        t.rec.round_index = round_;
        t.rec.identity_shown = config_.transparent();
        t.sel_rng = rs.derive("selector", static_cast<std::uint64_t>(a.selector)).engine();
        t.rng_a = rs.derive("candidate", static_cast<std::uint64_t>(a.candidate_a)).engine();
        t.rng_b = rs.derive("candidate", static_cast<std::uint64_t>(a.candidate_b)).engine();
        Rng slider = rs.derive("slider", static_cast<std::uint64_t>(a.selector)).engine();
        t.slider_a = random_slider_init(slider, config_.rules);
        t.slider_b = random_slider_init(slider, config_.rules);
        triads_.push_back(std::move(t));
    }
    for (auto& t : triads_) {
        emit("round_start", Audience::Server, &t,
             {{"selector_id", player_json(t.rec.triad.selector)},
              {"candidate_a", player_json(t.rec.triad.candidate_a)},
              {"candidate_b", player_json(t.rec.triad.candidate_b)},
              {"seed", rs.path()},
              {"attempt", 0}});
        emit("slider_init", Audience::CandidateA, &t, {{"slot", "A"}, {"value", t.slider_a}});
        emit("slider_init", Audience::CandidateB, &t, {{"slot", "B"}, {"value", t.slider_b}});
        emit("round_open", Audience::Triad, &t, {{"n_rounds", config_.n_rounds}});
        enter_phase(t);
    }
}

void LiveSession::enter_phase(TriadRound& t) { t.deadline = now() + std::chrono::seconds(timeout_for(t.progress.phase())); }

void LiveSession::apply(TriadRound& t, RoundEvent e, const json& payload, bool timed_out) {
    const auto& rules = config_.rules;
    const RoundPhase before = t.progress.phase();
    if (!t.progress.accepts(e)) {
        throw IllegalEvent(action_name(e.type) + " is not accepted in phase " + std::string(to_string(before)));
    }
    json fields = json::object();
    if (timed_out) fields["timeout"] = true;
    const char* slot = e.slot == Slot::A ? "A" : "B";
    switch (e.type) {
        case RoundEventType::QuestionSubmitted: {
            t.rec.question = clamp_message(text_field(payload), rules.max_message_chars);
            t.progress = t.progress.advance(e);
            fields["text"] = t.rec.question;
            emit("question", Audience::Triad, &t, fields);
            break;
        }
        case RoundEventType::ReplySubmitted: {
            auto& target = e.slot == Slot::A ? t.rec.reply_a : t.rec.reply_b;
            target = clamp_message(text_field(payload), rules.max_message_chars);
            t.progress = t.progress.advance(e);
            fields["slot"] = slot;
            fields["text"] = target;
            emit("reply", Audience::Server, &t, fields);
            if (t.progress.phase() == RoundPhase::AwaitDecisions) {
                json reveal{{"question", t.rec.question}, {"reply_a", t.rec.reply_a}, {"reply_b", t.rec.reply_b}};
                if (config_.transparent()) {
                    reveal["kind_a"] = to_string(t.rec.triad.candidate_a.kind);
                    reveal["kind_b"] = to_string(t.rec.triad.candidate_b.kind);
                }
                emit("reveal", Audience::Triad, &t, reveal);
            }
            break;
        }
        case RoundEventType::ReturnSubmitted: {
            const int amount = ReturnDecision(int_field(payload, "amount"), rules).amount();
            (e.slot == Slot::A ? t.rec.return_a : t.rec.return_b) = amount;
            t.progress = t.progress.advance(e);
            fields["slot"] = slot;
            fields["amount"] = amount;
            emit("return", Audience::Server, &t, fields);
            break;
        }
        case RoundEventType::ChoiceSubmitted: {
            t.rec.choice = choice_field(payload);
            t.progress = t.progress.advance(e);
            fields["choice"] = to_string(t.rec.choice);
            emit("choice", Audience::Server, &t, fields);
            break;
        }
        case RoundEventType::BeliefsSubmitted: {
            t.rec.beliefs = make_belief_report(int_field(payload, "a"), int_field(payload, "b"), rules);
            t.progress = t.progress.advance(e);
            fields["a"] = t.rec.beliefs.expected_return_a;
            fields["b"] = t.rec.beliefs.expected_return_b;
            emit("beliefs", Audience::Server, &t, fields);
            break;
        }
        case RoundEventType::GuessSubmitted: {
            const auto g = choice_field(payload);
            t.rec.guesses[e.slot == Slot::A ? 0 : 1].guessed_choice = g;
            t.progress = t.progress.advance(e);
            fields["slot"] = slot;
            fields["choice"] = to_string(g);
            emit("guess", Audience::Server, &t, fields);
            break;
        }
    }
    if (t.progress.phase() == before) return;
    if (t.progress.phase() != RoundPhase::Revealed) {
        enter_phase(t);
        return;
    }
    t.rec.payoffs = settle_round(t.rec.choice, ReturnDecision(t.rec.return_a, rules), ReturnDecision(t.rec.return_b, rules), rules);
    emit("result", Audience::Triad, &t,
         {{"choice", to_string(t.rec.choice)},
          {"payoff_selector", t.rec.payoffs.selector},
          {"payoff_a", t.rec.payoffs.candidate_a},
          {"payoff_b", t.rec.payoffs.candidate_b}});
    emit("round_complete", Audience::Server, &t, {{"record", record_json(t.rec)}});
    policies_.selectors[static_cast<std::size_t>(t.selector)]->observe(
        {t.rec.choice, t.rec.return_a, t.rec.return_b, t.rec.triad.candidate_a.kind, t.rec.triad.candidate_b.kind});
    records_.push_back(t.rec);
    t.done = true;
    t.deadline.reset();
}

void LiveSession::pump() {
    if (error_) return;
    try {
        bool progressed = true;
        while (progressed && !finished_) {
            progressed = false;
            for (auto& t : triads_) {
                if (t.done) continue;
                for (const RoundEvent e : kEventOrder) {
                    if (!t.progress.accepts(e)) continue;
                    const PlayerId& actor = selector_event(e) ? t.rec.triad.selector : t.rec.triad.candidate(e.slot);
                    if (is_human(actor)) continue;
                    auto& sel = *policies_.selectors[static_cast<std::size_t>(t.selector)];
                    auto& cand = *policies_.candidates[static_cast<std::size_t>(e.slot == Slot::A ? t.cand_a : t.cand_b)];
                    Rng& crng = e.slot == Slot::A ? t.rng_a : t.rng_b;
                    const agents::CandidateContext ctx{round_, e.slot};
                    agents::SelectorView view;
                    view.round = round_;
                    view.question = t.rec.question;
                    view.reply_a = t.rec.reply_a;
                    view.reply_b = t.rec.reply_b;
                    view.true_a = t.rec.triad.candidate_a.kind;
                    view.true_b = t.rec.triad.candidate_b.kind;
                    if (config_.transparent()) {
                        view.shown_a = view.true_a;
                        view.shown_b = view.true_b;
                    }
                    json payload;
                    switch (e.type) {
                        case RoundEventType::QuestionSubmitted: payload = {{"text", sel.ask(round_, t.sel_rng)}}; break;
                        case RoundEventType::ReplySubmitted: payload = {{"text", cand.reply(t.rec.question, ctx, crng)}}; break;
                        case RoundEventType::ReturnSubmitted:
                            payload = {{"amount", cand.decide_return(t.rec.question, t.rec.reply(e.slot), ctx, crng).amount()}};
                            break;
                        case RoundEventType::ChoiceSubmitted: payload = {{"choice", to_string(sel.choose(view, t.sel_rng))}}; break;
                        case RoundEventType::BeliefsSubmitted: {
                            const auto r = sel.report_beliefs(view, t.sel_rng);
                            payload = {{"a", r.expected_return_a}, {"b", r.expected_return_b}};
                            break;
                        }
                        case RoundEventType::GuessSubmitted: {
                            const agents::GuessContext gc{round_, e.slot, t.rec.question, t.rec.reply_a, t.rec.reply_b};
                            payload = {{"choice", to_string(cand.guess_choice(gc, crng))}};
                            break;
                        }
                    }
                    apply(t, e, payload, false);
                    progressed = true;
                }
            }
            if (!triads_.empty() && std::all_of(triads_.begin(), triads_.end(), [](const TriadRound& t) { return t.done; })) {
                start_round();
                progressed = true;
            }
        }
    } catch (const Error& e) {
        error_ = e.what();
        log_.append("agent_error", Audience::Server, {{"round", round_}, {"message", e.what()}});
        for (auto& s : seats_) {
            if (s.human) s.outbox.push_back({{"type", "error"}, {"error", "AgentError"}, {"message", e.what()}});
        }
        changed_.notify_all();
    }
}

void LiveSession::persist() {
    if (options_.log_path.empty()) return;
    std::ofstream out(options_.log_path, std::ios::app);
    const auto& events = log_.events();
    for (; persisted_ < events.size(); ++persisted_) out << events[persisted_].dump() << '\n';
}

std::pair<std::string, std::string> LiveSession::join(const std::string& seat) {
    std::lock_guard lock(mutex_);
    for (auto& s : seats_) {
        if (!s.human || !s.token.empty()) continue;
        if (!seat.empty() && s.label != seat) continue;
        s.token = random_token();
        emit("join", Audience::Server, nullptr, {{"player", s.label}});
        persist();
        return {s.token, s.label};
    }
    throw AuthError(seat.empty() ? "no free human seat" : "seat " + seat + " is not free");
}

json LiveSession::submit(const std::string& token, const std::string& action, const json& payload) {
    std::lock_guard lock(mutex_);
    auto& seat = seat_by_token(token);
    const auto type = action_type(action);
    if (!type) throw InvalidValue("unknown action: " + action);
    const std::string key = payload.is_object() ? payload.value("idempotency_key", std::string()) : std::string();
    if (!key.empty() && seat.accepted_keys.count(key)) return view(seat);
    if (finished_) throw IllegalEvent("session finished");
    auto* t = triad_of(seat.id);
    if (!t || t->done) throw IllegalEvent(action + " outside an open round");
    const bool selector_action = selector_event({*type});
    if (selector_action != (seat.id.role == Role::Selector)) {
        throw IllegalEvent(action + " is not a " + std::string(to_string(seat.id.role)) + " action");
    }
    RoundEvent e{*type};
    if (auto s = slot_of(*t, seat.id)) e.slot = *s;
    apply(*t, e, payload, false);
    if (!key.empty()) seat.accepted_keys.insert(key);
    pump();
    persist();
    return view(seat);
}

void LiveSession::leave(const std::string& token) {
    std::lock_guard lock(mutex_);
    auto& seat = seat_by_token(token);
    seat.human = false;
    seat.token.clear();
    seat.outbox.clear();
    if (seat.id.role == Role::Candidate) {
        policies_.candidates[static_cast<std::size_t>(seat.id.index)] = std::make_unique<agents::ScriptedCandidate>(
            config_.human_candidates, agents::default_template_pack(), config_.rules);
    }
    emit("seat_replaced", Audience::Server, nullptr, {{"player", seat.label}, {"by", "scripted"}});
    pump();
    persist();
}

void LiveSession::tick() {
    std::lock_guard lock(mutex_);
    if (finished_ || error_) return;
    const auto t_now = now();
    for (auto& t : triads_) {
        if (t.done || !t.deadline || t_now < *t.deadline) continue;
        for (const RoundEvent e : kEventOrder) {
            if (!t.progress.accepts(e)) continue;
            const PlayerId& actor = selector_event(e) ? t.rec.triad.selector : t.rec.triad.candidate(e.slot);
            if (!is_human(actor)) continue;
            apply(t, e, timeout_default(e, e.slot == Slot::A ? t.slider_a : t.slider_b, config_.rules), true);
            if (t.done) break;
        }
    }
    pump();
    persist();
}

std::vector<json> LiveSession::drain(const std::string& token, std::chrono::milliseconds wait) {
    std::unique_lock lock(mutex_);
    auto* seat = &seat_by_token(token);
    if (seat->outbox.empty() && wait.count() > 0) {
        changed_.wait_for(lock, wait, [&] {
            seat = nullptr;
            for (auto& s : seats_) {
                if (s.human && s.token == token) seat = &s;
            }
            return !seat || !seat->outbox.empty();
        });
        if (!seat) throw AuthError("seat left");
    }
    std::vector<json> out(seat->outbox.begin(), seat->outbox.end());
    seat->outbox.clear();
    return out;
}

json LiveSession::state(const std::string& token) const {
    std::lock_guard lock(mutex_);
    return view(seat_by_token(token));
}

json LiveSession::view(const Seat& s) const {
    json v{{"type", "state"},
           {"session", config_.id},
           {"seat", s.label},
           {"role", to_string(s.id.role)},
           {"round", round_},
           {"n_rounds", config_.n_rounds},
           {"finished", finished_},
           {"pending", json::array()}};
    if (config_.composition == Composition::Hybrid) v["notice"] = "Some candidates could be bots.";
    if (error_) v["error"] = *error_;
    const auto* t = triad_of(s.id);
    if (finished_ || !t) return v;
    v["phase"] = to_string(t->progress.phase());
    const auto slot = slot_of(*t, s.id);
    if (slot) {
        v["slot"] = to_string(*slot);
        v["slider_init"] = *slot == Slot::A ? t->slider_a : t->slider_b;
    }
    if (t->progress.phase() != RoundPhase::AwaitQuestion) v["question"] = t->rec.question;
    if (slot && t->progress.received(RoundEvent::reply(*slot))) v["my_reply"] = t->rec.reply(*slot);
    const bool revealed = t->progress.phase() >= RoundPhase::AwaitDecisions;
    if (revealed) {
        v["reply_a"] = t->rec.reply_a;
        v["reply_b"] = t->rec.reply_b;
        if (config_.transparent()) {
            v["kind_a"] = to_string(t->rec.triad.candidate_a.kind);
            v["kind_b"] = to_string(t->rec.triad.candidate_b.kind);
        }
    }
    if (t->done) {
        v["result"] = {{"choice", to_string(t->rec.choice)},
                       {"payoff_selector", t->rec.payoffs.selector},
                       {"payoff_a", t->rec.payoffs.candidate_a},
                       {"payoff_b", t->rec.payoffs.candidate_b}};
    }
    for (const RoundEvent e : kEventOrder) {
        if (!t->progress.accepts(e)) continue;
        if (selector_event(e) ? s.id.role == Role::Selector : (slot && e.slot == *slot)) {
            v["pending"].push_back(action_name(e.type));
        }
    }
    return v;
}

bool LiveSession::finished() const {
    std::lock_guard lock(mutex_);
    return finished_;
}

std::optional<std::string> LiveSession::error() const {
    std::lock_guard lock(mutex_);
    return error_;
}

EventLog LiveSession::log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

}  // namespace psg::session
