#include "psg/session/simulation.hpp"

#include <algorithm>
#include <map>

#include "psg/agents/scripted.hpp"
#include "psg/core/errors.hpp"
#include "psg/core/phase.hpp"
#include "psg/matching/schedule.hpp"

namespace psg::session {

using nlohmann::json;

namespace {

const agents::TemplatePack& pack_for(const SessionConfig& config) {
    static std::map<std::string, agents::TemplatePack> cache;
    if (config.template_pack.empty()) return agents::default_template_pack();
    auto it = cache.find(config.template_pack);
    if (it == cache.end()) it = cache.emplace(config.template_pack, agents::load_template_pack(config.template_pack)).first;
    return it->second;
}

}  // namespace

GroupPolicies default_policies(const SessionConfig& config, int group, const Seed& group_seed,
                               std::shared_ptr<llm::Gateway> gateway) {
    const auto& pack = pack_for(config);
    GroupPolicies p;
    for (int s = 0; s < config.n_selectors; ++s) {
        if (config.selector_agent == SelectorAgent::RuleBased) {
            p.selectors.push_back(std::make_unique<agents::RuleBasedSelector>(pack, config.selectors.questions, config.rules));
        } else {
            p.selectors.push_back(std::make_unique<agents::LearningSelector>(config.selectors, pack, config.rules));
        }
    }

    p.candidate_kinds.assign(static_cast<std::size_t>(config.n_human_candidates), Kind::Human);
    p.candidate_kinds.insert(p.candidate_kinds.end(), static_cast<std::size_t>(config.n_bot_candidates), Kind::Bot);
    Rng seating = group_seed.derive("seating").engine();
    for (std::size_t i = p.candidate_kinds.size(); i > 1; --i) {
        std::swap(p.candidate_kinds[i - 1], p.candidate_kinds[static_cast<std::size_t>(uniform_int(seating, 0, int(i) - 1))]);
    }

    std::vector<agents::BotSpec> bots;
    if (config.n_bot_candidates > 0) {
        const auto roster = config.bot_roster.empty() ? agents::default_bot_roster() : agents::load_bot_roster(config.bot_roster);
        Rng draw = group_seed.derive("bots").engine();
        bots = agents::sample_bots(roster, config.n_bot_candidates, draw);
        if (config.bot_backend == BotBackend::Llm && !gateway) {
            throw ConfigError("the llm bot backend needs a gateway (fixtures or live endpoint)");
        }
    }
    std::size_t next_bot = 0;
    for (Kind k : p.candidate_kinds) {
        if (k == Kind::Human) {
            p.candidates.push_back(std::make_unique<agents::ScriptedCandidate>(config.human_candidates, pack, config.rules));
            p.bot_names.emplace_back();
            continue;
        }
        const auto& spec = bots[next_bot++];
        if (config.bot_backend == BotBackend::Llm) {
            p.candidates.push_back(std::make_unique<agents::LlmBotCandidate>(spec, gateway, config.bot_profile, config.rules));
        } else {
            p.candidates.push_back(std::make_unique<agents::ScriptedCandidate>(config.bot_candidates, pack, config.rules));
        }
        p.bot_names.push_back(spec.name);
    }
    (void)group;
    return p;
}

namespace {

struct GroupState {
    Seed seed;
    GroupPolicies policies;
    std::vector<int> rounds_played;  // per selector
};

class Runner {
public:
    Runner(const SessionConfig& config, EventLog& log) : config_(config), log_(log) {}

    void play(int g, GroupState& state, int round, int selector, int cand_a, int cand_b) {
        for (int attempt = 0;; ++attempt) {
            try {
                play_once(g, state, round, selector, cand_a, cand_b, attempt);
                return;
            } catch (const GatewayError& e) {
                log_.append("round_aborted", Audience::Server,
                            {{"group", g}, {"round", round}, {"selector", selector}, {"attempt", attempt}, {"reason", e.what()}});
                if (attempt >= config_.round_retries) {
                    throw GatewayError("group " + std::to_string(g) + " round " + std::to_string(round) + " selector " +
                                       std::to_string(selector) + ": " + e.what());
                }
            }
        }
    }

private:
    PlayerId candidate_id(int g, const GroupState& s, int c) const {
        return {g, Role::Candidate, c, s.policies.candidate_kinds[static_cast<std::size_t>(c)]};
    }

    void play_once(int g, GroupState& state, int round, int selector, int cand_a, int cand_b, int attempt) {
        const auto& rules = config_.rules;
        const Triad triad = make_triad({g, Role::Selector, selector, Kind::Human}, candidate_id(g, state, cand_a),
                                       candidate_id(g, state, cand_b));
        const Seed rs = state.seed.derive("round", static_cast<std::uint64_t>(round)).derive("attempt", static_cast<std::uint64_t>(attempt));
        Rng sel_rng = rs.derive("selector", static_cast<std::uint64_t>(selector)).engine();
        Rng rng_a = rs.derive("candidate", static_cast<std::uint64_t>(cand_a)).engine();
        Rng rng_b = rs.derive("candidate", static_cast<std::uint64_t>(cand_b)).engine();
        Rng slider_rng = rs.derive("slider", static_cast<std::uint64_t>(selector)).engine();

        auto& sel = *state.policies.selectors[static_cast<std::size_t>(selector)];
        auto& pa = *state.policies.candidates[static_cast<std::size_t>(cand_a)];
        auto& pb = *state.policies.candidates[static_cast<std::size_t>(cand_b)];
        const json where{{"group", g}, {"round", round}, {"selector", selector}};
        const auto with = [&](json extra) {
            json j = where;
            j.update(extra);
            return j;
        };

        RoundProgress progress;
        const auto step = [&](RoundEvent e) { progress = progress.advance(e); };

        log_.append("round_start", Audience::Server,
                    with({{"selector_id", player_json(triad.selector)},
                          {"candidate_a", player_json(triad.candidate_a)},
                          {"candidate_b", player_json(triad.candidate_b)},
                          {"seed", rs.path()},
                          {"attempt", attempt}}));
        const int slider_a = random_slider_init(slider_rng, rules);
        const int slider_b = random_slider_init(slider_rng, rules);
        log_.append("slider_init", Audience::CandidateA, with({{"slot", "A"}, {"value", slider_a}}));
        log_.append("slider_init", Audience::CandidateB, with({{"slot", "B"}, {"value", slider_b}}));

        RoundRecord rec;
        rec.triad = triad;
        rec.round_index = round;
        rec.identity_shown = config_.transparent();
        rec.question = clamp_message(sel.ask(round, sel_rng), rules.max_message_chars);
        step(RoundEvent::question());
        log_.append("question", Audience::Triad, with({{"text", rec.question}}));

        const agents::CandidateContext ctx_a{round, Slot::A}, ctx_b{round, Slot::B};
        rec.reply_a = clamp_message(pa.reply(rec.question, ctx_a, rng_a), rules.max_message_chars);
        step(RoundEvent::reply(Slot::A));
        log_.append("reply", Audience::Server, with({{"slot", "A"}, {"text", rec.reply_a}}));
        rec.reply_b = clamp_message(pb.reply(rec.question, ctx_b, rng_b), rules.max_message_chars);
        step(RoundEvent::reply(Slot::B));
        log_.append("reply", Audience::Server, with({{"slot", "B"}, {"text", rec.reply_b}}));

        json reveal = with({{"question", rec.question}, {"reply_a", rec.reply_a}, {"reply_b", rec.reply_b}});
        if (config_.transparent()) {
            reveal["kind_a"] = to_string(triad.candidate_a.kind);
            reveal["kind_b"] = to_string(triad.candidate_b.kind);
        }
        log_.append("reveal", Audience::Triad, reveal);

        rec.return_a = pa.decide_return(rec.question, rec.reply_a, ctx_a, rng_a).amount();
        step(RoundEvent::return_decision(Slot::A));
        log_.append("return", Audience::Server, with({{"slot", "A"}, {"amount", rec.return_a}}));
        rec.return_b = pb.decide_return(rec.question, rec.reply_b, ctx_b, rng_b).amount();
        step(RoundEvent::return_decision(Slot::B));
        log_.append("return", Audience::Server, with({{"slot", "B"}, {"amount", rec.return_b}}));

        agents::SelectorView view;
        view.round = round;
        view.question = rec.question;
        view.reply_a = rec.reply_a;
        view.reply_b = rec.reply_b;
        view.true_a = triad.candidate_a.kind;
        view.true_b = triad.candidate_b.kind;
        if (config_.transparent()) {
            view.shown_a = view.true_a;
            view.shown_b = view.true_b;
        }
        rec.choice = sel.choose(view, sel_rng);
        step(RoundEvent::choice());
        log_.append("choice", Audience::Server, with({{"choice", to_string(rec.choice)}}));

        const auto report = sel.report_beliefs(view, sel_rng);
        rec.beliefs = make_belief_report(report.expected_return_a, report.expected_return_b, rules);
        step(RoundEvent::beliefs());
        log_.append("beliefs", Audience::Server, with({{"a", rec.beliefs.expected_return_a}, {"b", rec.beliefs.expected_return_b}}));

        const agents::GuessContext gc_a{round, Slot::A, rec.question, rec.reply_a, rec.reply_b};
        const agents::GuessContext gc_b{round, Slot::B, rec.question, rec.reply_a, rec.reply_b};
        rec.guesses[0].guessed_choice = pa.guess_choice(gc_a, rng_a);
        step(RoundEvent::guess(Slot::A));
        log_.append("guess", Audience::Server, with({{"slot", "A"}, {"choice", to_string(rec.guesses[0].guessed_choice)}}));
        rec.guesses[1].guessed_choice = pb.guess_choice(gc_b, rng_b);
        step(RoundEvent::guess(Slot::B));
        log_.append("guess", Audience::Server, with({{"slot", "B"}, {"choice", to_string(rec.guesses[1].guessed_choice)}}));

        rec.payoffs = settle_round(rec.choice, ReturnDecision(rec.return_a, rules), ReturnDecision(rec.return_b, rules), rules);
        log_.append("result", Audience::Triad,
                    with({{"choice", to_string(rec.choice)},
                          {"payoff_selector", rec.payoffs.selector},
                          {"payoff_a", rec.payoffs.candidate_a},
                          {"payoff_b", rec.payoffs.candidate_b}}));
        log_.append("round_complete", Audience::Server, with({{"record", record_json(rec)}}));
        sel.observe({rec.choice, rec.return_a, rec.return_b, view.true_a, view.true_b});
        records_.push_back(std::move(rec));
    }

public:
    std::vector<RoundRecord> records_;

private:
    const SessionConfig& config_;
    EventLog& log_;
};

}  // namespace

EventLog run_simulation(const SessionConfig& config, const SimulationOptions& options) {
    validate(config);
    const Seed root(config.seed);
    const int n_cand = config.n_candidates();

    // Feasibility first: nothing is logged if any group cannot be scheduled.
    std::vector<matching::Schedule> schedules;
    if (config.sync == matching::SyncMode::Barrier) {
        for (int g = 0; g < config.n_groups; ++g) {
            Rng rng = root.derive("group", static_cast<std::uint64_t>(g)).derive("schedule").engine();
            schedules.push_back(matching::build_schedule(config.n_selectors, n_cand, config.n_rounds, rng));
        }
    } else if (config.n_rounds > n_cand * (n_cand - 1) / 2) {
        throw Infeasible("pool mode: " + std::to_string(config.n_rounds) + " rounds exceed the " +
                         std::to_string(n_cand * (n_cand - 1) / 2) + " distinct candidate pairs");
    }

    std::vector<GroupState> groups;
    for (int g = 0; g < config.n_groups; ++g) {
        const Seed gs = root.derive("group", static_cast<std::uint64_t>(g));
        GroupState s{gs, options.factory ? options.factory(config, g, gs) : default_policies(config, g, gs, options.gateway),
                     std::vector<int>(static_cast<std::size_t>(config.n_selectors), 0)};
        if (s.policies.selectors.size() != static_cast<std::size_t>(config.n_selectors) ||
            s.policies.candidates.size() != static_cast<std::size_t>(n_cand) ||
            s.policies.candidate_kinds.size() != static_cast<std::size_t>(n_cand)) {
            throw ConfigError("policy factory returned the wrong number of seats");
        }
        groups.push_back(std::move(s));
    }

    EventLog log(config.id);
    log.append("session_start", Audience::Server,
               {{"schema", kEventLogSchema},
                {"version", PSG_VERSION},
                {"config", to_json(config)},
                {"config_hash", config_hash(config)},
                {"seed", config.seed}});
    for (int g = 0; g < config.n_groups; ++g) {
        const auto& p = groups[static_cast<std::size_t>(g)].policies;
        json players = json::array();
        for (int s = 0; s < config.n_selectors; ++s) players.push_back(player_json({g, Role::Selector, s, Kind::Human}));
        for (int c = 0; c < n_cand; ++c) {
            json pj = player_json({g, Role::Candidate, c, p.candidate_kinds[static_cast<std::size_t>(c)]});
            if (!p.bot_names[static_cast<std::size_t>(c)].empty()) pj["bot_name"] = p.bot_names[static_cast<std::size_t>(c)];
            players.push_back(pj);
        }
        log.append("group_formed", Audience::Server,
                   {{"group", g}, {"players", players}, {"seed", groups[static_cast<std::size_t>(g)].seed.path()}});
        if (!schedules.empty()) {
            json rounds = json::array();
            for (const auto& r : schedules[static_cast<std::size_t>(g)].rounds) {
                json rr = json::array();
                for (const auto& a : r.assignments) rr.push_back({a.selector, a.candidate_a, a.candidate_b});
                rounds.push_back(rr);
            }
            log.append("schedule", Audience::Server, {{"group", g}, {"mode", "barrier"}, {"rounds", rounds}});
        }
    }

    Runner runner(config, log);
    if (config.sync == matching::SyncMode::Barrier) {
        for (int r = 0; r < config.n_rounds; ++r) {
            for (int g = 0; g < config.n_groups; ++g) {
                for (const auto& a : schedules[static_cast<std::size_t>(g)].rounds[static_cast<std::size_t>(r)].assignments) {
                    runner.play(g, groups[static_cast<std::size_t>(g)], r, a.selector, a.candidate_a, a.candidate_b);
                }
            }
        }
    } else {
        for (int g = 0; g < config.n_groups; ++g) {
            auto& state = groups[static_cast<std::size_t>(g)];
            matching::MatchHistory history;
            Rng pool_rng = state.seed.derive("pool").engine();
            for (int tick = 0;; ++tick) {
                // Everyone is idle at the start of a tick; draw triads until
                // no unused one can be formed from who is left.
                matching::IdlePlayers idle;
                for (int s = 0; s < config.n_selectors; ++s) {
                    if (state.rounds_played[static_cast<std::size_t>(s)] < config.n_rounds) idle.selectors.push_back(s);
                }
                for (int c = 0; c < n_cand; ++c) idle.candidates.push_back(c);
                std::vector<matching::PoolTriad> batch;
                while (auto t = matching::next_pool_assignment(history, idle, pool_rng)) {
                    batch.push_back(*t);
                    std::erase(idle.selectors, t->selector);
                    std::erase(idle.candidates, t->candidate_a);
                    std::erase(idle.candidates, t->candidate_b);
                }
                if (batch.empty()) break;
                for (const auto& t : batch) {
                    const int round = state.rounds_played[static_cast<std::size_t>(t.selector)]++;
                    runner.play(g, state, round, t.selector, t.candidate_a, t.candidate_b);
                }
            }
            int short_selectors = 0;
            for (int n : state.rounds_played) short_selectors += n < config.n_rounds;
            if (short_selectors > 0) log.append("pool_exhausted", Audience::Server, {{"group", g}, {"short_selectors", short_selectors}});
        }
    }

    // Bonuses for every human seat that played at least three rounds.
    for (int g = 0; g < config.n_groups; ++g) {
        const auto& p = groups[static_cast<std::size_t>(g)].policies;
        std::vector<PlayerId> humans;
        for (int s = 0; s < config.n_selectors; ++s) humans.push_back({g, Role::Selector, s, Kind::Human});
        for (int c = 0; c < n_cand; ++c) {
            if (p.candidate_kinds[static_cast<std::size_t>(c)] == Kind::Human) humans.push_back({g, Role::Candidate, c, Kind::Human});
        }
        for (const auto& h : humans) {
            const Seed bs = root.derive("group", static_cast<std::uint64_t>(g)).derive("bonus").derive(h.label());
            Rng rng = bs.engine();
            try {
                const auto b = compute_bonus(runner.records_, h, rng);
                log.append("bonus", Audience::Server,
                           {{"group", g}, {"player", h.label()}, {"rounds", b.rounds}, {"points", b.points}, {"amount", b.amount}, {"seed", bs.path()}});
            } catch (const InsufficientRounds&) {
                log.append("bonus_skipped", Audience::Server, {{"group", g}, {"player", h.label()}});
            }
        }
    }
    log.append("session_end", Audience::Server, {{"rounds", runner.records_.size()}});
    return log;
}

}  // namespace psg::session
