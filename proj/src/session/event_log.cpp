#include "psg/session/event_log.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "psg/core/errors.hpp"
#include "psg/core/phase.hpp"

namespace psg::session {

using nlohmann::json;

std::string_view to_string(Audience a) noexcept {
    switch (a) {
        case Audience::Server: return "server";
        case Audience::Selector: return "selector";
        case Audience::CandidateA: return "candidate_a";
        case Audience::CandidateB: return "candidate_b";
        case Audience::Candidates: return "candidates";
        case Audience::Triad: return "triad";
    }
    return "?";
}

EventLog::EventLog(std::string session_id) : session_(std::move(session_id)) {}

const json& EventLog::append(const std::string& type, Audience audience, json fields) {
    fields["seq"] = events_.size();
    fields["session"] = session_;
    fields["type"] = type;
    fields["to"] = to_string(audience);
    events_.push_back(std::move(fields));
    return events_.back();
}

void EventLog::write(std::ostream& out) const {
    for (const auto& e : events_) out << e.dump() << '\n';
}

std::string EventLog::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

EventLog EventLog::parse(std::istream& in) {
    EventLog log;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        json e;
        try {
            e = json::parse(line);
        } catch (const json::parse_error& err) {
            throw InvalidValue("event log line " + std::to_string(n) + ": " + err.what());
        }
        if (!e.is_object() || !e.contains("type") || !e.contains("seq")) {
            throw InvalidValue("event log line " + std::to_string(n) + ": not an event");
        }
        if (log.events_.empty()) {
            if (e["type"] != "session_start" || e.value("schema", "") != kEventLogSchema) {
                throw InvalidValue(std::string("event log must start with a ") + kEventLogSchema + " session_start");
            }
            log.session_ = e.value("session", "");
        }
        if (e["seq"] != log.events_.size()) throw InvalidValue("event log line " + std::to_string(n) + ": seq gap");
        log.events_.push_back(std::move(e));
    }
    if (log.events_.empty()) throw InvalidValue("empty event log");
    return log;
}

EventLog EventLog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidValue("cannot open event log: " + path);
    try {
        return parse(in);
    } catch (const InvalidValue& e) {
        throw InvalidValue(path + ": " + e.what());
    }
}

json player_json(const PlayerId& p) {
    return {{"group", p.group}, {"role", to_string(p.role)}, {"index", p.index}, {"kind", to_string(p.kind)}};
}

PlayerId player_from_json(const json& j) {
    PlayerId p{j.at("group").get<int>(), role_from_string(j.at("role").get<std::string>()), j.at("index").get<int>(),
               kind_from_string(j.at("kind").get<std::string>())};
    validate(p);
    return p;
}

json record_json(const RoundRecord& r) {
    return {{"selector", player_json(r.triad.selector)},
            {"candidate_a", player_json(r.triad.candidate_a)},
            {"candidate_b", player_json(r.triad.candidate_b)},
            {"round", r.round_index},
            {"question", r.question},
            {"reply_a", r.reply_a},
            {"reply_b", r.reply_b},
            {"choice", to_string(r.choice)},
            {"return_a", r.return_a},
            {"return_b", r.return_b},
            {"belief_a", r.beliefs.expected_return_a},
            {"belief_b", r.beliefs.expected_return_b},
            {"guess_a", to_string(r.guesses[0].guessed_choice)},
            {"guess_b", to_string(r.guesses[1].guessed_choice)},
            {"payoff_selector", r.payoffs.selector},
            {"payoff_a", r.payoffs.candidate_a},
            {"payoff_b", r.payoffs.candidate_b},
            {"identity_shown", r.identity_shown}};
}

RoundRecord record_from_json(const json& j) {
    RoundRecord r;
    r.triad = make_triad(player_from_json(j.at("selector")), player_from_json(j.at("candidate_a")),
                         player_from_json(j.at("candidate_b")));
    r.round_index = j.at("round").get<int>();
    r.question = j.at("question").get<std::string>();
    r.reply_a = j.at("reply_a").get<std::string>();
    r.reply_b = j.at("reply_b").get<std::string>();
    r.choice = choice_from_string(j.at("choice").get<std::string>());
    r.return_a = ReturnDecision(j.at("return_a").get<int>()).amount();
    r.return_b = ReturnDecision(j.at("return_b").get<int>()).amount();
    r.beliefs = make_belief_report(j.at("belief_a").get<int>(), j.at("belief_b").get<int>());
    r.guesses[0].guessed_choice = choice_from_string(j.at("guess_a").get<std::string>());
    r.guesses[1].guessed_choice = choice_from_string(j.at("guess_b").get<std::string>());
    r.payoffs = {j.at("payoff_selector").get<int>(), j.at("payoff_a").get<int>(), j.at("payoff_b").get<int>()};
    r.identity_shown = j.at("identity_shown").get<bool>();
    return r;
}

std::vector<RoundRecord> import_records(const EventLog& log) {
    std::vector<RoundRecord> out;
    for (const auto& e : log.events()) {
        if (e["type"] != "round_complete") continue;
        try {
            out.push_back(record_from_json(e.at("record")));
        } catch (const json::exception& err) {
            throw InvalidValue("event " + e["seq"].dump() + ": " + err.what());
        }
    }
    return out;
}

model::FitDataset fit_dataset_from_records(const std::vector<RoundRecord>& records, const std::string& prefix) {
    // group -> selector -> round -> step
    std::map<int, std::map<int, std::map<int, model::ObservationStep>>> grouped;
    for (const auto& r : records) {
        model::ObservationStep step;
        const Kind ka = r.triad.candidate_a.kind;
        const Kind kb = r.triad.candidate_b.kind;
        if (r.choice == SelectorChoice::InvestA) {
            step.selected = ka;
            step.observed_return = r.return_a;
        } else if (r.choice == SelectorChoice::InvestB) {
            step.selected = kb;
            step.observed_return = r.return_b;
        }
        step.reports.push_back({ka, double(r.beliefs.expected_return_a), r.choice == SelectorChoice::InvestA});
        step.reports.push_back({kb, double(r.beliefs.expected_return_b), r.choice == SelectorChoice::InvestB});
        grouped[r.triad.selector.group][r.triad.selector.index][r.round_index] = std::move(step);
    }
    model::FitDataset data;
    for (auto& [g, selectors] : grouped) {
        model::GroupData group{prefix + ":g" + std::to_string(g), {}};
        for (auto& [s, rounds] : selectors) {
            model::SelectorSeries series{group.id + ".s" + std::to_string(s), {}};
            for (auto& [round, step] : rounds) series.steps.push_back(std::move(step));
            group.selectors.push_back(std::move(series));
        }
        data.groups.push_back(std::move(group));
    }
    return data;
}

model::FitDataset fit_dataset_from_logs(const std::vector<EventLog>& logs) {
    model::FitDataset all;
    std::set<std::string> prefixes;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const auto& log = logs[i];
        std::string prefix = log.session();
        if (!prefixes.insert(prefix).second) prefix += "@" + std::to_string(i);
        prefixes.insert(prefix);
        auto part = fit_dataset_from_records(import_records(log), prefix);
        for (auto& g : part.groups) all.groups.push_back(std::move(g));
    }
    model::validate(all);
    return all;
}

namespace {

using TriadKey = std::tuple<int, int, int>;  // group, round, selector

std::optional<TriadKey> key_of(const json& e) {
    if (!e.contains("group") || !e.contains("round") || !e.contains("selector")) return std::nullopt;
    return TriadKey{e["group"].get<int>(), e["round"].get<int>(), e["selector"].get<int>()};
}

std::optional<RoundEvent> round_event(const json& e) {
    const std::string t = e["type"];
    const auto slot = [&] { return e.at("slot") == "A" ? Slot::A : Slot::B; };
    if (t == "question") return RoundEvent::question();
    if (t == "reply") return RoundEvent::reply(slot());
    if (t == "return") return RoundEvent::return_decision(slot());
    if (t == "choice") return RoundEvent::choice();
    if (t == "beliefs") return RoundEvent::beliefs();
    if (t == "guess") return RoundEvent::guess(slot());
    return std::nullopt;
}

struct Seen {
    RoundProgress progress;
    std::optional<SelectorChoice> choice;
    std::optional<int> return_a, return_b;
};

std::string where(const json& e) { return "event " + e["seq"].dump() + " (" + e["type"].get<std::string>() + ")"; }

}  // namespace

std::vector<std::string> verify_log(const EventLog& log, const GameRules& rules) {
    std::vector<std::string> problems;
    std::map<TriadKey, Seen> open;
    bool barrier = false;
    // Barrier mode: rounds complete in order; round r+1 starts only after
    // every triad of round r completed.
    std::map<int, int> open_per_round;
    for (const auto& e : log.events()) {
        const std::string type = e["type"];
        if (type == "session_start") {
            barrier = e.contains("config") && e["config"].value("sync", "") == "barrier";
            continue;
        }
        const auto key = key_of(e);
        if (!key) continue;
        const int round = std::get<1>(*key);
        if (type == "round_start") {
            if (barrier) {
                for (const auto& [r, n] : open_per_round) {
                    if (r < round && n > 0) problems.push_back(where(e) + ": round started before round " +
                                                               std::to_string(r) + " completed");
                }
            }
            open[*key] = Seen{};
            ++open_per_round[round];
            continue;
        }
        if (type == "round_aborted") {
            // The retry opens the triad again with its own round_start.
            if (open.erase(*key) > 0) --open_per_round[round];
            continue;
        }
        auto it = open.find(*key);
        if (it == open.end()) {
            problems.push_back(where(e) + ": event for a round that never started");
            continue;
        }
        auto& seen = it->second;
        if (auto ev = round_event(e)) {
            try {
                seen.progress = seen.progress.advance(*ev);
            } catch (const IllegalEvent& err) {
                problems.push_back(where(e) + ": " + err.what());
            }
            if (type == "choice") seen.choice = choice_from_string(e.at("choice").get<std::string>());
            if (type == "return") (e.at("slot") == "A" ? seen.return_a : seen.return_b) = e.at("amount").get<int>();
            continue;
        }
        if (type != "round_complete") continue;
        if (seen.progress.phase() != RoundPhase::Revealed) {
            problems.push_back(where(e) + ": round completed in phase " +
                               std::string(to_string(seen.progress.phase())));
            continue;
        }
        try {
            const auto rec = record_from_json(e.at("record"));
            const auto expect =
                settle_round(*seen.choice, ReturnDecision(*seen.return_a, rules), ReturnDecision(*seen.return_b, rules), rules);
            if (rec.choice != *seen.choice || rec.return_a != *seen.return_a || rec.return_b != *seen.return_b) {
                problems.push_back(where(e) + ": record disagrees with submitted decisions");
            }
            if (!(rec.payoffs == expect)) problems.push_back(where(e) + ": payoffs differ from settlement");
        } catch (const std::exception& err) {
            problems.push_back(where(e) + ": " + err.what());
        }
        --open_per_round[round];
        open.erase(it);
    }
    for (const auto& [key, seen] : open) {
        problems.push_back("round " + std::to_string(std::get<1>(key)) + " of selector " +
                           std::to_string(std::get<2>(key)) + " in group " + std::to_string(std::get<0>(key)) +
                           " never completed");
    }
    return problems;
}

namespace {

bool mentions_kind(const json& j) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (k.find("kind") != std::string::npos || mentions_kind(v)) return true;
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (mentions_kind(v)) return true;
        }
    } else if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        return s == "bot" || s == "human";
    }
    return false;
}

}  // namespace

std::vector<std::string> disclosure_violations(const EventLog& log) {
    std::vector<std::string> out;
    if (log.events().empty()) return out;
    const auto& start = log.events().front();
    const bool transparent = start.contains("config") && start["config"].value("disclosure", "") == "transparent";
    for (const auto& e : log.events()) {
        if (e["to"] == "server") continue;
        if (!transparent && mentions_kind(e)) out.push_back(where(e) + ": candidate kind in an opaque payload");
        if (transparent && e["type"] == "reveal" && (!e.contains("kind_a") || !e.contains("kind_b"))) {
            out.push_back(where(e) + ": reveal without identity icons");
        }
    }
    return out;
}

Bonus compute_bonus(const std::vector<RoundRecord>& records, const PlayerId& player, Rng& rng) {
    std::vector<std::pair<int, int>> rounds;  // (round, points)
    for (const auto& r : records) {
        if (r.triad.selector == player) {
            rounds.emplace_back(r.round_index, r.payoffs.selector);
        } else if (r.triad.candidate_a == player) {
            rounds.emplace_back(r.round_index, r.payoffs.candidate_a);
        } else if (r.triad.candidate_b == player) {
            rounds.emplace_back(r.round_index, r.payoffs.candidate_b);
        }
    }
    if (rounds.size() < 3) {
        throw InsufficientRounds(player.label() + " played " + std::to_string(rounds.size()) + " rounds; bonus needs 3");
    }
    std::sort(rounds.begin(), rounds.end());
    Bonus b;
    // Partial Fisher-Yates over the sorted rounds.
    for (std::size_t i = 0; i < 3; ++i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, static_cast<int>(i), static_cast<int>(rounds.size()) - 1));
        std::swap(rounds[i], rounds[j]);
        b.rounds.push_back(rounds[i].first);
        b.points += rounds[i].second;
    }
    b.amount = std::clamp(b.points / 10.0, 0.0, 9.0);
    return b;
}

}  // namespace psg::session
