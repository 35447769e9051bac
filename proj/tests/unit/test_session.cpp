#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "psg/core/errors.hpp"
#include "psg/matching/schedule.hpp"
#include "psg/session/server.hpp"

using namespace psg;
using namespace psg::session;
using nlohmann::json;

namespace {

SessionConfig small(int n_selectors = 5, int rounds = 6) {
    SessionConfig c;
    c.id = "t";
    c.n_selectors = n_selectors;
    c.n_human_candidates = n_selectors;
    c.n_bot_candidates = n_selectors;
    c.n_rounds = rounds;
    c.seed = 42;
    return c;
}

std::vector<json> of_type(const EventLog& log, const std::string& type) {
    std::vector<json> out;
    for (const auto& e : log.events()) {
        if (e["type"] == type) out.push_back(e);
    }
    return out;
}

EventLog reparse(const std::string& text) {
    std::istringstream in(text);
    return EventLog::parse(in);
}

RoundRecord record_for(const PlayerId& cand, int round, int payoff) {
    RoundRecord r;
    r.triad = make_triad({0, Role::Selector, 0}, cand, {0, Role::Candidate, 9});
    r.round_index = round;
    r.payoffs = {0, payoff, 0};
    return r;
}

}  // namespace

TEST_CASE("presets validate and round-trip through json") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto c = preset(name);
        CHECK_NOTHROW(validate(c));
        const auto back = config_from_json(to_json(c));
        CHECK(to_json(back) == to_json(c));
        CHECK(config_hash(back) == config_hash(c));
    }
    CHECK(preset("study1-human-only").n_bot_candidates == 0);
    CHECK(preset("study1-human-only").sync == matching::SyncMode::Pool);
    CHECK(preset("study3-transparent").transparent());
    CHECK(preset("study3-opaque").n_rounds == 18);
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from_json(json{{"n_roundz", 3}}), ConfigError);
    CHECK(config_from_json(json{{"preset", "study2-opaque"}, {"seed", 9}}).seed == 9);
    CHECK(config_from_json(json{{"preset", "study2-opaque"}}).n_rounds == 10);

    auto c = small();
    c.composition = Composition::HumanOnly;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small();
    c.n_bot_candidates = 0;
    c.n_human_candidates = 10;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small();
    c.timeouts.reply = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);

    const auto path = (std::filesystem::temp_directory_path() / "psg_bad_config.json").string();
    std::ofstream(path) << "{\n  \"seed\": 1,\n  oops\n}\n";
    try {
        load_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(path + ":3") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("simulation is deterministic and seed-sensitive") {
    const auto a = run_simulation(small()).str();
    const auto b = run_simulation(small()).str();
    CHECK(a == b);
    auto other = small();
    other.seed = 43;
    CHECK(run_simulation(other).str() != a);
}

TEST_CASE("a barrier session plays every selector in every round") {
    auto c = small(5, 18);
    const auto log = run_simulation(c);
    const auto records = import_records(log);
    CHECK(records.size() == 5 * 18);
    CHECK(verify_log(log).empty());
    CHECK(disclosure_violations(log).empty());

    std::set<matching::TriadKey> seen;
    for (const auto& r : records) {
        CHECK(r.payoffs == settle_round(r.choice, ReturnDecision(r.return_a), ReturnDecision(r.return_b)));
        CHECK(r.reply_a.size() <= 280);
        const auto key = matching::triad_key(r.triad.selector.index, r.triad.candidate_a.index, r.triad.candidate_b.index);
        CHECK(seen.insert(key).second);
        CHECK_FALSE(r.identity_shown);
    }

    const auto starts = of_type(log, "session_start");
    REQUIRE(starts.size() == 1);
    CHECK(starts[0]["schema"] == kEventLogSchema);
    CHECK(starts[0]["config_hash"] == config_hash(c));
    CHECK(of_type(log, "session_end").size() == 1);
}

TEST_CASE("logs round-trip through ndjson") {
    const auto log = run_simulation(small(5, 3));
    const auto back = reparse(log.str());
    CHECK(back.str() == log.str());
    CHECK(import_records(back).size() == 15);

    std::string broken = log.str();
    broken.erase(0, broken.find('\n') + 1);
    CHECK_THROWS_AS(reparse(broken), InvalidValue);
}

TEST_CASE("human-only sessions contain no bots and no model traffic") {
    auto c = preset("study1-human-only");
    c.n_groups = 2;
    const auto log = run_simulation(c);
    CHECK(verify_log(log).empty());
    for (const auto& g : of_type(log, "group_formed")) {
        for (const auto& p : g["players"]) CHECK(p["kind"] == "human");
    }
    for (const auto& r : import_records(log)) {
        CHECK(r.triad.candidate_a.kind == Kind::Human);
        CHECK(r.triad.candidate_b.kind == Kind::Human);
    }
    CHECK(of_type(log, "llm_call").empty());
}

TEST_CASE("pool sessions honour the pairing rule") {
    auto c = preset("study1-opaque");
    c.n_groups = 1;
    const auto log = run_simulation(c);
    CHECK(verify_log(log).empty());
    std::set<matching::TriadKey> triads;
    for (const auto& r : import_records(log)) {
        CHECK(triads.insert(matching::triad_key(r.triad.selector.index, r.triad.candidate_a.index, r.triad.candidate_b.index))
                  .second);
    }
}

TEST_CASE("an infeasible schedule fails before any round is played") {
    auto c = small(5, 46);
    CHECK_THROWS_AS(run_simulation(c), Infeasible);
    c.sync = matching::SyncMode::Pool;
    CHECK_THROWS_AS(run_simulation(c), Infeasible);
}

namespace {

class FlakyCandidate : public agents::CandidatePolicy {
public:
    FlakyCandidate(std::unique_ptr<agents::CandidatePolicy> inner, int* failures)
        : inner_(std::move(inner)), failures_(failures) {}
    std::string reply(const std::string& q, const agents::CandidateContext& ctx, Rng& rng) override {
        if (*failures_ > 0) {
            --*failures_;
            throw GatewayError("upstream 503");
        }
        return inner_->reply(q, ctx, rng);
    }
    ReturnDecision decide_return(const std::string& q, const std::string& r, const agents::CandidateContext& ctx,
                                 Rng& rng) override {
        return inner_->decide_return(q, r, ctx, rng);
    }

private:
    std::unique_ptr<agents::CandidatePolicy> inner_;
    int* failures_;
};

SimulationOptions flaky(int* failures) {
    SimulationOptions o;
    o.factory = [failures](const SessionConfig& c, int g, const Seed& s) {
        auto p = default_policies(c, g, s, nullptr);
        for (auto& cand : p.candidates) cand = std::make_unique<FlakyCandidate>(std::move(cand), failures);
        return p;
    };
    return o;
}

}  // namespace

TEST_CASE("gateway failures abort and retry the round") {
    int failures = 1;
    const auto log = run_simulation(small(5, 2), flaky(&failures));
    CHECK(of_type(log, "round_aborted").size() == 1);
    CHECK(import_records(log).size() == 10);
    const auto problems = verify_log(log);
    CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));

    failures = 100;
    CHECK_THROWS_AS(run_simulation(small(5, 2), flaky(&failures)), GatewayError);
}

TEST_CASE("verification catches tampered payoffs and phase violations") {
    const auto text = run_simulation(small(5, 2)).str();
    std::istringstream in(text);
    std::string out, line;
    bool tampered = false;
    while (std::getline(in, line)) {
        auto e = json::parse(line);
        if (!tampered && e["type"] == "round_complete") {
            e["record"]["payoff_selector"] = e["record"]["payoff_selector"].get<int>() + 1;
            tampered = true;
        }
        out += e.dump() + "\n";
    }
    const auto problems = verify_log(reparse(out));
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("payoffs") != std::string::npos);

    // Dropping a reply leaves the triad stuck before the reveal.
    std::istringstream in2(text);
    out.clear();
    bool dropped = false;
    int seq = 0;
    while (std::getline(in2, line)) {
        auto e = json::parse(line);
        if (!dropped && e["type"] == "reply") {
            dropped = true;
            continue;
        }
        e["seq"] = seq++;
        out += e.dump() + "\n";
    }
    CHECK_FALSE(verify_log(reparse(out)).empty());
}

TEST_CASE("disclosure rules") {
    auto c = small(5, 2);
    const auto opaque = run_simulation(c);
    CHECK(disclosure_violations(opaque).empty());
    for (const auto& e : opaque.events()) {
        if (e["to"] == "server") continue;
        CHECK_FALSE(e.contains("kind_a"));
        CHECK(e.dump().find("\"bot\"") == std::string::npos);
    }

    c.disclosure = Disclosure::Transparent;
    const auto transparent = run_simulation(c);
    CHECK(disclosure_violations(transparent).empty());
    for (const auto& r : of_type(transparent, "reveal")) {
        CHECK(r.contains("kind_a"));
        CHECK(r.contains("kind_b"));
    }
    for (const auto& r : import_records(transparent)) CHECK(r.identity_shown);

    // Splicing a kind into an opaque reveal is flagged.
    std::string text;
    for (auto e : opaque.events()) {
        if (e["type"] == "reveal" && text.find("kind_a") == std::string::npos) e["kind_a"] = "bot";
        text += e.dump() + "\n";
    }
    CHECK_FALSE(disclosure_violations(reparse(text)).empty());
}

TEST_CASE("bonus payments") {
    const PlayerId p{0, Role::Candidate, 1};
    Rng rng(1);
    auto b = compute_bonus({record_for(p, 0, 30), record_for(p, 1, 30), record_for(p, 2, 30)}, p, rng);
    CHECK(b.points == 90);
    CHECK(b.amount == doctest::Approx(9.0));
    CHECK(compute_bonus({record_for(p, 0, 0), record_for(p, 1, 0), record_for(p, 2, 0)}, p, rng).amount == 0.0);
    b = compute_bonus({record_for(p, 0, 15), record_for(p, 1, 20), record_for(p, 2, 10)}, p, rng);
    CHECK(b.amount == doctest::Approx(4.5));
    CHECK(std::set<int>(b.rounds.begin(), b.rounds.end()) == std::set<int>{0, 1, 2});
    CHECK_THROWS_AS(compute_bonus({record_for(p, 0, 15), record_for(p, 1, 20)}, p, rng), InsufficientRounds);

    std::vector<RoundRecord> many;
    for (int r = 0; r < 10; ++r) many.push_back(record_for(p, r, r));
    for (int i = 0; i < 50; ++i) {
        const auto x = compute_bonus(many, p, rng);
        CHECK(std::set<int>(x.rounds.begin(), x.rounds.end()).size() == 3);
        CHECK(x.points == x.rounds[0] + x.rounds[1] + x.rounds[2]);
    }
}

TEST_CASE("simulated sessions pay a bonus to every human seat") {
    const auto log = run_simulation(small(5, 4));
    const auto bonuses = of_type(log, "bonus");
    // 5 selectors and 5 human candidates.
    CHECK(bonuses.size() == 10);
    for (const auto& b : bonuses) {
        CHECK(b["amount"].get<double>() >= 0.0);
        CHECK(b["amount"].get<double>() <= 9.0);
    }
}

TEST_CASE("records import into a fit dataset") {
    const auto records = import_records(run_simulation(small(5, 6)));
    const auto data = fit_dataset_from_records(records, "s");
    int selectors = 0;
    for (const auto& g : data.groups) {
        for (const auto& s : g.selectors) {
            ++selectors;
            CHECK(s.steps.size() == 6);
            for (const auto& step : s.steps) CHECK(step.reports.size() == 2);
        }
    }
    CHECK(selectors == 5);
}

// ---- live sessions ----

namespace {

SessionConfig triad_config(Composition comp, Disclosure d) {
    SessionConfig c;
    c.id = "live";
    c.composition = comp;
    c.disclosure = d;
    c.n_selectors = 1;
    c.n_human_candidates = comp == Composition::HumanOnly ? 2 : 1;
    c.n_bot_candidates = comp == Composition::HumanOnly ? 0 : 1;
    c.n_rounds = 1;
    c.seed = 5;
    return c;
}

struct FakeClock {
    std::shared_ptr<Clock::time_point> t = std::make_shared<Clock::time_point>();
    std::function<Clock::time_point()> fn() const {
        auto p = t;
        return [p] { return *p; };
    }
};

bool has_type(const std::vector<json>& msgs, const std::string& type) {
    return std::any_of(msgs.begin(), msgs.end(), [&](const json& m) { return m["type"] == type; });
}

}  // namespace

TEST_CASE("live triad: phase gating, single reveal and payoffs") {
    LiveOptions o;
    o.human_seats = {"g0.s0", "g0.c0", "g0.c1"};
    LiveSession s(triad_config(Composition::HumanOnly, Disclosure::Opaque), o);
    const auto [ts, ls] = s.join("g0.s0");
    const auto [ta, la] = s.join("g0.c0");
    const auto [tb, lb] = s.join("g0.c1");
    CHECK_THROWS_AS(s.join(), AuthError);
    CHECK_THROWS_AS(s.state("bogus"), AuthError);

    auto st = s.state(ts);
    CHECK(st["phase"] == "await_question");
    CHECK(st["pending"] == json::array({"question"}));
    CHECK_FALSE(st.contains("notice"));
    const std::string slot_a = s.state(ta)["slot"];

    CHECK_THROWS_AS(s.submit(ta, "reply", {{"text", "early"}}), IllegalEvent);
    s.submit(ts, "question", {{"text", "How many points will you return?"}});
    CHECK(s.state(ts)["phase"] == "await_replies");
    CHECK_THROWS_AS(s.submit(ts, "choice", {{"choice", "invest_a"}}), IllegalEvent);
    CHECK(s.state(ts)["phase"] == "await_replies");
    CHECK_THROWS_AS(s.submit(ts, "dance", {}), InvalidValue);

    for (const auto& tok : {ts, ta, tb}) s.drain(tok);
    const std::string tok_a = slot_a == "A" ? ta : tb;
    const std::string tok_b = slot_a == "A" ? tb : ta;
    s.submit(tok_a, "reply", {{"text", "I will return 15 points."}});
    CHECK_THROWS_AS(s.submit(tok_a, "reply", {{"text", "again"}}), IllegalEvent);
    CHECK_FALSE(s.state(ts).contains("reply_a"));
    CHECK(s.state(tok_a)["my_reply"] == "I will return 15 points.");
    CHECK_FALSE(s.state(tok_b).contains("reply_a"));
    CHECK_FALSE(has_type(s.drain(ts), "reveal"));
    s.submit(tok_b, "reply", {{"text", "Pick me"}});

    for (const auto& tok : {ts, ta, tb}) {
        const auto msgs = s.drain(tok);
        int reveals = 0;
        for (const auto& m : msgs) {
            if (m["type"] != "reveal") continue;
            ++reveals;
            CHECK(m["reply_a"] == "I will return 15 points.");
            CHECK(m["reply_b"] == "Pick me");
            CHECK_FALSE(m.contains("kind_a"));
        }
        CHECK(reveals == 1);
    }

    s.submit(tok_a, "return", {{"amount", 15}, {"idempotency_key", "k1"}});
    // A repeated click carrying the same key is acknowledged, not applied twice.
    CHECK_NOTHROW(s.submit(tok_a, "return", {{"amount", 15}, {"idempotency_key", "k1"}}));
    CHECK_THROWS_AS(s.submit(tok_a, "return", {{"amount", 15}, {"idempotency_key", "k2"}}), IllegalEvent);
    CHECK_THROWS_AS(s.submit(tok_b, "return", {{"amount", 31}}), InvalidValue);
    s.submit(tok_b, "return", {{"amount", 5}});
    s.submit(ts, "choice", {{"choice", "invest_a"}});
    CHECK(s.state(ts)["phase"] == "await_beliefs");
    s.submit(ts, "beliefs", {{"a", 12}, {"b", 8}});
    s.submit(tok_a, "guess", {{"choice", "invest_a"}});
    s.submit(tok_b, "guess", {{"choice", "invest_b"}});

    CHECK(s.finished());
    const auto log = s.log();
    CHECK(verify_log(log).empty());
    const auto records = import_records(log);
    REQUIRE(records.size() == 1);
    CHECK(records[0].payoffs == Payoffs{15, 15, 0});
    CHECK(records[0].beliefs.expected_return_a == 12);
}

TEST_CASE("live transparent sessions disclose kinds at the reveal only") {
    LiveOptions o;
    o.human_seats = {"selector"};
    LiveSession s(triad_config(Composition::Hybrid, Disclosure::Transparent), o);
    const auto [ts, label] = s.join();
    CHECK(label == "g0.s0");
    auto st = s.state(ts);
    CHECK(st["notice"] == "Some candidates could be bots.");
    CHECK_FALSE(st.contains("kind_a"));
    s.drain(ts);
    st = s.submit(ts, "question", {{"text", "Why you?"}});
    // Agent candidates answer immediately.
    CHECK(st["phase"] == "await_decisions");
    CHECK(st.contains("kind_a"));
    const auto msgs = s.drain(ts);
    bool saw = false;
    for (const auto& m : msgs) {
        if (m["type"] != "reveal") continue;
        saw = true;
        std::set<std::string> kinds{m["kind_a"].get<std::string>(), m["kind_b"].get<std::string>()};
        CHECK(kinds == std::set<std::string>{"bot", "human"});
    }
    CHECK(saw);
    CHECK(disclosure_violations(s.log()).empty());
}

TEST_CASE("live timeouts apply default actions") {
    FakeClock clock;
    LiveOptions o;
    o.human_seats = {"g0.s0"};
    o.clock = clock.fn();
    auto cfg = triad_config(Composition::Hybrid, Disclosure::Opaque);
    cfg.timeouts = {30, 30, 30, 30, 30};
    LiveSession s(cfg, o);
    const auto [ts, label] = s.join();
    s.tick();
    CHECK(s.state(ts)["phase"] == "await_question");
    *clock.t += std::chrono::seconds(31);
    s.tick();
    CHECK(s.state(ts)["phase"] == "await_decisions");
    CHECK(s.state(ts)["question"] == "");
    *clock.t += std::chrono::seconds(31);
    s.tick();
    *clock.t += std::chrono::seconds(31);
    s.tick();
    CHECK(s.finished());
    const auto log = s.log();
    CHECK(verify_log(log).empty());
    const auto rec = import_records(log).at(0);
    CHECK(rec.choice == SelectorChoice::Keep);
    CHECK(rec.beliefs.expected_return_a == 10);
    CHECK(rec.payoffs.selector == 10);
    int flagged = 0;
    for (const auto& e : log.events()) flagged += e.value("timeout", false);
    CHECK(flagged == 3);
}

TEST_CASE("leaving hands the seat to an agent") {
    LiveOptions o;
    o.human_seats = {"g0.s0", "g0.c0"};
    LiveSession s(triad_config(Composition::HumanOnly, Disclosure::Opaque), o);
    const auto [ts, _1] = s.join("g0.s0");
    const auto [tc, _2] = s.join("g0.c0");
    s.leave(tc);
    CHECK_THROWS_AS(s.state(tc), AuthError);
    s.submit(ts, "question", {{"text", "hi"}});
    s.submit(ts, "choice", {{"choice", "invest_b"}});
    s.submit(ts, "beliefs", {{"a", 3}, {"b", 4}});
    CHECK(s.finished());
    CHECK(of_type(s.log(), "seat_replaced").size() == 1);
    CHECK(verify_log(s.log()).empty());
}

TEST_CASE("timeout defaults") {
    CHECK(timeout_default(RoundEvent::question(), 0) == json{{"text", ""}});
    CHECK(timeout_default(RoundEvent::return_decision(Slot::B), 17) == json{{"amount", 17}});
    CHECK(timeout_default(RoundEvent::choice(), 0) == json{{"choice", "keep"}});
    CHECK(timeout_default(RoundEvent::beliefs(), 0) == json{{"a", 10}, {"b", 10}});
}

// ---- HTTP ----

TEST_CASE("http server: session lifecycle over REST and SSE") {
    const auto dir = std::filesystem::temp_directory_path() / "psg_server_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    ServerOptions so;
    so.port = 0;
    so.data_dir = dir.string();
    so.tick_interval = std::chrono::milliseconds(20);
    SessionServer server(so);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());
    cli.set_read_timeout(5, 0);

    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(json::parse(health->body)["type"] == "health");

    auto bad = cli.Post("/api/sessions", R"({"preset": "nope"})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body)["type"] == "error");

    const json create{{"config", to_json(triad_config(Composition::Hybrid, Disclosure::Opaque))}, {"human_seats", {"selector"}}};
    auto created = cli.Post("/api/sessions", create.dump(), "application/json");
    REQUIRE(created);
    REQUIRE_MESSAGE(created->status == 201, created->body);
    const std::string id = json::parse(created->body)["session"];

    CHECK(cli.Post("/api/sessions/none/join", "{}", "application/json")->status == 404);
    auto joined = cli.Post("/api/sessions/" + id + "/join", "{}", "application/json");
    REQUIRE(joined);
    REQUIRE(joined->status == 200);
    const std::string token = json::parse(joined->body)["token"];
    CHECK(cli.Get("/api/sessions/" + id + "/state?token=wrong")->status == 403);

    auto early = cli.Post("/api/sessions/" + id + "/submit-choice", json{{"token", token}, {"choice", "invest_a"}}.dump(),
                          "application/json");
    REQUIRE(early);
    CHECK(early->status == 409);

    auto asked = cli.Post("/api/sessions/" + id + "/submit-question",
                          json{{"token", token}, {"text", "Why should I pick you?"}}.dump(), "application/json");
    REQUIRE(asked);
    CHECK(asked->status == 200);
    CHECK(json::parse(asked->body)["state"]["phase"] == "await_decisions");

    std::vector<json> events;
    httplib::Client sse("127.0.0.1", server.port());
    sse.set_read_timeout(5, 0);
    std::string buffer;
    sse.Get("/api/sessions/" + id + "/stream?token=" + token, [&](const char* data, size_t n) {
        buffer.append(data, n);
        std::size_t pos;
        while ((pos = buffer.find("\n\n")) != std::string::npos) {
            const std::string frame = buffer.substr(0, pos);
            buffer.erase(0, pos + 2);
            if (frame.rfind("data: ", 0) == 0) events.push_back(json::parse(frame.substr(6)));
        }
        return !has_type(events, "reveal");
    });
    REQUIRE_FALSE(events.empty());
    CHECK(events.front()["type"] == "state");
    CHECK(has_type(events, "reveal"));

    cli.Post("/api/sessions/" + id + "/submit-choice", json{{"token", token}, {"choice", "invest_b"}}.dump(), "application/json");
    cli.Post("/api/sessions/" + id + "/submit-beliefs", json{{"token", token}, {"a", 9}, {"b", 11}}.dump(),
             "application/json");
    auto st = json::parse(cli.Get("/api/sessions/" + id + "/state?token=" + token)->body);
    CHECK(st["finished"] == true);
    server.stop();

    const auto path = dir / (id + ".ndjson");
    REQUIRE(std::filesystem::exists(path));
    const auto log = EventLog::load(path.string());
    CHECK(verify_log(log).empty());
    CHECK(disclosure_violations(log).empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("shipped data files load and match the built-in defaults") {
    const auto roster = agents::load_bot_roster("data/bot_roster.json");
    const auto builtin = agents::default_bot_roster();
    REQUIRE(roster.size() == builtin.size());
    for (std::size_t i = 0; i < roster.size(); ++i) {
        CHECK(roster[i].name == builtin[i].name);
        CHECK(roster[i].persona == builtin[i].persona);
    }
    const auto pack = agents::load_template_pack("data/templates.json");
    const auto& def = agents::default_template_pack();
    CHECK(pack.questions == def.questions);
    CHECK(pack.replies == def.replies);
    CHECK(pack.promises == def.promises);
    CHECK(pack.filler == def.filler);

    for (const auto& entry : std::filesystem::directory_iterator("data/configs")) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(validate(load_config(entry.path().string())));
    }
}
