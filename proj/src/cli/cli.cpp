#include "psg/cli/cli.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "psg/analysis/clustering.hpp"
#include "psg/analysis/decisions.hpp"
#include "psg/analysis/group_stats.hpp"
#include "psg/analysis/predictability.hpp"
#include "psg/analysis/text.hpp"
#include "psg/core/errors.hpp"
#include "psg/model/synthetic.hpp"
#include "psg/session/event_log.hpp"
#include "psg/session/server.hpp"
#include "psg/session/simulation.hpp"

namespace psg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---- output plumbing -------------------------------------------------------

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string num(double v) {
    if (std::isnan(v)) return "NA";
    std::ostringstream o;
    o << std::setprecision(10) << v;
    return o.str();
}

class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) { row(std::vector<std::string>(header)); }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + csv_field(cells[i]);
        text_ += "\n";
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

// Everything a command produces is assembled in memory first and written
// only once the command has succeeded, so a failure leaves no partial
// outputs behind.
struct Outputs {
    std::map<std::string, std::string> files;

    void commit(const fs::path& dir) const {
        fs::create_directories(dir);
        for (const auto& [name, content] : files) {
            const fs::path tmp = dir / (name + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary);
                out << content;
                if (!out) throw Error("cannot write " + tmp.string());
            }
            fs::rename(tmp, dir / name);
        }
    }
};

std::string file_sha256(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return llm::sha256_hex(buf.str());
}

json manifest(const std::string& command, const std::vector<std::string>& args) {
    return {{"command", command}, {"args", args}, {"tool_version", PSG_VERSION}, {"schema", "psg.manifest/1"}};
}

// ---- gateway ---------------------------------------------------------------

struct GatewayFlags {
    std::string mode = "replay";
    std::string fixtures;
    std::string base_url;
};

std::shared_ptr<llm::Gateway> make_gateway(const GatewayFlags& f) {
    const auto mode = llm::gateway_mode_from_string(f.mode);
    auto store = std::make_shared<llm::FixtureStore>();
    if (!f.fixtures.empty()) {
        if (mode == llm::GatewayMode::Replay && !fs::exists(f.fixtures)) throw ConfigError("fixture file not found: " + f.fixtures);
        store->load(f.fixtures);
    }
    if (mode == llm::GatewayMode::Record) {
        if (f.fixtures.empty()) throw ConfigError("--mode record needs --fixtures");
        // A run that never reaches the model still leaves a replayable (empty) store.
        std::ofstream touch(f.fixtures, std::ios::app);
    }
    std::shared_ptr<llm::Transport> transport;
    if (mode != llm::GatewayMode::Replay) transport = std::make_shared<llm::HttpTransport>();
    auto g = std::make_shared<llm::Gateway>(mode, store, transport);
    if (!f.base_url.empty()) g->set_base_url(f.base_url);
    return g;
}

void describe_gateway(json& m, const GatewayFlags& f, const llm::Gateway* g) {
    m["gateway_mode"] = f.mode;
    m["fixtures"] = json::array();
    if (!f.fixtures.empty() && fs::exists(f.fixtures)) {
        m["fixtures"].push_back({{"path", f.fixtures}, {"sha256", file_sha256(f.fixtures)}});
    }
    m["network_calls"] = g ? g->network_calls() : 0;
}

std::vector<session::EventLog> load_logs(const std::vector<std::string>& paths) {
    std::vector<session::EventLog> logs;
    for (const auto& p : paths) {
        try {
            logs.push_back(session::EventLog::load(p));
        } catch (const InvalidValue& e) {
            throw ConfigError(e.what());
        }
    }
    return logs;
}

// Records of several logs with group ids renumbered so that every
// (log, group) pair is distinct.
std::vector<RoundRecord> merged_records(const std::vector<session::EventLog>& logs, int first_rounds,
                                        std::vector<std::string>& group_names) {
    std::vector<RoundRecord> all;
    int offset = 0;
    for (const auto& log : logs) {
        auto records = session::import_records(log);
        int max_group = -1;
        for (auto& r : records) {
            max_group = std::max(max_group, r.triad.selector.group);
            if (first_rounds > 0 && r.round_index >= first_rounds) continue;
            const int g = offset + r.triad.selector.group;
            r.triad.selector.group = r.triad.candidate_a.group = r.triad.candidate_b.group = g;
            all.push_back(std::move(r));
        }
        for (int g = 0; g <= max_group; ++g) group_names.push_back(log.session() + ":g" + std::to_string(g));
        offset += max_group + 1;
    }
    return all;
}

// ---- simulate --------------------------------------------------------------

struct SimulateFlags {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string bots;
    GatewayFlags gateway;
};

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    if (f.config.empty() == f.preset.empty()) throw ConfigError("give exactly one of --config or --preset");
    session::SessionConfig cfg = f.config.empty() ? session::preset(f.preset) : session::load_config(f.config);
    if (f.seed) cfg.seed = *f.seed;
    if (!f.bots.empty()) cfg.bot_backend = f.bots == "llm" ? session::BotBackend::Llm : session::BotBackend::Scripted;
    session::validate(cfg);

    std::shared_ptr<llm::Gateway> gateway;
    if (cfg.bot_backend == session::BotBackend::Llm) {
        if (f.gateway.fixtures.empty() && f.gateway.mode == "replay") {
            throw ConfigError("llm bots need --fixtures (replay/record) or --mode live");
        }
        gateway = make_gateway(f.gateway);
    }
    const auto log = session::run_simulation(cfg, {gateway, {}});

    Outputs o;
    o.files["events.ndjson"] = log.str();
    if (cfg.sync == matching::SyncMode::Barrier) {
        Csv csv({"group", "round", "selector", "candidate_a", "candidate_b"});
        for (const auto& e : log.events()) {
            if (e["type"] != "schedule") continue;
            int r = 0;
            for (const auto& round : e["rounds"]) {
                for (const auto& a : round) {
                    csv.row({e["group"].dump(), std::to_string(r), a[0].dump(), a[1].dump(), a[2].dump()});
                }
                ++r;
            }
        }
        o.files["schedule.csv"] = csv.str();
    }
    json m = manifest("simulate", args);
    m["config_hash"] = session::config_hash(cfg);
    m["config"] = session::to_json(cfg);
    m["seeds"] = {{"root", cfg.seed}};
    describe_gateway(m, f.gateway, gateway.get());
    m["outputs"] = json::array();
    for (const auto& [name, _] : o.files) m["outputs"].push_back(name);
    o.files["manifest.json"] = m.dump(2) + "\n";
    o.commit(f.out);
    out << "wrote " << log.size() << " events to " << (fs::path(f.out) / "events.ndjson").string() << "\n";
    return kExitOk;
}

// ---- fit -------------------------------------------------------------------

struct FitFlags {
    std::vector<std::string> logs;
    std::string model = "both";
    std::string out;
    bool cv = false;
    bool recovery = false;
    bool per_selector = false;
    int reps = 20;
    int starts = 20;
    int fold_starts = 3;
    std::string scope = "all";
    std::uint64_t seed = 1;
};

int cmd_fit(const FitFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    const auto logs = load_logs(f.logs);
    const auto data = session::fit_dataset_from_logs(logs);
    std::vector<model::ModelKind> models;
    if (f.model == "both") {
        models = {model::ModelKind::M0, model::ModelKind::M1};
    } else {
        models = {model::model_from_string(f.model)};
    }
    model::FitOptions fo;
    fo.n_starts = f.starts;
    fo.seed = f.seed;
    fo.scope = f.scope == "selected" ? model::ReportScope::SelectedOnly : model::ReportScope::All;

    Outputs o;
    json report{{"groups", data.groups.size()}, {"reports", data.report_count(fo.scope)}, {"invest_rounds", data.invest_rounds()}};
    Csv params({"model", "parameter", "value", "on_bound"});
    Csv summary({"model", "loglik", "starts_tried", "converged", "evals", "bounds_hit"});
    std::map<model::ModelKind, model::FitResult> fits;
    for (auto m : models) {
        const auto r = model::fit_mle(data, m, fo);
        fits[m] = r;
        std::string hits;
        for (const auto& h : r.bounds_hit) hits += (hits.empty() ? "" : ";") + h;
        for (const auto& name : model::parameter_names(m)) {
            params.row({std::string(model::to_string(m)), name, num(model::parameter_value(r.params, name)), r.hit(name) ? "1" : "0"});
        }
        summary.row({std::string(model::to_string(m)), num(r.loglik), std::to_string(r.starts_tried), r.converged ? "1" : "0",
                     std::to_string(r.evals), hits});
        json pj;
        for (const auto& name : model::parameter_names(m)) pj[name] = model::parameter_value(r.params, name);
        report["fits"][std::string(model::to_string(m))] = {{"params", pj}, {"loglik", r.loglik}, {"bounds_hit", r.bounds_hit}};
    }
    o.files["fit_params.csv"] = params.str();
    o.files["fit_summary.csv"] = summary.str();

    if (f.per_selector) {
        Csv ps({"model", "group", "selector", "parameter", "value", "loglik", "error"});
        for (auto m : models) {
            for (const auto& s : model::fit_per_selector(data, m, fo)) {
                if (!s.result) {
                    ps.row({std::string(model::to_string(m)), s.group, s.selector, "", "", "", s.error});
                    continue;
                }
                for (const auto& name : model::parameter_names(m)) {
                    ps.row({std::string(model::to_string(m)), s.group, s.selector, name,
                            num(model::parameter_value(s.result->params, name)), num(s.result->loglik), ""});
                }
            }
        }
        o.files["fit_per_selector.csv"] = ps.str();
    }

    if (f.cv) {
        model::CvOptions co;
        co.fit = fo;
        co.fold_starts = f.fold_starts;
        const auto cv = model::logo_cv(data, models, co);
        Csv folds({"heldout_group", "model", "loglik", "winner"});
        for (const auto& fold : cv.folds) {
            for (std::size_t i = 0; i < cv.models.size(); ++i) {
                folds.row({fold.heldout, std::string(model::to_string(cv.models[i])), num(fold.loglik[i]),
                           std::string(model::to_string(cv.models[fold.winner]))});
            }
        }
        Csv cs({"model", "mean_loglik", "sem", "wins"});
        for (std::size_t i = 0; i < cv.models.size(); ++i) {
            cs.row({std::string(model::to_string(cv.models[i])), num(cv.mean[i]), num(cv.sem[i]), std::to_string(cv.wins[i])});
        }
        o.files["cv_folds.csv"] = folds.str();
        o.files["cv_summary.csv"] = cs.str();
        report["cv"] = {{"winner", model::to_string(cv.overall_winner())}, {"folds", cv.folds.size()}};
        out << "cv winner: " << model::to_string(cv.overall_winner()) << "\n";
    }

    if (f.recovery) {
        // Truth is the fit to the supplied data; the synthetic design copies
        // its size.
        const auto m = models.front();
        model::RecoveryConfig rc;
        rc.model = m;
        rc.n_reps = f.reps;
        rc.seed = f.seed;
        rc.fit = fo;
        rc.sim.n_groups = static_cast<int>(data.groups.size());
        std::size_t rounds = 0, selectors = 0;
        for (const auto& g : data.groups) {
            selectors = std::max(selectors, g.selectors.size());
            for (const auto& s : g.selectors) rounds = std::max(rounds, s.steps.size());
        }
        rc.sim.n_rounds = static_cast<int>(rounds);
        rc.sim.n_selectors = static_cast<int>(selectors);
        rc.sim.n_human_candidates = rc.sim.n_bot_candidates = static_cast<int>(selectors);
        const auto rep = model::parameter_recovery(fits.at(m).params, rc);
        Csv rcsv({"model", "parameter", "truth_mean", "bias", "mae", "median_ae", "spearman"});
        for (const auto& row : rep.rows) {
            rcsv.row({std::string(model::to_string(m)), row.parameter, num(row.truth_mean), num(row.bias), num(row.mae),
                      num(row.median_ae), num(row.spearman)});
        }
        o.files["recovery.csv"] = rcsv.str();
        report["recovery"] = {{"model", model::to_string(m)}, {"reps", f.reps}};
    }

    o.files["fit_report.json"] = report.dump(2) + "\n";
    json m = manifest("fit", args);
    m["logs"] = json::array();
    for (const auto& p : f.logs) m["logs"].push_back({{"path", p}, {"sha256", file_sha256(p)}});
    m["seeds"] = {{"root", f.seed}};
    m["outputs"] = json::array();
    for (const auto& [name, _] : o.files) m["outputs"].push_back(name);
    o.files["manifest.json"] = m.dump(2) + "\n";
    o.commit(f.out);
    for (const auto& [k, r] : fits) out << model::to_string(k) << " loglik " << num(r.loglik) << "\n";
    return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeFlags {
    std::vector<std::string> logs;
    std::string analyses = "decomposition,baselines,beliefs,promises,predictability,group-stats";
    std::string out;
    std::string promise_via = "regex";
    int first_rounds = 0;
    int k_max = 6;
    std::uint64_t seed = 1;
    GatewayFlags gateway;
};

int cmd_analyze(const AnalyzeFlags& f, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto logs = load_logs(f.logs);
    std::vector<std::string> group_names;
    const auto records = merged_records(logs, f.first_rounds, group_names);
    const auto gname = [&](int g) { return group_names.at(static_cast<std::size_t>(g)); };

    std::set<std::string> wanted;
    {
        std::stringstream ss(f.analyses);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) wanted.insert(item);
        }
    }
    static const std::set<std::string> known{"decomposition", "baselines", "beliefs", "promises",
                                             "predictability", "group-stats", "questions", "clustering"};
    for (const auto& w : wanted) {
        if (!known.count(w)) throw ConfigError("unknown analysis: " + w);
    }
    const bool needs_gateway = wanted.count("questions") || wanted.count("clustering") || f.promise_via == "llm";
    std::shared_ptr<llm::Gateway> gateway;
    if (needs_gateway) gateway = make_gateway(f.gateway);

    Outputs o;
    json summary{{"records", records.size()}, {"groups", group_names.size()}, {"analyses", json::object()}};
    int failures = 0;
    const auto run = [&](const std::string& name, auto&& body) {
        if (!wanted.count(name)) return;
        try {
            body();
            summary["analyses"][name] = {{"status", "ok"}};
        } catch (const std::exception& e) {
            ++failures;
            summary["analyses"][name] = {{"status", "error"}, {"message", e.what()}};
            err << name << ": " << e.what() << "\n";
        }
    };

    run("decomposition", [&] {
        Csv csv({"group", "category", "count", "frequency"});
        for (const auto& [g, d] : analysis::decompose(records)) {
            for (auto c : analysis::kAllCategories) {
                csv.row({gname(g), std::string(analysis::to_string(c)), std::to_string(d.counts[static_cast<std::size_t>(c)]),
                         num(d.frequency(c))});
            }
        }
        o.files["decomposition.csv"] = csv.str();
    });

    run("baselines", [&] {
        Csv csv({"group", "rounds", "lower", "achieved", "upper", "rule_based", "optimal_rate", "chance_optimal_rate"});
        const auto bounds = analysis::selector_payoff_bounds(records);
        std::map<int, std::vector<std::pair<int, int>>> returns;
        std::map<int, int> optimal;
        for (const auto& r : records) {
            returns[r.triad.selector.group].emplace_back(r.return_a, r.return_b);
            optimal[r.triad.selector.group] += analysis::is_optimal(r.choice, r.return_a, r.return_b);
        }
        for (const auto& [g, b] : bounds) {
            csv.row({gname(g), std::to_string(b.rounds), num(b.lower), num(b.achieved), num(b.upper), num(b.rule_based),
                     num(optimal[g] / double(b.rounds)), num(analysis::chance_optimal_rate(returns[g]))});
        }
        o.files["baselines.csv"] = csv.str();
    });

    run("beliefs", [&] {
        const auto stats = analysis::belief_error_stats(records);
        Csv csv({"round", "kind", "n", "mean_error", "mean_abs_error", "sd_error"});
        for (const auto& [key, c] : stats.by_round) {
            csv.row({std::to_string(key.first), std::string(to_string(key.second)), std::to_string(c.n), num(c.mean_error),
                     num(c.mean_abs_error), num(c.sd_error)});
        }
        for (const auto& [k, c] : stats.overall) {
            csv.row({"all", std::string(to_string(k)), std::to_string(c.n), num(c.mean_error), num(c.mean_abs_error), num(c.sd_error)});
        }
        o.files["belief_errors.csv"] = csv.str();
    });

    // Promise parses are shared by the promise table and the predictability
    // regression.
    std::map<std::pair<std::size_t, int>, analysis::PromiseParse> parses;
    const auto parse_all = [&] {
        if (!parses.empty()) return;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            if (f.promise_via == "llm") {
                const auto [a, b] = analysis::extract_promises_llm(*gateway, llm::classification_profile(), r.question, r.reply_a, r.reply_b);
                parses[{i, 0}] = a;
                parses[{i, 1}] = b;
            } else {
                parses[{i, 0}] = analysis::extract_promise_regex(r.reply_a);
                parses[{i, 1}] = analysis::extract_promise_regex(r.reply_b);
            }
        }
    };

    run("promises", [&] {
        parse_all();
        Csv csv({"group", "round", "selector", "slot", "kind", "made", "promised", "returned", "via"});
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            for (auto s : {Slot::A, Slot::B}) {
                const auto& p = parses.at({i, s == Slot::A ? 0 : 1});
                csv.row({gname(r.triad.selector.group), std::to_string(r.round_index), std::to_string(r.triad.selector.index),
                         std::string(to_string(s)), std::string(to_string(r.triad.candidate(s).kind)), p.made ? "1" : "0",
                         std::to_string(p.amount), std::to_string(r.returned(s)), f.promise_via});
            }
        }
        o.files["promises.csv"] = csv.str();
    });

    run("predictability", [&] {
        parse_all();
        std::map<const RoundRecord*, std::size_t> index;
        for (std::size_t i = 0; i < records.size(); ++i) index[&records[i]] = i;
        const auto obs = analysis::return_observations(records, [&](const RoundRecord& r, Slot s) {
            return parses.at({index.at(&r), s == Slot::A ? 0 : 1});
        });
        Csv csv({"kind", "heldout_group", "n", "mse"});
        for (auto k : {Kind::Human, Kind::Bot}) {
            if (std::none_of(obs.begin(), obs.end(), [&](const auto& o2) { return o2.kind == k; })) continue;
            const auto res = analysis::return_predictability(obs, k);
            for (const auto& fold : res.folds) csv.row({std::string(to_string(k)), gname(fold.heldout_group), std::to_string(fold.n), num(fold.mse)});
            csv.row({std::string(to_string(k)), "all", std::to_string(res.n), num(res.mse)});
        }
        o.files["predictability.csv"] = csv.str();
        summary["analyses_meta"]["predictability"] = "per-group fixed intercepts; held-out groups use the mean intercept";
    });

    run("group-stats", [&] {
        // Optimal-choice rate against the chance rate, per group.
        std::map<int, std::vector<std::pair<int, int>>> returns;
        std::map<int, std::pair<int, int>> optimal;
        for (const auto& r : records) {
            returns[r.triad.selector.group].emplace_back(r.return_a, r.return_b);
            auto& [hits, n] = optimal[r.triad.selector.group];
            hits += analysis::is_optimal(r.choice, r.return_a, r.return_b);
            ++n;
        }
        std::vector<double> achieved, chance;
        for (const auto& [g, hn] : optimal) {
            achieved.push_back(hn.first / double(hn.second));
            chance.push_back(analysis::chance_optimal_rate(returns[g]));
        }
        const auto s = analysis::group_stats(achieved, chance, true);
        Csv csv({"measure", "n_groups", "mean_a", "mean_b", "mean_difference", "t", "df", "p", "cohens_d", "zero_variance"});
        csv.row({"optimal_rate_vs_chance", std::to_string(s.n_a), num(s.mean_a), num(s.mean_b), num(s.mean_difference), num(s.t),
                 num(s.df), num(s.p), num(s.cohens_d), s.zero_variance ? "1" : "0"});
        o.files["group_stats.csv"] = csv.str();
    });

    run("questions", [&] {
        Csv csv({"group", "round", "selector", "category"});
        for (const auto& r : records) {
            const auto c = analysis::classify_question(*gateway, llm::classification_profile(), r.question);
            csv.row({gname(r.triad.selector.group), std::to_string(r.round_index), std::to_string(r.triad.selector.index),
                     std::string(to_string(c))});
        }
        o.files["questions.csv"] = csv.str();
    });

    run("clustering", [&] {
        std::vector<std::string> texts;
        for (const auto& r : records) {
            texts.push_back(r.reply_a);
            texts.push_back(r.reply_b);
        }
        const auto vectors = gateway->embed(llm::embedding_profile(), texts);
        Csv scores({"k", "inertia", "silhouette", "davies_bouldin"});
        for (int k = 2; k <= f.k_max; ++k) {
            analysis::KMeansOptions ko;
            ko.seed = f.seed;
            const auto km = analysis::kmeans_with_scores(vectors, k, ko);
            scores.row({std::to_string(k), num(km.inertia), num(km.silhouette), num(km.davies_bouldin)});
        }
        Csv raw({"index", "kind"});
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            const auto& r = records[i / 2];
            raw.row({std::to_string(i), std::string(to_string(r.triad.candidate(i % 2 ? Slot::B : Slot::A).kind))});
        }
        o.files["clustering.csv"] = scores.str();
        std::string emb;
        for (const auto& v : vectors) {
            for (std::size_t j = 0; j < v.size(); ++j) emb += (j ? "," : "") + num(v[j]);
            emb += "\n";
        }
        o.files["embeddings.csv"] = emb;
        o.files["embedding_labels.csv"] = raw.str();
    });

    json m = manifest("analyze", args);
    m["logs"] = json::array();
    for (const auto& p : f.logs) m["logs"].push_back({{"path", p}, {"sha256", file_sha256(p)}});
    m["promise_mode"] = f.promise_via;
    m["first_rounds"] = f.first_rounds;
    describe_gateway(m, f.gateway, gateway.get());
    o.files["summary.json"] = summary.dump(2) + "\n";
    m["outputs"] = json::array();
    for (const auto& [name, _] : o.files) m["outputs"].push_back(name);
    o.files["manifest.json"] = m.dump(2) + "\n";
    if (failures > 0) {
        err << failures << " analysis(es) failed; nothing written\n";
        return kExitRuntime;
    }
    o.commit(f.out);
    out << "wrote " << o.files.size() << " files to " << f.out << "\n";
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& paths, std::ostream& out) {
    int bad = 0;
    for (const auto& p : paths) {
        const auto log = load_logs({p}).front();
        auto problems = session::verify_log(log);
        for (auto& d : session::disclosure_violations(log)) problems.push_back(std::move(d));
        out << p << ": " << session::import_records(log).size() << " rounds, " << problems.size() << " problem(s)\n";
        for (const auto& pr : problems) out << "  " << pr << "\n";
        bad += !problems.empty();
    }
    return bad ? kExitRuntime : kExitOk;
}

// ---- serve -----------------------------------------------------------------

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct ServeFlags {
    std::string config;
    std::string preset = "study3-transparent";
    std::string bind = "127.0.0.1:8080";
    std::string data_dir = "psg-data";
    std::string static_dir;
    GatewayFlags gateway;
};

int cmd_serve(const ServeFlags& f, std::ostream& out) {
    session::ServerOptions so;
    so.base_config = f.config.empty() ? session::preset(f.preset) : session::load_config(f.config);
    const auto colon = f.bind.rfind(':');
    if (colon == std::string::npos) throw ConfigError("--bind expects host:port");
    so.host = f.bind.substr(0, colon);
    try {
        so.port = std::stoi(f.bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad port in --bind: " + f.bind);
    }
    so.data_dir = f.data_dir;
    so.static_dir = f.static_dir;
    if (so.base_config.bot_backend == session::BotBackend::Llm) so.gateway = make_gateway(f.gateway);
    session::SessionServer server(so);
    server.start();
    out << "serving on http://" << so.host << ":" << server.port() << "\n" << std::flush;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    server.stop();
    return kExitOk;
}

void add_gateway_flags(CLI::App* cmd, GatewayFlags& g) {
    cmd->add_option("--mode", g.mode, "live | replay | record")->check(CLI::IsMember({"live", "replay", "record"}));
    cmd->add_option("--fixtures", g.fixtures, "fixture store (newline-delimited exchanges)");
    cmd->add_option("--base-url", g.base_url, "OpenAI-compatible endpoint overriding the profiles' base URL");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"partner selection game platform", "psg"};
    app.set_version_flag("--version", PSG_VERSION);
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* c_sim = app.add_subcommand("simulate", "run a headless session and write its event log");
    c_sim->add_option("--config", sim.config, "session config (JSON)");
    c_sim->add_option("--preset", sim.preset, "named preset")->check(CLI::IsMember(session::preset_names()));
    c_sim->add_option("--seed", sim.seed, "root seed (overrides the config)");
    c_sim->add_option("--out", sim.out, "output directory")->required();
    c_sim->add_option("--bots", sim.bots, "scripted | llm")->check(CLI::IsMember({"scripted", "llm"}));
    add_gateway_flags(c_sim, sim.gateway);

    FitFlags fit;
    auto* c_fit = app.add_subcommand("fit", "fit belief models to event logs");
    c_fit->add_option("logs", fit.logs, "event logs")->required();
    c_fit->add_option("--model", fit.model, "M0 | M1 | both")->check(CLI::IsMember({"M0", "M1", "both"}));
    c_fit->add_option("--out", fit.out, "output directory")->required();
    c_fit->add_flag("--cv", fit.cv, "leave-one-group-out cross-validation");
    c_fit->add_flag("--recovery", fit.recovery, "parameter recovery around the fitted values");
    c_fit->add_flag("--per-selector", fit.per_selector, "also fit every selector separately");
    c_fit->add_option("--reps", fit.reps, "recovery replications");
    c_fit->add_option("--starts", fit.starts, "optimizer starts")->check(CLI::PositiveNumber);
    c_fit->add_option("--fold-starts", fit.fold_starts, "random starts per CV fold");
    c_fit->add_option("--scope", fit.scope, "all | selected")->check(CLI::IsMember({"all", "selected"}));
    c_fit->add_option("--seed", fit.seed, "root seed");

    AnalyzeFlags an;
    auto* c_an = app.add_subcommand("analyze", "descriptive analyses as tidy CSV");
    c_an->add_option("logs", an.logs, "event logs")->required();
    c_an->add_option("--analyses", an.analyses, "comma-separated analyses");
    c_an->add_option("--out", an.out, "output directory")->required();
    c_an->add_option("--promise-via", an.promise_via, "regex | llm")->check(CLI::IsMember({"regex", "llm"}));
    c_an->add_option("--first-rounds", an.first_rounds, "only the first N rounds of every selector");
    c_an->add_option("--k-max", an.k_max, "largest k for clustering")->check(CLI::Range(2, 50));
    c_an->add_option("--seed", an.seed, "clustering seed");
    add_gateway_flags(c_an, an.gateway);

    ServeFlags sv;
    auto* c_sv = app.add_subcommand("serve", "run the live session server");
    c_sv->add_option("--config", sv.config, "base session config (JSON)");
    c_sv->add_option("--preset", sv.preset, "base preset")->check(CLI::IsMember(session::preset_names()));
    c_sv->add_option("--bind", sv.bind, "host:port");
    c_sv->add_option("--data", sv.data_dir, "directory for session logs");
    c_sv->add_option("--static", sv.static_dir, "web client bundle");
    add_gateway_flags(c_sv, sv.gateway);

    std::vector<std::string> verify_logs;
    auto* c_ver = app.add_subcommand("verify", "replay logs through the game rules");
    c_ver->add_option("logs", verify_logs, "event logs")->required();

    std::vector<char*> argv;
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (c_sim->parsed()) return cmd_simulate(sim, rest, out);
        if (c_fit->parsed()) return cmd_fit(fit, rest, out);
        if (c_an->parsed()) return cmd_analyze(an, rest, out, err);
        if (c_sv->parsed()) return cmd_serve(sv, out);
        if (c_ver->parsed()) return cmd_verify(verify_logs, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace psg::cli
