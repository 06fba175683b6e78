#include "mats/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "CLI11.hpp"
#include "json.hpp"
#include "mats/analysis/essential.hpp"
#include "mats/analysis/interactive.hpp"
#include "mats/analysis/properties.hpp"
#include "mats/kernel/concise.hpp"
#include "mats/platforms/config_json.hpp"
#include "mats/sim/delivery.hpp"
#include "mats/sim/reorg.hpp"
#include "mats/sim/trace_io.hpp"

namespace mats::cli {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string platform;
    std::optional<std::size_t> agents, servers, bootstrap;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps, window;
    std::optional<double> rate_post, p_block, p_sync;
    std::size_t depth = 8;
    std::string trace_path, report_path;
    std::string property;
    std::size_t trials = 1000;
};

json load_config(const Options& o) {
    if (o.config_path.empty()) return json::object();
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot read config " + o.config_path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + o.config_path + " is not valid JSON: " + e.what());
    }
}

PlatformKind platform_kind(const Options& o, const json& doc) {
    std::string name = o.platform;
    if (name.empty() && doc.contains("platform") && doc["platform"].is_string()) name = doc["platform"];
    if (name.empty()) throw ConfigError("no platform given (use --platform or a config file)");
    auto k = parse_platform_kind(name);
    if (!k) throw ConfigError("unknown platform '" + name + "'");
    return *k;
}

// Flags win over the document; counts regenerate the agent list.
PlatformConfig platform_config(const Options& o, const json& doc) {
    PlatformKind kind = platform_kind(o, doc);
    bool counts = o.agents || o.servers || o.bootstrap;
    bool doc_matches = doc.contains("agents") && (o.platform.empty() || doc.value("platform", "") == o.platform);
    PlatformConfig cfg;
    if (doc_matches && !counts) {
        cfg = platform_config_from_json(doc);
    } else {
        std::size_t servers = o.servers.value_or(1);
        if (kind == PlatformKind::centralised && servers != 1)
            throw ConfigError("centralised platform needs exactly one server");
        cfg = make_universe(kind, o.agents.value_or(3), servers, o.bootstrap.value_or(0));
        if (doc.contains("message_alphabet")) {
            if (!doc["message_alphabet"].is_array()) throw ConfigError("message_alphabet must be a list");
            cfg.alphabet.clear();
            for (const auto& m : doc["message_alphabet"]) {
                if (!m.is_string()) throw ConfigError("message_alphabet entries must be strings");
                cfg.alphabet.push_back(m.get<std::string>());
            }
        }
    }
    cfg.kind = kind;
    cfg.validate();
    return cfg;
}

Policy policy(const Options& o, const json& doc) {
    Policy p;
    if (doc.contains("policy")) p = policy_from_json(doc["policy"], p);
    if (o.seed) p.seed = *o.seed;
    if (o.steps) p.max_steps = *o.steps;
    if (o.window) p.window = *o.window;
    if (o.rate_post) p.rate_post = *o.rate_post;
    if (o.p_block) p.p_block = *o.p_block;
    if (o.p_sync) p.p_sync = *o.p_sync;
    p.validate();
    return p;
}

void emit(const Options& o, std::ostream& out, const ojson& j) {
    out << j.dump(2) << '\n';
    if (o.report_path.empty()) return;
    std::ofstream f(o.report_path);
    if (!f || !(f << j.dump(2) << '\n')) throw IoError("cannot write report " + o.report_path);
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read trace " + path);
    return read_trace_jsonl(in);
}

void save_trace(const std::string& path, const Trace& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write trace " + path);
    write_trace_jsonl(f, t);
    if (!f) throw IoError("cannot write trace " + path);
}

int cmd_simulate(const Options& o, std::ostream& out) {
    json doc = load_config(o);
    auto cfg = platform_config(o, doc);
    auto pol = policy(o, doc);
    Trace trace = run_simulation(cfg, pol);
    if (!o.trace_path.empty()) save_trace(o.trace_path, trace);

    Platform platform(cfg);
    std::size_t posts = 0;
    for (const auto& s : trace.steps) posts += s.tx.schema == "Post";
    auto fair = check_fairness(trace, pol.window);
    auto live = check_liveness(trace, pol.window);
    ojson j;
    j["platform"] = std::string(to_string(cfg.kind));
    j["seed"] = pol.seed;
    j["steps"] = trace.steps.size();
    j["quiescent"] = trace.quiescent;
    j["posts"] = posts;
    j["deliveries"] = live.delivered;
    j["max_delivery_latency"] = live.max_latency;
    if (!platform.uses_feeds()) {
        auto reorgs = observe_reorgs(trace);
        j["blocks"] = reorgs.blocks_produced;
        j["reorgs"] = reorgs.reorg_events;
    }
    j["window"] = pol.window;
    j["fair"] = fair.fair;
    j["final_digest"] = to_hex(digest(trace.final_configuration()));
    if (!o.trace_path.empty()) j["trace"] = o.trace_path;
    emit(o, out, j);
    return kOk;
}

std::vector<PlatformConfig> family(const json& doc, PlatformKind kind) {
    if (!doc.contains("universes")) return default_family(kind);
    std::vector<PlatformConfig> fam;
    for (const auto& u : doc["universes"]) {
        json e = u;
        if (!e.contains("platform")) e["platform"] = std::string(to_string(kind));
        auto cfg = platform_config_from_json(e);
        cfg.validate();
        fam.push_back(std::move(cfg));
    }
    return fam;
}

int cmd_classify(const Options& o, std::ostream& out) {
    json doc = load_config(o);
    PlatformKind kind = platform_kind(o, doc);
    auto report = classify(kind, family(doc, kind), o.depth);
    emit(o, out, to_json(report));
    out << to_string(report.verdict) << '\n';
    return report.verdict == PlatformClass::unclassified ? kUnclassified : kOk;
}

Trace trace_for_check(const Options& o) {
    if (!o.trace_path.empty()) return load_trace(o.trace_path);
    json doc = load_config(o);
    return run_simulation(platform_config(o, doc), policy(o, doc));
}

int cmd_check(const Options& o, std::ostream& out) {
    const std::string& prop = o.property;
    if (prop == "follower-safety") {
        auto v = check_follower_safety(trace_for_check(o));
        emit(o, out, to_json(v));
        return v.holds ? kOk : kViolated;
    }
    if (prop == "fairness" || prop == "liveness") {
        Trace t = trace_for_check(o);
        std::size_t w = o.window.value_or(t.policy.window);
        if (w < 1) throw ConfigError("fairness window must be at least 1");
        if (prop == "fairness") {
            auto v = check_fairness(t, w);
            emit(o, out, to_json(v));
            return v.fair ? kOk : kViolated;
        }
        auto v = check_liveness(t, w);
        emit(o, out, to_json(v));
        switch (v.status) {
            case LivenessVerdict::Status::holds: return kOk;
            case LivenessVerdict::Status::violated: return kViolated;
            default: return kInconclusive;
        }
    }
    if (prop == "autonomy") {
        auto v = check_autonomy(trace_for_check(o));
        emit(o, out, to_json(v));
        return v.holds ? kOk : kViolated;
    }
    json doc = load_config(o);
    Options sized = o;
    if (!sized.agents && !doc.contains("agents")) sized.agents = 4;
    if (!sized.bootstrap && !doc.contains("agents")) {
        PlatformKind k = platform_kind(o, doc);
        if (k == PlatformKind::bitcoin || k == PlatformKind::decentralised) sized.bootstrap = 1;
    }
    Platform universe(platform_config(sized, doc));
    if (prop == "interactive") {
        auto sweep = check_interactive_all(universe, 4, o.depth);
        ojson j;
        j["property"] = "interactive";
        j["platform"] = std::string(to_string(universe.kind()));
        j["depth"] = o.depth;
        j["verdict"] = to_string(sweep.verdict);
        auto cases = ojson::array();
        for (const auto& c : sweep.cases) cases.push_back(to_json(c));
        j["cases"] = std::move(cases);
        emit(o, out, j);
        switch (sweep.verdict) {
            case Tristate::yes: return kOk;
            case Tristate::no: return kViolated;
            default: return kInconclusive;
        }
    }
    if (prop == "concise") {
        // Finite T and S: enabled instances and local states over the bounded reachable set.
        auto reach = reachable_configurations(universe.schemas(), universe.initial_configuration(), o.depth);
        std::vector<Tx> ts;
        std::vector<LocalState> states;
        std::unordered_set<std::uint64_t> seen;
        for (const auto& c : reach.configs) {
            for (auto& t : enabled_instances(universe.schemas(), c)) ts.push_back(std::move(t));
            for (const auto& s : c.states()) {
                Fnv1a h;
                digest_into(h, s);
                if (seen.insert(h.value()).second) states.push_back(s);
            }
        }
        bool ok = is_concise(ts, states);
        ojson j;
        j["property"] = "concise";
        j["platform"] = std::string(to_string(universe.kind()));
        j["transactions"] = ts.size();
        j["local_states"] = states.size();
        j["verdict"] = ok ? "holds" : "violated";
        j["quality"] = reach.complete ? "exact" : "bounded";
        emit(o, out, j);
        if (!ok) return kViolated;
        return reach.complete ? kOk : kInconclusive;
    }
    throw ConfigError("unknown property '" + prop + "'");
}

int cmd_delivery(const Options& o, std::ostream& out) {
    json doc = load_config(o);
    PlatformKind kind = platform_kind(o, doc);
    if (kind == PlatformKind::bitcoin) throw ConfigError("the bitcoin substrate carries no posts");
    Platform p(delivery_universe(kind));
    auto d = minimal_delivery_path(p, AgentId{"p"}, AgentId{"q"}, std::max<std::size_t>(o.depth, 12));
    auto steps = [](const std::vector<Tx>& w) {
        auto a = ojson::array();
        for (const auto& t : w) {
            std::string s = t.schema;
            for (const auto& id : t.participants) s += " " + id.str();
            a.push_back(s);
        }
        return a;
    };
    ojson j;
    j["platform"] = std::string(to_string(kind));
    j["universe"] = to_json(p.config());
    j["initial"] = d.initial.size();
    j["subsequent"] = d.subsequent.size();
    j["initial_verdict"] = to_string(d.initial_verdict);
    j["subsequent_verdict"] = to_string(d.subsequent_verdict);
    j["initial_path"] = steps(d.initial);
    j["subsequent_path"] = steps(d.subsequent);
    emit(o, out, j);
    if (d.found()) return kOk;
    return d.initial_verdict == ReachVerdict::budget_exhausted ||
                   d.subsequent_verdict == ReachVerdict::budget_exhausted
               ? kInconclusive
               : kViolated;
}

int cmd_reorg(const Options& o, std::ostream& out) {
    json doc = load_config(o);
    Options sized = o;
    if (!sized.bootstrap && !doc.contains("agents")) sized.bootstrap = 1;
    auto cfg = platform_config(sized, doc);
    Policy pol = policy(o, doc);
    if (!o.steps && !doc.contains("policy")) pol.max_steps = 300;
    auto h = reorg_depth_histogram(cfg, pol, o.trials);
    ojson j;
    j["platform"] = std::string(to_string(cfg.kind));
    j["trials"] = h.trials;
    j["steps"] = pol.max_steps;
    j["p_block"] = pol.p_block;
    j["p_sync"] = pol.p_sync;
    j["blocks_produced"] = h.blocks_produced;
    j["reorg_events"] = h.reorg_events;
    auto rows = ojson::array();
    for (std::size_t d = 0; d <= std::max<std::size_t>(5, h.abandoned.empty() ? 0 : h.abandoned.rbegin()->first); ++d) {
        auto [lo, hi] = h.interval(d);
        rows.push_back({{"depth", d}, {"abandoned", h.count(d)}, {"frequency", h.frequency(d)}, {"ci95", {lo, hi}}});
    }
    j["histogram"] = std::move(rows);
    emit(o, out, j);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Atomic-transaction multiagent platforms: simulate, classify, check"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON platform/run document");
        sub->add_option("--platform", o.platform, "centralised|bitcoin|decentralised|federated|grassroots");
        sub->add_option("--agents", o.agents, "users / clients / peers / agents");
        sub->add_option("--servers", o.servers, "server count");
        sub->add_option("--bootstrap", o.bootstrap, "bootstrap agent count");
        sub->add_option("--seed", o.seed);
        sub->add_option("--steps", o.steps, "maximum steps per run");
        sub->add_option("--window", o.window, "fairness window W");
        sub->add_option("--rate-post", o.rate_post);
        sub->add_option("--p-block", o.p_block);
        sub->add_option("--p-sync", o.p_sync);
        sub->add_option("--depth", o.depth, "exploration depth");
        sub->add_option("--trace", o.trace_path, "trace JSONL path");
        sub->add_option("--report", o.report_path, "write the JSON report here too");
    };
    auto* simulate = app.add_subcommand("simulate", "run a seeded, window-fair simulation");
    auto* classify_cmd = app.add_subcommand("classify", "essential agents and platform class");
    auto* check = app.add_subcommand("check", "verify a correctness property");
    auto* delivery = app.add_subcommand("delivery", "minimal delivery path lengths");
    auto* reorg = app.add_subcommand("reorg", "reorg burial-depth histogram");
    for (auto* s : {simulate, classify_cmd, check, delivery, reorg}) common(s);
    check->add_option("--property", o.property)
        ->required()
        ->check(CLI::IsMember({"follower-safety", "liveness", "autonomy", "interactive", "fairness", "concise"}));
    reorg->add_option("--trials", o.trials);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }

    try {
        if (*simulate) return cmd_simulate(o, out);
        if (*classify_cmd) return cmd_classify(o, out);
        if (*check) return cmd_check(o, out);
        if (*delivery) return cmd_delivery(o, out);
        if (*reorg) return cmd_reorg(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalid;
    } catch (const TraceError& e) {
        err << "malformed trace: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace mats::cli
