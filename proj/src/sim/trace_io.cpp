#include "mats/sim/trace_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "mats/platforms/config_json.hpp"

namespace mats {

nlohmann::ordered_json to_json(const Policy& p) {
    nlohmann::ordered_json j;
    j["seed"] = p.seed;
    j["max_steps"] = p.max_steps;
    j["window"] = p.window;
    j["rate_post"] = p.rate_post;
    j["rate_follow"] = p.rate_follow;
    j["rate_join"] = p.rate_join;
    j["p_block"] = p.p_block;
    j["p_sync"] = p.p_sync;
    j["join_before_mining"] = p.join_before_mining;
    return j;
}

Policy policy_from_json(const nlohmann::json& j, Policy base) {
    if (!j.is_object()) throw ConfigError("policy must be a JSON object");
    try {
        auto take = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        take("seed", base.seed);
        take("max_steps", base.max_steps);
        take("window", base.window);
        take("rate_post", base.rate_post);
        take("rate_follow", base.rate_follow);
        take("rate_join", base.rate_join);
        take("p_block", base.p_block);
        take("p_sync", base.p_sync);
        take("join_before_mining", base.join_before_mining);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad policy: ") + e.what());
    }
    return base;
}

void write_trace_jsonl(std::ostream& out, const Trace& trace) {
    nlohmann::ordered_json header;
    header["type"] = "header";
    header["seed"] = trace.policy.seed;
    header["platform"] = to_json(trace.platform);
    header["policy"] = to_json(trace.policy);
    out << header.dump() << '\n';
    for (const auto& s : trace.steps) {
        nlohmann::ordered_json j;
        j["step"] = s.index;
        j["schema"] = s.tx.schema;
        auto ids = [](const auto& v) {
            auto a = nlohmann::ordered_json::array();
            for (const auto& id : v) a.push_back(id.str());
            return a;
        };
        j["participants"] = ids(s.tx.participants);
        j["active"] = ids(s.active);
        auto params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.tx.params) params[k] = v;
        j["params"] = std::move(params);
        j["digest"] = to_hex(s.digest);
        out << j.dump() << '\n';
    }
}

Trace read_trace_jsonl(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto parse = [&](const std::string& text) {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw TraceError("line " + std::to_string(lineno) + ": " + e.what());
        }
    };

    Trace trace;
    bool have_header = false;
    std::optional<Platform> platform;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto j = parse(line);
        if (!have_header) {
            if (!j.is_object() || j.value("type", "") != "header")
                throw TraceError("trace must start with a header record");
            try {
                trace.platform = platform_config_from_json(j.at("platform"));
                trace.policy = policy_from_json(j.at("policy"));
                trace.platform.validate();
                platform.emplace(trace.platform);
            } catch (const nlohmann::json::exception& e) {
                throw TraceError(std::string("bad header: ") + e.what());
            } catch (const ConfigError& e) {
                throw TraceError(std::string("bad header: ") + e.what());
            }
            trace.configs.push_back(platform->initial_configuration());
            have_header = true;
            continue;
        }
        TraceStep step;
        std::vector<AgentId> participants;
        AgentSet active;
        Params params;
        std::string schema, digest_hex;
        try {
            step.index = j.at("step").get<std::size_t>();
            schema = j.at("schema").get<std::string>();
            for (const auto& p : j.at("participants")) participants.push_back(AgentId{p.get<std::string>()});
            for (const auto& p : j.at("active")) active.push_back(AgentId{p.get<std::string>()});
            for (const auto& [k, v] : j.at("params").items()) params.emplace_back(k, v.get<std::string>());
            digest_hex = j.at("digest").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw TraceError("line " + std::to_string(lineno) + ": " + e.what());
        }
        params = make_params(std::move(params));
        normalise(active);
        const std::string where = "step " + std::to_string(step.index) + ": ";
        if (step.index != trace.steps.size()) throw TraceError(where + "out of sequence");

        const Config& c = trace.configs.back();
        std::optional<Tx> match;
        for (auto& t : enabled_instances_of(platform->schemas(), c, schema))
            if (t.participants == participants && t.params == params) {
                match = std::move(t);
                break;
            }
        if (!match) throw TraceError(where + schema + " is not enabled here");
        step.active = participants_of(*match).active;
        if (step.active != active) throw TraceError(where + "active set differs from replay");
        trace.configs.push_back(apply_unchecked(c, *match));
        step.digest = digest(trace.configs.back());
        if (to_hex(step.digest) != digest_hex) throw TraceError(where + "digest mismatch on replay");
        step.tx = std::move(*match);
        trace.steps.push_back(std::move(step));
    }
    if (!have_header) throw TraceError("empty trace");
    return trace;
}

}  // namespace mats
