#include "mats/platforms/config_json.hpp"

namespace mats {

nlohmann::ordered_json to_json(const PlatformConfig& cfg) {
    nlohmann::ordered_json j;
    j["platform"] = std::string(to_string(cfg.kind));
    auto agents = nlohmann::ordered_json::array();
    for (const auto& a : cfg.agents) {
        nlohmann::ordered_json e;
        e["id"] = a.id.str();
        e["role"] = std::string(to_string(a.role));
        if (a.home) e["home"] = a.home->str();
        agents.push_back(std::move(e));
    }
    j["agents"] = std::move(agents);
    auto boot = nlohmann::ordered_json::array();
    for (const auto& b : cfg.bootstrap) boot.push_back(b.str());
    j["bootstrap"] = std::move(boot);
    j["message_alphabet"] = cfg.alphabet;
    j["unique_posts"] = cfg.unique_posts;
    return j;
}

PlatformConfig platform_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("platform config must be a JSON object");
    PlatformConfig cfg;
    try {
        auto name = j.at("platform").get<std::string>();
        auto kind = parse_platform_kind(name);
        if (!kind) throw ConfigError("unknown platform '" + name + "'");
        cfg.kind = *kind;
        for (const auto& a : j.at("agents")) {
            AgentDecl d;
            d.id = AgentId{a.at("id").get<std::string>()};
            auto role_name = a.at("role").get<std::string>();
            auto role = parse_role(role_name);
            if (!role) throw ConfigError("unknown role '" + role_name + "'");
            d.role = *role;
            if (a.contains("home")) d.home = AgentId{a.at("home").get<std::string>()};
            cfg.agents.push_back(std::move(d));
        }
        if (j.contains("bootstrap"))
            for (const auto& b : j.at("bootstrap")) cfg.bootstrap.push_back(AgentId{b.get<std::string>()});
        normalise(cfg.bootstrap);
        if (j.contains("message_alphabet")) cfg.alphabet = j.at("message_alphabet").get<std::vector<std::string>>();
        if (j.contains("unique_posts")) cfg.unique_posts = j.at("unique_posts").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad platform config: ") + e.what());
    }
    return cfg;
}

}  // namespace mats
