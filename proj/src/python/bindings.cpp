#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mats/analysis/essential.hpp"
#include "mats/analysis/interactive.hpp"
#include "mats/analysis/properties.hpp"
#include "mats/platforms/config_json.hpp"
#include "mats/sim/delivery.hpp"
#include "mats/sim/reorg.hpp"
#include "mats/sim/trace_io.hpp"

namespace py = pybind11;
using namespace mats;
using json = nlohmann::json;

// JSON text crosses the boundary; the Python package turns it into dicts.
namespace {

PlatformKind kind_of(const std::string& name) {
    auto k = parse_platform_kind(name);
    if (!k) throw ConfigError("unknown platform '" + name + "'");
    return *k;
}

PlatformConfig config_of(const std::string& text) {
    PlatformConfig cfg;
    try {
        cfg = platform_config_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

Policy policy_of(const std::string& text) {
    if (text.empty()) return {};
    try {
        return policy_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

Trace trace_of(const std::string& jsonl) {
    std::istringstream in(jsonl);
    return read_trace_jsonl(in);
}

AgentSet ids(const std::vector<std::string>& v) {
    AgentSet out;
    for (const auto& s : v) out.push_back(AgentId{s});
    normalise(out);
    return out;
}

}  // namespace

PYBIND11_MODULE(_mats, m) {
    m.doc() = "Atomic-transaction multiagent platforms";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TraceError>(m, "TraceError", PyExc_ValueError);
    py::register_exception<KernelError>(m, "KernelError", PyExc_RuntimeError);
    py::register_exception<ProtocolViolation>(m, "ProtocolViolation", PyExc_RuntimeError);

    m.def("make_universe", [](const std::string& platform, std::size_t others, std::size_t servers,
                              std::size_t bootstrap) {
        return to_json(make_universe(kind_of(platform), others, servers, bootstrap)).dump();
    }, py::arg("platform"), py::arg("others"), py::arg("servers") = 1, py::arg("bootstrap") = 2);

    m.def("simulate", [](const std::string& config, const std::string& policy) {
        Trace t;
        {
            py::gil_scoped_release nogil;
            t = run_simulation(config_of(config), policy_of(policy));
        }
        std::ostringstream out;
        write_trace_jsonl(out, t);
        return out.str();
    }, py::arg("config"), py::arg("policy") = "", "Run a simulation; returns the JSONL trace.");

    m.def("check", [](const std::string& property, const std::string& trace_jsonl, std::size_t window) {
        Trace t = trace_of(trace_jsonl);
        std::size_t w = window ? window : t.policy.window;
        if (property == "follower-safety") return to_json(check_follower_safety(t)).dump();
        if (property == "liveness") return to_json(check_liveness(t, w)).dump();
        if (property == "autonomy") return to_json(check_autonomy(t)).dump();
        if (property == "fairness") return to_json(check_fairness(t, w)).dump();
        throw ConfigError("unknown trace property '" + property + "'");
    }, py::arg("property"), py::arg("trace"), py::arg("window") = 0);

    m.def("essential_sets", [](const std::string& config, std::size_t depth) {
        auto cfg = config_of(config);
        py::gil_scoped_release nogil;
        return to_json(minimal_essential_sets(cfg, depth)).dump();
    }, py::arg("config"), py::arg("depth") = 8);

    m.def("classify", [](const std::string& platform, std::size_t depth, const std::vector<std::string>& family) {
        auto kind = kind_of(platform);
        std::vector<PlatformConfig> fam;
        for (const auto& f : family) fam.push_back(config_of(f));
        if (fam.empty()) fam = default_family(kind);
        py::gil_scoped_release nogil;
        return to_json(classify(kind, fam, depth)).dump();
    }, py::arg("platform"), py::arg("depth") = 8, py::arg("family") = std::vector<std::string>{});

    m.def("minimal_delivery_path", [](const std::string& platform) {
        Platform p(delivery_universe(kind_of(platform)));
        auto d = minimal_delivery_path(p, AgentId{"p"}, AgentId{"q"});
        if (!d.found()) throw KernelError("delivery not found within the search bound");
        return std::make_pair(d.initial.size(), d.subsequent.size());
    }, py::arg("platform"));

    m.def("check_interactive", [](const std::string& config, const std::vector<std::string>& p,
                                  const std::vector<std::string>& p_prime, std::size_t depth) {
        Platform u(config_of(config));
        return to_json(check_interactive(u, ids(p), ids(p_prime), depth)).dump();
    }, py::arg("config"), py::arg("p"), py::arg("p_prime"), py::arg("depth") = 8);

    m.def("reorg_histogram", [](const std::string& config, const std::string& policy, std::size_t trials) {
        auto cfg = config_of(config);
        auto pol = policy_of(policy);
        ReorgHistogram h;
        {
            py::gil_scoped_release nogil;
            h = reorg_depth_histogram(cfg, pol, trials);
        }
        py::dict out;
        out["blocks_produced"] = h.blocks_produced;
        out["reorg_events"] = h.reorg_events;
        py::dict freq;
        for (const auto& [d, n] : h.abandoned) freq[py::int_(d)] = h.frequency(d);
        out["frequency"] = freq;
        return out;
    }, py::arg("config"), py::arg("policy") = "", py::arg("trials") = 100);

    m.def("minimal_hitting_sets", [](const std::vector<std::vector<std::string>>& family) {
        std::vector<AgentSet> fam;
        for (const auto& s : family) fam.push_back(ids(s));
        std::vector<std::vector<std::string>> out;
        for (const auto& s : minimal_hitting_sets(fam)) {
            out.emplace_back();
            for (const auto& a : s) out.back().push_back(a.str());
        }
        return out;
    }, py::arg("family"));
}
