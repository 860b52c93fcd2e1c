#pragma once

#include <fstream>

#include <json.hpp>

#include "zpetri/functor.hpp"
#include "zpetri/sim.hpp"

namespace zpetri {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json multiset_to_json(const SignedMultiset& m) {
    json j = json::object();
    for (const auto& [p, k] : m.entries()) j[p] = k;
    return j;
}

inline SignedMultiset multiset_from_json(const json& j) {
    if (!j.is_object()) throw IoError("expected a JSON object of integers");
    SignedMultiset m;
    for (const auto& [p, k] : j.items()) {
        if (!k.is_number_integer()) throw IoError("entry '" + p + "' is not an integer");
        m.add(p, k.get<long long>());
    }
    return m;
}

inline json net_to_json(const Net& net) {
    json j;
    j["flavor"] = flavor_name(net.flavor);
    j["places"] = net.places;
    j["transitions"] = json::array();
    for (const auto& t : net.transitions)
        j["transitions"].push_back(
            {{"name", t}, {"in", multiset_to_json(net.in(t))}, {"out", multiset_to_json(net.out(t))}});
    return j;
}

/// Accepts a net (flavor required) or a presentation (flavor absent, which
/// defaults to int per the unfold convention).
inline Net net_from_json(const json& j, bool flavor_required = true) {
    Net net;
    if (j.contains("flavor")) {
        auto f = flavor_from_name(j.at("flavor").get<std::string>());
        if (!f) throw IoError("unknown flavor '" + j.at("flavor").get<std::string>() + "'");
        net.flavor = *f;
    } else if (flavor_required) {
        throw IoError("net is missing its flavor");
    } else {
        net.flavor = Flavor::Int;
    }
    for (const auto& p : j.at("places")) net.places.push_back(p.get<std::string>());
    for (const auto& t : j.at("transitions")) {
        SignedMultiset in, out;
        if (t.contains("in")) in = multiset_from_json(t.at("in"));
        if (t.contains("out")) out = multiset_from_json(t.at("out"));
        net.add_transition(t.at("name").get<std::string>(), std::move(in), std::move(out));
    }
    return net;
}

inline json presentation_to_json(const CategoryPresentation& p) {
    json j;
    j["places"] = p.places;
    j["transitions"] = json::array();
    for (const auto& t : p.generator_order) {
        const auto& [in, out] = p.generators.at(t);
        j["transitions"].push_back(
            {{"name", t}, {"in", multiset_to_json(in)}, {"out", multiset_to_json(out)}});
    }
    return j;
}

inline CategoryPresentation presentation_from_json(const json& j) {
    Net n = net_from_json(j, /*flavor_required=*/false);
    CategoryPresentation p;
    p.places = n.places;
    p.generator_order = n.transitions;
    for (const auto& t : n.transitions) p.generators[t] = {n.in(t), n.out(t)};
    return p;
}

inline json trace_events_to_json(const std::vector<FiringEvent>& events) {
    json j = json::array();
    for (const auto& e : events) {
        json je = {{"transition", e.transition}};
        if (!e.agent.empty()) je["agent"] = e.agent;
        je["timestamp"] = e.timestamp;
        j.push_back(je);
    }
    return j;
}

inline std::vector<FiringEvent> trace_events_from_json(const json& j) {
    if (!j.is_array()) throw IoError("trace must be a JSON array");
    std::vector<FiringEvent> events;
    for (const auto& je : j) {
        FiringEvent e;
        e.transition = je.at("transition").get<std::string>();
        if (je.contains("agent")) e.agent = je.at("agent").get<std::string>();
        if (je.contains("timestamp")) e.timestamp = je.at("timestamp").get<long long>();
        events.push_back(std::move(e));
    }
    return events;
}

inline json morphism_maps_to_json(const NetMorphism& m) {
    json j;
    j["f"] = json::object();
    for (const auto& [t, ft] : m.f) j["f"][t] = ft;
    j["g"] = json::object();
    for (const auto& [p, img] : m.g) {
        json pairs = json::array();
        for (const auto& [q, k] : img.entries()) pairs.push_back(json::array({q, k}));
        j["g"][p] = pairs;
    }
    return j;
}

inline void morphism_maps_from_json(const json& j, NetMorphism& m) {
    for (const auto& [t, ft] : j.at("f").items()) m.f[t] = ft.get<std::string>();
    for (const auto& [p, pairs] : j.at("g").items()) {
        SignedMultiset img;
        for (const auto& pr : pairs) img.add(pr.at(0).get<std::string>(), pr.at(1).get<long long>());
        m.g[p] = std::move(img);
    }
}

inline const char* site_name(Endpoint::Site s) {
    switch (s) {
        case Endpoint::Site::Dom: return "dom";
        case Endpoint::Site::Cod: return "cod";
        case Endpoint::Site::BoxIn: return "box-in";
        case Endpoint::Site::BoxOut: return "box-out";
    }
    return "?";
}

inline json endpoint_to_json(const Endpoint& e) {
    return {{"site", site_name(e.site)}, {"index", e.index}, {"place", e.place}};
}

inline json string_to_json(const ObjString& s) {
    json j = json::array();
    for (const Letter& l : s) j.push_back(l.place + (l.sign < 0 ? "^-1" : ""));
    return j;
}

inline json diagram_to_json(const Diagram& d) {
    json j;
    j["dom"] = string_to_json(d.dom);
    j["cod"] = string_to_json(d.cod);
    j["boxes"] = d.boxes;
    j["wires"] = json::array();
    for (const auto& w : d.wires)
        j["wires"].push_back(
            {{"from", endpoint_to_json(w.from)}, {"to", endpoint_to_json(w.to)}, {"place", w.place}});
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

/// Config paths (net, state) are resolved relative to base_dir.
inline SimConfig sim_config_from_json(const json& j, const std::string& base_dir) {
    auto resolve_path = [&](const std::string& p) {
        if (!p.empty() && p.front() == '/') return p;
        return base_dir.empty() ? p : base_dir + "/" + p;
    };
    SimConfig cfg;
    cfg.net = net_from_json(load_json_file(resolve_path(j.at("net").get<std::string>())));
    cfg.initial = multiset_from_json(load_json_file(resolve_path(j.at("state").get<std::string>())));
    for (const auto& ja : j.at("agents")) {
        AgentSchedule a;
        a.name = ja.at("name").get<std::string>();
        for (const auto& entry : ja.at("schedule"))
            a.schedule.emplace_back(entry.at(0).get<long long>(), entry.at(1).get<std::string>());
        cfg.agents.push_back(std::move(a));
    }
    if (j.contains("delay")) cfg.delay = j.at("delay").get<long long>();
    if (j.contains("jitter")) cfg.jitter = j.at("jitter").get<long long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long long>();
    if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<long long>();
    return cfg;
}

inline json resolve_result_to_json(const ResolveResult& r) {
    json j;
    j["ok"] = r.ok;
    if (r.ok) {
        j["reordered"] = true;
        j["events"] = trace_events_to_json(r.events);
        json states = json::array();
        for (const auto& s : r.states) states.push_back(multiset_to_json(s));
        j["states"] = states;
    } else {
        j["reason"] = r.reason;
        j["best_prefix"] = trace_events_to_json(r.best_prefix);
    }
    return j;
}

inline json sim_report_to_json(const SimReport& r) {
    json j;
    j["trace"] = trace_events_to_json(r.merged);
    json states = json::array();
    for (const auto& s : r.states) states.push_back(multiset_to_json(s));
    j["states"] = states;
    json intervals = json::array();
    for (const auto& [a, b] : r.illegal_intervals) intervals.push_back(json::array({a, b}));
    j["illegal_intervals"] = intervals;
    json views = json::array();
    for (const auto& v : r.views)
        views.push_back({{"agent", v.agent},
                         {"time", v.time},
                         {"fired", v.fired},
                         {"view_before", multiset_to_json(v.view_before)}});
    j["agent_views"] = views;
    j["resolution_attempted"] = r.resolution_attempted;
    if (r.resolution_attempted) j["resolution"] = resolve_result_to_json(r.resolution);
    return j;
}

}  // namespace zpetri
