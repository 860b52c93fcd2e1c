#include <iostream>

#include <CLI11.hpp>

#include "zpetri/json_io.hpp"

namespace {

using namespace zpetri;

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;

struct DomainFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Net load_net(const std::string& path, const std::string& semantics) {
    Net net = net_from_json(load_json_file(path));
    if (!semantics.empty()) {
        auto f = flavor_from_name(semantics);
        if (!f) throw IoError("unknown semantics '" + semantics + "'");
        net.flavor = *f;
    }
    auto rep = validate(net);
    if (!rep.ok()) {
        std::string msg = "invalid net:";
        for (const auto& e : rep.errors) msg += "\n  " + e;
        throw DomainFailure(msg);
    }
    return net;
}

std::string dirname_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

Diagram term_diagram(const Net& net, const std::string& text) {
    TermPtr t = parse_term(text);
    typecheck(*t, net);
    return of_term(*t, net);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integer and semi-integer Petri nets, execution diagrams, conflict resolution"};
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    long long seed_override = -1;
    app.add_flag("--quiet", quiet, "suppress informational output");
    app.add_option("--seed", seed_override, "override the simulation seed");

    std::string net_path, state_path, trace_path, pres_path, config_path, out_path;
    std::string lhs, rhs, term_text, transition, semantics, format = "json";

    auto* c_validate = app.add_subcommand("validate", "check a net file against its flavor");
    c_validate->add_option("--net", net_path, "net JSON file")->required();

    auto* c_fire = app.add_subcommand("fire", "fire one transition from a state");
    c_fire->add_option("--net", net_path)->required();
    c_fire->add_option("--state", state_path)->required();
    c_fire->add_option("--transition", transition)->required();
    c_fire->add_option("--semantics", semantics, "override flavor: nat|zstate|int");

    auto* c_replay = app.add_subcommand("replay", "replay a trace, printing every state");
    c_replay->add_option("--net", net_path)->required();
    c_replay->add_option("--state", state_path)->required();
    c_replay->add_option("--trace", trace_path)->required();

    auto* c_eq = app.add_subcommand("eq", "decide diagram equality of two terms");
    c_eq->add_option("--net", net_path)->required();
    c_eq->add_option("--lhs", lhs)->required();
    c_eq->add_option("--rhs", rhs)->required();

    auto* c_norm = app.add_subcommand("normalize", "print the normal-form diagram of a term");
    c_norm->add_option("--net", net_path)->required();
    c_norm->add_option("--term", term_text)->required();
    c_norm->add_option("--format", format, "json|dot");

    auto* c_transpose = app.add_subcommand("transpose", "transpose a term's diagram");
    c_transpose->add_option("--net", net_path)->required();
    c_transpose->add_option("--term", term_text)->required();
    c_transpose->add_option("--format", format, "json|dot");

    auto* c_fold = app.add_subcommand("fold", "net -> execution category presentation");
    c_fold->add_option("--net", net_path)->required();

    auto* c_unfold = app.add_subcommand("unfold", "presentation -> int net");
    c_unfold->add_option("--pres", pres_path)->required();

    auto* c_roundtrip = app.add_subcommand("roundtrip", "check the adjunction unit on a net");
    c_roundtrip->add_option("--net", net_path)->required();

    auto* c_resolve = app.add_subcommand("resolve", "reorder a trace into an all-legal one");
    c_resolve->add_option("--net", net_path)->required();
    c_resolve->add_option("--state", state_path)->required();
    c_resolve->add_option("--trace", trace_path)->required();

    auto* c_sim = app.add_subcommand("simulate", "run the multi-agent delayed-broadcast simulator");
    c_sim->add_option("--config", config_path)->required();

    auto* c_dot = app.add_subcommand("export-dot", "write a term's diagram as Graphviz");
    c_dot->add_option("--net", net_path)->required();
    c_dot->add_option("--term", term_text)->required();
    c_dot->add_option("-o,--output", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*c_validate) {
            Net net = net_from_json(load_json_file(net_path));
            auto rep = validate(net);
            for (const auto& w : rep.warnings)
                if (!quiet) std::cerr << "warning: " << w << "\n";
            for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
            if (!quiet && rep.ok()) std::cout << "ok\n";
            return rep.ok() ? kOk : kDomainFailure;
        }
        if (*c_fire) {
            Net net = load_net(net_path, semantics);
            State s = multiset_from_json(load_json_file(state_path));
            State next = fire(net, s, transition);
            std::cout << multiset_to_json(next).dump(2) << "\n";
            return kOk;
        }
        if (*c_replay) {
            Net net = load_net(net_path, "");
            State s = multiset_from_json(load_json_file(state_path));
            auto events = trace_events_from_json(load_json_file(trace_path));
            auto states = fire_sequence(net, s, events);
            json out = json::array();
            for (const auto& st : states) out.push_back(multiset_to_json(st));
            std::cout << out.dump(2) << "\n";
            return kOk;
        }
        if (*c_eq) {
            Net net = load_net(net_path, "");
            const bool eq = equal(term_diagram(net, lhs), term_diagram(net, rhs));
            if (!quiet) std::cout << (eq ? "equal" : "not equal") << "\n";
            return eq ? kOk : kDomainFailure;
        }
        if (*c_norm || *c_transpose) {
            Net net = load_net(net_path, "");
            Diagram d = term_diagram(net, term_text);
            if (*c_transpose) d = transpose(d);
            if (format == "dot")
                std::cout << to_dot(d);
            else
                std::cout << diagram_to_json(d).dump(2) << "\n";
            return kOk;
        }
        if (*c_fold) {
            Net net = load_net(net_path, "");
            std::cout << presentation_to_json(fold(net)).dump(2) << "\n";
            return kOk;
        }
        if (*c_unfold) {
            auto pres = presentation_from_json(load_json_file(pres_path));
            std::cout << net_to_json(unfold(pres)).dump(2) << "\n";
            return kOk;
        }
        if (*c_roundtrip) {
            Net net = load_net(net_path, "");
            auto rep = roundtrip_check(net);
            for (const auto& issue : rep.issues) std::cerr << "issue: " << issue << "\n";
            if (!quiet) {
                json j;
                j["ok"] = rep.ok;
                j["unit"] = morphism_maps_to_json(rep.unit);
                std::cout << j.dump(2) << "\n";
            }
            return rep.ok ? kOk : kDomainFailure;
        }
        if (*c_resolve) {
            Net net = load_net(net_path, "");
            Trace tr{net, multiset_from_json(load_json_file(state_path)),
                     trace_events_from_json(load_json_file(trace_path))};
            ResolveResult r = resolve(tr);
            std::cout << resolve_result_to_json(r).dump(2) << "\n";
            return r.ok ? kOk : kDomainFailure;
        }
        if (*c_sim) {
            SimConfig cfg = sim_config_from_json(load_json_file(config_path),
                                                 dirname_of(config_path));
            if (seed_override >= 0) cfg.seed = static_cast<unsigned long long>(seed_override);
            SimReport rep = simulate(cfg);
            std::cout << sim_report_to_json(rep).dump(2) << "\n";
            return kOk;
        }
        if (*c_dot) {
            Net net = load_net(net_path, "");
            Diagram d = term_diagram(net, term_text);
            std::ofstream out(out_path);
            if (!out) throw IoError("cannot write '" + out_path + "'");
            out << to_dot(d);
            if (!quiet) std::cout << "wrote " << out_path << "\n";
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsageError;
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
        return kUsageError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const NotEnabledError& e) {
        std::cerr << e.what() << "\n";
        return kDomainFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainFailure;
    }
    return kUsageError;
}
