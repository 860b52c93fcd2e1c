#pragma once

#include <random>

#include "zpetri/execution.hpp"

namespace zpetri {

/// Schedule-driven agent: fires the listed transitions at the listed local
/// times on its own view of the net.
struct AgentSchedule {
    std::string name;
    std::vector<std::pair<long long, TransitionId>> schedule;
};

struct SimConfig {
    Net net;
    State initial;
    std::vector<AgentSchedule> agents;
    long long delay = 0;       // broadcast latency between each agent pair
    long long jitter = 0;      // seed-driven extra latency, 0 disables
    unsigned long long seed = 0;
    long long max_steps = 10000;
};

struct AgentView {
    std::string agent;
    long long time = 0;
    TransitionId fired;
    State view_before;  // the agent's local state when it decided to fire
};

struct SimReport {
    std::vector<FiringEvent> merged;
    std::vector<State> states;
    std::vector<std::pair<int, int>> illegal_intervals;  // [first, last] state indices
    std::vector<AgentView> views;
    bool resolution_attempted = false;
    ResolveResult resolution;
};

struct SimConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline long long pair_delay(const SimConfig& cfg, const std::string& from,
                            const std::string& to) {
    if (cfg.jitter <= 0) return cfg.delay;
    // deterministic per-pair jitter derived from the seed
    std::seed_seq seq{static_cast<unsigned long long>(cfg.seed),
                      static_cast<unsigned long long>(std::hash<std::string>{}(from)),
                      static_cast<unsigned long long>(std::hash<std::string>{}(to))};
    std::mt19937_64 rng(seq);
    return cfg.delay + static_cast<long long>(rng() % static_cast<unsigned long long>(cfg.jitter + 1));
}

}  // namespace detail

/// Deterministic delayed-broadcast run: agents fire on their local views
/// (zstate semantics, always enabled), firings reach the other agents after
/// the configured delay, and the merged timestamp-ordered trace is replayed
/// globally. Equal timestamps break ties by agent name.
inline SimReport simulate(const SimConfig& cfg) {
    {
        auto rep = validate(cfg.net);
        if (!rep.ok()) throw SimConfigError("invalid net: " + rep.errors.front());
        if (cfg.net.flavor == Flavor::Nat)
            throw SimConfigError("simulation runs under zstate or int semantics");
        if (cfg.delay < 0 || cfg.jitter < 0) throw SimConfigError("delays must be >= 0");
        for (const auto& a : cfg.agents)
            for (const auto& [_, t] : a.schedule)
                if (!cfg.net.has_transition(t))
                    throw SimConfigError("agent '" + a.name + "' schedules unknown transition '" +
                                         t + "'");
    }

    SimReport rep;
    for (const auto& a : cfg.agents)
        for (const auto& [time, t] : a.schedule)
            rep.merged.push_back(FiringEvent{t, a.name, time});
    std::stable_sort(rep.merged.begin(), rep.merged.end(),
                     [](const FiringEvent& a, const FiringEvent& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.agent < b.agent;
                     });
    if (static_cast<long long>(rep.merged.size()) > cfg.max_steps)
        throw SimConfigError("schedule exceeds max-steps");

    // local views: own firings plus broadcasts that have arrived by fire time
    for (std::size_t i = 0; i < rep.merged.size(); ++i) {
        const FiringEvent& e = rep.merged[i];
        State view = cfg.initial;
        for (std::size_t k = 0; k < rep.merged.size(); ++k) {
            const FiringEvent& other = rep.merged[k];
            const bool own = other.agent == e.agent;
            const bool before_own =
                own && (other.timestamp < e.timestamp ||
                        (other.timestamp == e.timestamp && k < i));
            const bool arrived =
                !own &&
                other.timestamp + detail::pair_delay(cfg, other.agent, e.agent) <= e.timestamp;
            if (before_own || arrived)
                view = msum(msub(view, cfg.net.in(other.transition)),
                            cfg.net.out(other.transition));
        }
        rep.views.push_back(AgentView{e.agent, e.timestamp, e.transition, view});
    }

    rep.states = fire_sequence(cfg.net, cfg.initial, rep.merged);

    // contiguous runs of illegal states
    int start = -1;
    for (int i = 0; i <= static_cast<int>(rep.states.size()); ++i) {
        const bool bad = i < static_cast<int>(rep.states.size()) && !is_legal(rep.states[i]);
        if (bad && start < 0) start = i;
        if (!bad && start >= 0) {
            rep.illegal_intervals.push_back({start, i - 1});
            start = -1;
        }
    }

    if (!rep.illegal_intervals.empty() && cfg.net.flavor == Flavor::ZState) {
        rep.resolution_attempted = true;
        rep.resolution = resolve(Trace{cfg.net, cfg.initial, rep.merged});
    }
    return rep;
}

}  // namespace zpetri
