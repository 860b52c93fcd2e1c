#pragma once

#include <deque>
#include <functional>

#include "zpetri/diagram.hpp"

namespace zpetri {

/// A timestamped firing log over a zstate or int net.
struct Trace {
    Net net;
    State initial;
    std::vector<FiringEvent> events;
};

struct TraceDiagram {
    Diagram diagram;              // boxes are positional: box i is event i
    std::vector<State> states;    // matches fire_sequence
};

struct CyclicError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builds the execution diagram of a trace. Tokens are frontier stubs
/// consumed oldest-first; missing tokens are borrowed through a cup whose
/// dual end stays pending; producers repay the oldest outstanding debt of
/// another event immediately (a cap). A box never pays its own borrow, so
/// single events cannot self-loop.
inline TraceDiagram trace_to_diagram(const Trace& tr) {
    if (tr.net.flavor == Flavor::Nat)
        throw InvalidNetError("trace_to_diagram requires zstate or int flavor");
    for (const auto& e : tr.events)
        if (!tr.net.has_transition(e.transition)) throw UnknownTransitionError(e.transition);

    struct Stub {
        Endpoint end;
        int birth;  // event index, -1 for the initial marking
    };
    std::map<PlaceId, std::deque<Stub>> avail;  // producer ends waiting for a consumer
    std::map<PlaceId, std::deque<Stub>> debts;  // consumer ends waiting for a producer

    TraceDiagram out;
    Diagram& d = out.diagram;
    d.dom = section(tr.initial);
    for (int i = 0; i < static_cast<int>(d.dom.size()); ++i) {
        const Letter& l = d.dom[i];
        if (l.sign > 0)
            avail[l.place].push_back({Endpoint{Endpoint::Site::Dom, i, l.place}, -1});
        else
            debts[l.place].push_back({Endpoint{Endpoint::Site::Dom, i, l.place}, -1});
    }

    out.states.push_back(tr.initial);
    for (int ei = 0; ei < static_cast<int>(tr.events.size()); ++ei) {
        const TransitionId& t = tr.events[ei].transition;
        d.boxes.push_back(t);

        auto pop_avail = [&](const PlaceId& p, bool exclude_self) -> std::optional<Stub> {
            auto& q = avail[p];
            for (auto it = q.begin(); it != q.end(); ++it)
                if (!exclude_self || it->birth != ei) {
                    Stub s = *it;
                    q.erase(it);
                    return s;
                }
            return std::nullopt;
        };
        auto pop_debt = [&](const PlaceId& p) -> std::optional<Stub> {
            auto& q = debts[p];
            for (auto it = q.begin(); it != q.end(); ++it)
                if (it->birth != ei) {
                    Stub s = *it;
                    q.erase(it);
                    return s;
                }
            return std::nullopt;
        };

        for (const auto& [p, k] : tr.net.in(t).entries()) {
            if (k > 0) {
                Endpoint port{Endpoint::Site::BoxIn, ei, p};
                for (long long c = 0; c < k; ++c) {
                    if (auto s = pop_avail(p, false))
                        d.wires.push_back(Wire{s->end, port, p});
                    else
                        debts[p].push_back({port, ei});  // the borrow
                }
            } else {
                Endpoint port{Endpoint::Site::BoxIn, ei, p};
                for (long long c = 0; c < -k; ++c) avail[p].push_back({port, ei});
            }
        }
        for (const auto& [p, k] : tr.net.out(t).entries()) {
            if (k > 0) {
                Endpoint port{Endpoint::Site::BoxOut, ei, p};
                for (long long c = 0; c < k; ++c) {
                    if (auto s = pop_debt(p))
                        d.wires.push_back(Wire{port, s->end, p});  // repay: the cap
                    else
                        avail[p].push_back({port, ei});
                }
            } else {
                Endpoint port{Endpoint::Site::BoxOut, ei, p};
                for (long long c = 0; c < -k; ++c) {
                    if (auto s = pop_avail(p, true))
                        d.wires.push_back(Wire{s->end, port, p});
                    else
                        debts[p].push_back({port, ei});
                }
            }
        }
        out.states.push_back(fire(tr.net, out.states.back(), t));
    }

    // leftover stubs become the codomain: places ascending, positives first,
    // oldest first inside each group
    std::set<PlaceId> places;
    for (const auto& [p, q] : avail)
        if (!q.empty()) places.insert(p);
    for (const auto& [p, q] : debts)
        if (!q.empty()) places.insert(p);
    for (const PlaceId& p : places) {
        for (const Stub& s : avail[p]) {
            const int pos = static_cast<int>(d.cod.size());
            d.cod.push_back(Letter{p, +1});
            d.wires.push_back(Wire{s.end, Endpoint{Endpoint::Site::Cod, pos, p}, p});
        }
        for (const Stub& s : debts[p]) {
            const int pos = static_cast<int>(d.cod.size());
            d.cod.push_back(Letter{p, -1});
            d.wires.push_back(Wire{Endpoint{Endpoint::Site::Cod, pos, p}, s.end, p});
        }
    }
    return out;
}

/// Reachability between boxes along token-flow wires.
struct CausalOrder {
    int size = 0;
    std::set<std::pair<int, int>> direct;
    std::set<std::pair<int, int>> relation;  // transitive closure

    bool precedes(int a, int b) const { return relation.count({a, b}) != 0; }

    /// order[k] = event index scheduled at step k
    bool respected_by(const std::vector<int>& order) const {
        std::vector<int> at(size, -1);
        for (int k = 0; k < static_cast<int>(order.size()); ++k) at[order[k]] = k;
        for (const auto& [a, b] : direct)
            if (at[a] >= at[b]) return false;
        return true;
    }
};

inline CausalOrder causal_order(const Diagram& d) {
    CausalOrder co;
    co.size = static_cast<int>(d.boxes.size());
    auto boxof = [](const Endpoint& e) -> int {
        return e.site == Endpoint::Site::BoxIn || e.site == Endpoint::Site::BoxOut ? e.index : -1;
    };
    for (const auto& w : d.wires) {
        const int a = boxof(w.from);
        const int b = boxof(w.to);
        if (a >= 0 && b >= 0) {
            if (a == b) throw CyclicError("box " + std::to_string(a) + " feeds itself");
            co.direct.insert({a, b});
        }
    }
    // transitive closure; a cycle makes some box reach itself
    std::vector<std::vector<int>> adj(co.size);
    for (const auto& [a, b] : co.direct) adj[a].push_back(b);
    for (int s = 0; s < co.size; ++s) {
        std::vector<bool> seen(co.size, false);
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : adj[x]) {
                if (y == s) throw CyclicError("causal cycle through box " + std::to_string(s));
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
            }
        }
        for (int y = 0; y < co.size; ++y)
            if (seen[y]) co.relation.insert({s, y});
    }
    return co;
}

struct ResolveResult {
    bool ok = false;
    std::vector<FiringEvent> events;   // the reordered trace when ok
    std::vector<State> states;         // replay of the result
    std::string reason;                // when not ok
    std::vector<FiringEvent> best_prefix;
};

/// Reorders a zstate trace into a causal-order-respecting schedule whose
/// replay stays legal at every step. Depth-first over linear extensions,
/// preferring the original order, then nat-enabled events, then ascending
/// timestamps; exponential worst case bounded by the node budget.
inline ResolveResult resolve(const Trace& tr, long long node_budget = 500000) {
    if (tr.net.flavor != Flavor::ZState)
        throw InvalidNetError("resolve is defined for zstate nets only");

    ResolveResult res;
    TraceDiagram td = trace_to_diagram(tr);
    CausalOrder co;
    try {
        co = causal_order(td.diagram);
    } catch (const CyclicError& e) {
        res.reason = std::string("cyclic causal order: ") + e.what();
        return res;
    }

    const int n = static_cast<int>(tr.events.size());
    if (!is_legal(tr.initial)) {
        res.reason = "initial state is illegal";
        return res;
    }

    // stability: an already-valid input comes back unchanged
    {
        std::vector<int> identity(n);
        for (int i = 0; i < n; ++i) identity[i] = i;
        bool legal = std::all_of(td.states.begin(), td.states.end(), is_legal);
        if (legal && co.respected_by(identity)) {
            res.ok = true;
            res.events = tr.events;
            res.states = td.states;
            return res;
        }
    }

    std::vector<std::vector<int>> preds(n);
    for (const auto& [a, b] : co.direct) preds[b].push_back(a);

    std::vector<bool> scheduled(n, false);
    std::vector<int> order;
    std::vector<State> states{tr.initial};
    long long budget = node_budget;
    std::size_t best = 0;
    std::vector<int> best_order;
    bool exhausted = false;

    std::function<bool()> dfs = [&]() -> bool {
        if (static_cast<int>(order.size()) == n) return true;
        if (budget-- <= 0) {
            exhausted = true;
            return false;
        }
        struct Cand {
            int ev;
            bool enabled;
            long long ts;
        };
        std::vector<Cand> cands;
        for (int e = 0; e < n; ++e) {
            if (scheduled[e]) continue;
            bool ready = std::all_of(preds[e].begin(), preds[e].end(),
                                     [&](int p) { return scheduled[p]; });
            if (!ready) continue;
            State next = fire(tr.net, states.back(), tr.events[e].transition);
            if (!is_legal(next)) continue;
            cands.push_back({e, mgeq(states.back(), tr.net.in(tr.events[e].transition)),
                             tr.events[e].timestamp});
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.enabled != b.enabled) return a.enabled;
            if (a.ts != b.ts) return a.ts < b.ts;
            return a.ev < b.ev;
        });
        for (const Cand& c : cands) {
            scheduled[c.ev] = true;
            order.push_back(c.ev);
            states.push_back(fire(tr.net, states.back(), tr.events[c.ev].transition));
            if (order.size() > best) {
                best = order.size();
                best_order = order;
            }
            if (dfs()) return true;
            states.pop_back();
            order.pop_back();
            scheduled[c.ev] = false;
            if (exhausted) return false;
        }
        return false;
    };

    if (dfs()) {
        res.ok = true;
        for (int e : order) res.events.push_back(tr.events[e]);
        res.states = states;
        return res;
    }
    for (int e : best_order) res.best_prefix.push_back(tr.events[e]);
    res.reason = exhausted ? "node budget exhausted" : "no legal causal-order-respecting schedule";
    return res;
}

}  // namespace zpetri
