#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zpetri/algebra.hpp"

namespace zpetri {

using TransitionId = std::string;

enum class Flavor { Nat, ZState, Int };

inline const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Nat: return "nat";
        case Flavor::ZState: return "zstate";
        case Flavor::Int: return "int";
    }
    return "?";
}

inline std::optional<Flavor> flavor_from_name(const std::string& s) {
    if (s == "nat") return Flavor::Nat;
    if (s == "zstate") return Flavor::ZState;
    if (s == "int") return Flavor::Int;
    return std::nullopt;
}

/// A Petri net in one of the three flavors. The flavor selects the firing
/// semantics and the interface/state legality checks, not the structure.
struct Net {
    std::vector<PlaceId> places;
    std::vector<TransitionId> transitions;
    std::map<TransitionId, SignedMultiset> input;
    std::map<TransitionId, SignedMultiset> output;
    Flavor flavor = Flavor::Nat;

    bool has_place(const PlaceId& p) const {
        return std::find(places.begin(), places.end(), p) != places.end();
    }
    bool has_transition(const TransitionId& t) const {
        return input.count(t) != 0;
    }
    const SignedMultiset& in(const TransitionId& t) const { return input.at(t); }
    const SignedMultiset& out(const TransitionId& t) const { return output.at(t); }

    Net& add_place(PlaceId p) {
        places.push_back(std::move(p));
        return *this;
    }
    Net& add_transition(TransitionId t, SignedMultiset in_, SignedMultiset out_) {
        transitions.push_back(t);
        input[t] = std::move(in_);
        output[transitions.back()] = std::move(out_);
        return *this;
    }

    friend bool operator==(const Net&, const Net&) = default;
};

/// Marking: absent places read as zero.
using State = SignedMultiset;

inline bool is_legal(const State& s) { return s.nonnegative(); }

struct FiringEvent {
    TransitionId transition;
    std::string agent;  // empty when unattributed
    long long timestamp = 0;

    friend bool operator==(const FiringEvent&, const FiringEvent&) = default;
};

struct NotEnabledError : std::runtime_error {
    NotEnabledError(TransitionId t, std::size_t index)
        : std::runtime_error("NotEnabled: transition '" + t + "' at event " +
                             std::to_string(index)),
          transition(std::move(t)),
          event_index(index) {}
    TransitionId transition;
    std::size_t event_index;
};

struct UnknownTransitionError : std::runtime_error {
    explicit UnknownTransitionError(const TransitionId& t)
        : std::runtime_error("unknown transition '" + t + "'") {}
};

struct InvalidNetError : std::runtime_error {
    explicit InvalidNetError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

inline ValidationReport validate(const Net& net) {
    ValidationReport rep;
    std::set<PlaceId> seen_places;
    for (const auto& p : net.places) {
        if (p.empty()) rep.errors.push_back("empty place name");
        if (!seen_places.insert(p).second)
            rep.errors.push_back("duplicate place '" + p + "'");
    }
    std::set<TransitionId> seen_trans;
    for (const auto& t : net.transitions) {
        if (t.empty()) rep.errors.push_back("empty transition name");
        if (!seen_trans.insert(t).second)
            rep.errors.push_back("duplicate transition '" + t + "'");
        if (!net.input.count(t))
            rep.errors.push_back("transition '" + t + "' has no input interface");
        if (!net.output.count(t))
            rep.errors.push_back("transition '" + t + "' has no output interface");
    }
    for (const auto& [t, _] : net.input)
        if (!seen_trans.count(t))
            rep.errors.push_back("input interface for unknown transition '" + t + "'");
    for (const auto& [t, _] : net.output)
        if (!seen_trans.count(t))
            rep.errors.push_back("output interface for unknown transition '" + t + "'");

    const bool needs_nat_interfaces =
        net.flavor == Flavor::Nat || net.flavor == Flavor::ZState;
    for (const auto& t : net.transitions) {
        for (const char* side : {"input", "output"}) {
            auto it = (side[0] == 'i' ? net.input : net.output).find(t);
            if (it == (side[0] == 'i' ? net.input : net.output).end()) continue;
            for (const auto& [p, k] : it->second.entries()) {
                if (!seen_places.count(p))
                    rep.errors.push_back("transition '" + t + "' " + side +
                                         " mentions unknown place '" + p + "'");
                if (needs_nat_interfaces && k < 0)
                    rep.errors.push_back("negative " + std::string(side) + " {" + p + ":" +
                                         std::to_string(k) + "} on transition '" + t +
                                         "' in " + flavor_name(net.flavor) + " net");
            }
        }
        if (net.input.count(t) && net.output.count(t) && net.in(t).empty() &&
            net.out(t).empty())
            rep.warnings.push_back("transition '" + t +
                                   "' has empty input and output (fires as a no-op)");
    }
    return rep;
}

inline std::vector<std::string> check_state(const Net& net, const State& s) {
    std::vector<std::string> errs;
    for (const auto& [p, k] : s.entries()) {
        if (!net.has_place(p)) errs.push_back("state mentions unknown place '" + p + "'");
        if (net.flavor == Flavor::Nat && k < 0)
            errs.push_back("negative marking {" + p + ":" + std::to_string(k) +
                           "} in nat net");
    }
    return errs;
}

inline bool enabled(const Net& net, const State& s, const TransitionId& t) {
    if (!net.has_transition(t)) throw UnknownTransitionError(t);
    if (net.flavor != Flavor::Nat) return true;
    return mgeq(s, net.in(t));
}

/// marking' = marking - input(t) + output(t).
inline State fire(const Net& net, const State& s, const TransitionId& t) {
    if (!net.has_transition(t)) throw UnknownTransitionError(t);
    if (net.flavor == Flavor::Nat && !enabled(net, s, t)) throw NotEnabledError(t, 0);
    return msum(msub(s, net.in(t)), net.out(t));
}

/// Replays events in order; returns all states s0..sn. Under nat flavor the
/// first disabled firing raises NotEnabledError carrying the event index.
inline std::vector<State> fire_sequence(const Net& net, const State& s0,
                                        const std::vector<FiringEvent>& events) {
    std::vector<State> states{s0};
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& t = events[i].transition;
        if (!net.has_transition(t)) throw UnknownTransitionError(t);
        if (net.flavor == Flavor::Nat && !enabled(net, states.back(), t))
            throw NotEnabledError(t, i);
        states.push_back(fire(net, states.back(), t));
    }
    return states;
}

/// A net morphism <f, g>: f maps transitions, g maps each source place to a
/// signed multiset over target places (the free-generator form of a group
/// homomorphism).
struct NetMorphism {
    Net source;
    Net target;
    std::map<TransitionId, TransitionId> f;
    std::map<PlaceId, SignedMultiset> g;
};

/// Linear extension of g to signed multisets.
inline SignedMultiset apply_hom(const std::map<PlaceId, SignedMultiset>& g,
                                const SignedMultiset& m) {
    SignedMultiset r;
    for (const auto& [p, k] : m.entries()) {
        auto it = g.find(p);
        if (it == g.end()) continue;  // reported separately by the checker
        r = msum(r, mscale(it->second, k));
    }
    return r;
}

inline std::vector<std::string> check_net_morphism(const NetMorphism& m) {
    std::vector<std::string> errs;
    for (const auto& p : m.source.places)
        if (!m.g.count(p)) errs.push_back("g undefined on place '" + p + "'");
    for (const auto& [p, img] : m.g)
        for (const auto& [q, _] : img.entries())
            if (!m.target.has_place(q))
                errs.push_back("g('" + p + "') mentions unknown target place '" + q + "'");

    const bool monoid_case = (m.source.flavor == Flavor::Nat || m.source.flavor == Flavor::ZState) &&
                             (m.target.flavor == Flavor::Nat || m.target.flavor == Flavor::ZState);
    if (monoid_case)
        for (const auto& [p, img] : m.g)
            if (!img.nonnegative())
                errs.push_back("g('" + p + "') has negative entries in the monoid case");

    for (const auto& t : m.source.transitions) {
        auto ft = m.f.find(t);
        if (ft == m.f.end()) {
            errs.push_back("f undefined on transition '" + t + "'");
            continue;
        }
        if (!m.target.has_transition(ft->second)) {
            errs.push_back("f('" + t + "') = '" + ft->second + "' is not a target transition");
            continue;
        }
        if (apply_hom(m.g, m.source.in(t)) != m.target.in(ft->second))
            errs.push_back("input square fails on transition '" + t + "'");
        if (apply_hom(m.g, m.source.out(t)) != m.target.out(ft->second))
            errs.push_back("output square fails on transition '" + t + "'");
    }
    return errs;
}

inline NetMorphism compose(const NetMorphism& m1, const NetMorphism& m2) {
    NetMorphism r;
    r.source = m1.source;
    r.target = m2.target;
    for (const auto& [t, ft] : m1.f) {
        auto it = m2.f.find(ft);
        if (it != m2.f.end()) r.f[t] = it->second;
    }
    for (const auto& [p, img] : m1.g) r.g[p] = apply_hom(m2.g, img);
    return r;
}

}  // namespace zpetri
