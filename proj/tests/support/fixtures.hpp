#pragma once

#include <random>

#include "zpetri/execution.hpp"
#include "zpetri/functor.hpp"

namespace fixtures {

using namespace zpetri;

// The running example net: a source transition feeding three places, the
// marked middle transition, and two sinks.
inline Net fig1_net() {
    Net n;
    n.flavor = Flavor::Nat;
    n.places = {"p2a", "p2b", "p2c", "p4a", "p4b"};
    n.add_transition("t1b", {}, {{"p2a", 2}, {"p2b", 1}, {"p2c", 3}});
    n.add_transition("t3a", {{"p2a", 1}, {"p2b", 2}, {"p2c", 1}},
                     {{"p4a", 1}, {"p4b", 1}});
    n.add_transition("t5a", {{"p4a", 1}, {"p4b", 4}}, {});
    n.add_transition("t5b", {{"p4a", 4}}, {});
    return n;
}

inline State fig1_state() {
    return State{{"p2a", 3}, {"p2b", 2}, {"p2c", 4}, {"p4a", 1}, {"p4b", 2}};
}

// One transition consuming two tokens and producing one: the borrow example.
inline Net fig2_net(Flavor flavor = Flavor::ZState) {
    Net n;
    n.flavor = flavor;
    n.places = {"x", "y"};
    n.add_transition("t", {{"x", 2}}, {{"y", 1}});
    return n;
}

// The conflict-resolution net: tau: X->Y, nu: X->Z, mu: Y->X.
inline Net resolution_net() {
    Net n;
    n.flavor = Flavor::ZState;
    n.places = {"X", "Y", "Z"};
    n.add_transition("tau", {{"X", 1}}, {{"Y", 1}});
    n.add_transition("nu", {{"X", 1}}, {{"Z", 1}});
    n.add_transition("mu", {{"Y", 1}}, {{"X", 1}});
    return n;
}

inline std::vector<FiringEvent> resolution_trace_events() {
    return {{"tau", "U1", 1}, {"nu", "U2", 2}, {"mu", "U1", 3}};
}

// Two transitions competing for one token.
inline Net conflict_net() {
    Net n;
    n.flavor = Flavor::ZState;
    n.places = {"p1"};
    n.add_transition("t1", {{"p1", 1}}, {});
    n.add_transition("t2", {{"p1", 1}}, {});
    return n;
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(unsigned long long seed) : engine(seed) {}
    long long pick(long long lo, long long hi) {
        return std::uniform_int_distribution<long long>(lo, hi)(engine);
    }
    bool coin(double p = 0.5) {
        return std::uniform_real_distribution<double>(0, 1)(engine) < p;
    }
    template <class T>
    const T& choose(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(pick(0, static_cast<long long>(v.size()) - 1))];
    }
};

inline SignedMultiset random_multiset(Rng& rng, const std::vector<PlaceId>& places,
                                      long long lo, long long hi) {
    SignedMultiset m;
    for (const auto& p : places)
        if (rng.coin(0.7)) m.add(p, rng.pick(lo, hi));
    return m;
}

inline ObjString random_string(Rng& rng, const std::vector<PlaceId>& places, int max_len,
                               bool allow_negative = true) {
    ObjString s;
    const int len = static_cast<int>(rng.pick(0, max_len));
    for (int i = 0; i < len; ++i)
        s.push_back(Letter{rng.choose(places), allow_negative && rng.coin(0.4) ? -1 : +1});
    return s;
}

inline Net random_net(Rng& rng, Flavor flavor, int max_places = 5, int max_transitions = 5,
                      long long wlo = -3, long long whi = 3) {
    Net n;
    n.flavor = flavor;
    const int np = static_cast<int>(rng.pick(0, max_places));
    for (int i = 0; i < np; ++i) n.places.push_back("p" + std::to_string(i));
    const int nt = static_cast<int>(rng.pick(0, max_transitions));
    const long long lo = flavor == Flavor::Int ? wlo : std::max<long long>(0, wlo);
    for (int i = 0; i < nt; ++i)
        n.add_transition("t" + std::to_string(i), random_multiset(rng, n.places, lo, whi),
                         random_multiset(rng, n.places, lo, whi));
    return n;
}

// Random index string for a generator: section(target) with inserted
// cancelling pairs and shuffles, keeping the multiplicity fixed.
inline ObjString random_index_string(Rng& rng, const SignedMultiset& target,
                                     const std::vector<PlaceId>& places, int max_pairs = 2) {
    ObjString s = section(target);
    const int pairs = places.empty() ? 0 : static_cast<int>(rng.pick(0, max_pairs));
    for (int i = 0; i < pairs; ++i) {
        const PlaceId& p = rng.choose(places);
        s.push_back(Letter{p, +1});
        s.push_back(Letter{p, -1});
    }
    std::shuffle(s.begin(), s.end(), rng.engine);
    return s;
}

/// Random well-typed term over a net: leaves are identities, symmetries,
/// cups, caps and generator components; combined by composition (via a
/// random structural bridge is avoided: compose only when types line up)
/// and tensor.
inline TermPtr random_term(Rng& rng, const Net& net, int depth) {
    std::vector<PlaceId> places = net.places;
    if (places.empty()) return id_term({});
    if (depth <= 0 || rng.coin(0.35)) {
        switch (rng.pick(0, 4)) {
            case 0: return id_term(random_string(rng, places, 2));
            case 1: return sym_term(random_string(rng, places, 2), random_string(rng, places, 2));
            case 2: return cup_term(random_string(rng, places, 2));
            case 3: return cap_term(random_string(rng, places, 2));
            default: {
                if (net.transitions.empty()) return id_term(random_string(rng, places, 2));
                const TransitionId& t = rng.choose(net.transitions);
                return gen_term(t, random_index_string(rng, net.in(t), places, 1),
                                random_index_string(rng, net.out(t), places, 1));
            }
        }
    }
    TermPtr a = random_term(rng, net, depth - 1);
    if (rng.coin()) return tensor_term(a, random_term(rng, net, depth - 1));
    // compose with something whose domain is a's codomain
    TermType ta = typecheck(*a, net);
    if (rng.coin(0.5)) return comp_term(a, id_term(ta.cod));
    // cod ; sym against a random split of the codomain
    const auto cut = static_cast<std::size_t>(rng.pick(0, static_cast<long long>(ta.cod.size())));
    ObjString u(ta.cod.begin(), ta.cod.begin() + cut);
    ObjString v(ta.cod.begin() + cut, ta.cod.end());
    return comp_term(a, sym_term(u, v));
}

}  // namespace fixtures
