#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace zpetri;

TEST_CASE("validate accepts the running example") {
    CHECK(validate(fixtures::fig1_net()).ok());
}

TEST_CASE("validate rejects negative interfaces outside int nets") {
    Net n;
    n.flavor = Flavor::ZState;
    n.places = {"x"};
    n.add_transition("t", {{"x", -4}}, {});
    auto rep = validate(n);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.errors.front().find("negative input") != std::string::npos);

    n.flavor = Flavor::Int;
    CHECK(validate(n).ok());
}

TEST_CASE("validate accepts the empty net and flags no-op transitions") {
    CHECK(validate(Net{}).ok());

    Net n;
    n.flavor = Flavor::Nat;
    n.places = {"x"};
    n.add_transition("noop", {}, {});
    auto rep = validate(n);
    CHECK(rep.ok());
    REQUIRE(rep.warnings.size() == 1);
    CHECK(rep.warnings.front().find("noop") != std::string::npos);
}

TEST_CASE("enabled depends on the flavor") {
    Net nat = fixtures::fig2_net(Flavor::Nat);
    Net zst = fixtures::fig2_net(Flavor::ZState);
    State s{{"x", 1}};
    CHECK_FALSE(enabled(nat, s, "t"));
    CHECK(enabled(zst, s, "t"));
    CHECK_THROWS_AS(enabled(zst, s, "missing"), UnknownTransitionError);

    Net noop;
    noop.flavor = Flavor::Nat;
    noop.places = {"x"};
    noop.add_transition("t0", {}, {});
    CHECK(enabled(noop, State{}, "t0"));
}

TEST_CASE("fire follows the marking equation") {
    // the marked transition of the running example
    Net n = fixtures::fig1_net();
    State s = fixtures::fig1_state();
    State next = fire(n, s, "t3a");
    CHECK(next == State{{"p2a", 2}, {"p2c", 3}, {"p4a", 2}, {"p4b", 3}});
    CHECK(next.at("p2b") == 0);

    // borrowing: zstate goes negative where nat refuses
    Net z = fixtures::fig2_net(Flavor::ZState);
    CHECK(fire(z, State{{"x", 1}}, "t") == State{{"x", -1}, {"y", 1}});
    Net f = fixtures::fig2_net(Flavor::Nat);
    CHECK_THROWS_AS(fire(f, State{{"x", 1}}, "t"), NotEnabledError);

    // int flavor with a negative output interface
    Net iv;
    iv.flavor = Flavor::Int;
    iv.places = {"x", "y"};
    iv.add_transition("t", {{"x", 1}}, {{"y", -4}});
    CHECK(fire(iv, State{}, "t") == State{{"x", -1}, {"y", -4}});
}

TEST_CASE("fire conservation identity") {
    fixtures::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Net n = fixtures::random_net(rng, Flavor::Int);
        if (n.transitions.empty()) continue;
        State s = fixtures::random_multiset(rng, n.places, -3, 3);
        const TransitionId& t = rng.choose(n.transitions);
        CHECK(msub(fire(n, s, t), s) == msub(n.out(t), n.in(t)));
    }
}

TEST_CASE("fire_sequence replays the conflict resolution trace") {
    Net n = fixtures::resolution_net();
    auto states = fire_sequence(n, State{{"X", 1}}, fixtures::resolution_trace_events());
    REQUIRE(states.size() == 4);
    CHECK(states[0] == State{{"X", 1}});
    CHECK(states[1] == State{{"Y", 1}});
    CHECK(states[2] == State{{"X", -1}, {"Y", 1}, {"Z", 1}});
    CHECK(states[3] == State{{"Z", 1}});
}

TEST_CASE("fire_sequence edge cases") {
    Net n = fixtures::resolution_net();
    auto states = fire_sequence(n, State{{"X", 2}}, {});
    CHECK(states == std::vector<State>{State{{"X", 2}}});

    // zstate final state is order independent
    std::vector<FiringEvent> fw{{"tau", "", 1}, {"nu", "", 2}};
    std::vector<FiringEvent> bw{{"nu", "", 1}, {"tau", "", 2}};
    CHECK(fire_sequence(n, State{{"X", 2}}, fw).back() ==
          fire_sequence(n, State{{"X", 2}}, bw).back());

    Net f = fixtures::fig2_net(Flavor::Nat);
    std::vector<FiringEvent> events{{"t", "", 1}, {"t", "", 2}};
    try {
        fire_sequence(f, State{{"x", 2}}, events);
        FAIL("expected NotEnabledError");
    } catch (const NotEnabledError& e) {
        CHECK(e.event_index == 1);
    }
}

TEST_CASE("zstate permutation invariance of the final state") {
    fixtures::Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        Net n = fixtures::random_net(rng, Flavor::ZState, 4, 4, 0, 3);
        if (n.transitions.empty()) continue;
        std::vector<FiringEvent> events;
        for (int k = 0; k < 5; ++k) events.push_back({rng.choose(n.transitions), "", k});
        State s0 = fixtures::random_multiset(rng, n.places, 0, 3);
        auto base = fire_sequence(n, s0, events).back();
        std::shuffle(events.begin(), events.end(), rng.engine);
        CHECK(fire_sequence(n, s0, events).back() == base);
    }
}

TEST_CASE("nat semantics refines zstate") {
    fixtures::Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        Net n = fixtures::random_net(rng, Flavor::Nat, 4, 4, 0, 2);
        if (n.transitions.empty()) continue;
        State s = fixtures::random_multiset(rng, n.places, 0, 3);
        const TransitionId& t = rng.choose(n.transitions);
        if (!enabled(n, s, t)) continue;
        Net z = n;
        z.flavor = Flavor::ZState;
        CHECK(fire(n, s, t) == fire(z, s, t));
    }
}

TEST_CASE("is_legal") {
    CHECK_FALSE(is_legal(State{{"x", -1}, {"y", 1}}));
    CHECK(is_legal(State{}));
    CHECK(is_legal(State{{"x", 3}}));
}

TEST_CASE("net morphisms") {
    Net n = fixtures::fig1_net();

    SECTION("identity morphism") {
        NetMorphism m;
        m.source = n;
        m.target = n;
        for (const auto& t : n.transitions) m.f[t] = t;
        for (const auto& p : n.places) m.g[p] = SignedMultiset{{p, 1}};
        CHECK(check_net_morphism(m).empty());
    }

    SECTION("relabeling onto a renamed copy") {
        Net m2 = n;
        m2.places.clear();
        m2.transitions.clear();
        m2.input.clear();
        m2.output.clear();
        for (const auto& p : n.places) m2.places.push_back(p + "_r");
        auto rename = [](const SignedMultiset& ms) {
            SignedMultiset r;
            for (const auto& [p, k] : ms.entries()) r.add(p + "_r", k);
            return r;
        };
        for (const auto& t : n.transitions)
            m2.add_transition(t + "_r", rename(n.in(t)), rename(n.out(t)));

        NetMorphism iso;
        iso.source = n;
        iso.target = m2;
        for (const auto& t : n.transitions) iso.f[t] = t + "_r";
        for (const auto& p : n.places) iso.g[p] = SignedMultiset{{p + "_r", 1}};
        CHECK(check_net_morphism(iso).empty());

        SECTION("breaking f breaks a square") {
            iso.f["t3a"] = "t5b_r";
            auto errs = check_net_morphism(iso);
            REQUIRE_FALSE(errs.empty());
            CHECK(errs.front().find("t3a") != std::string::npos);
        }

        SECTION("morphism composition stays valid") {
            NetMorphism id2;
            id2.source = m2;
            id2.target = m2;
            for (const auto& t : m2.transitions) id2.f[t] = t;
            for (const auto& p : m2.places) id2.g[p] = SignedMultiset{{p, 1}};
            NetMorphism comp = compose(iso, id2);
            CHECK(check_net_morphism(comp).empty());
        }
    }
}
