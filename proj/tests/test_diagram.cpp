#include <catch2/catch_amalgamated.hpp>

#include "support/structural.hpp"

using namespace zpetri;

namespace {
const Net& dnet() {
    static Net n = [] {
        Net net;
        net.flavor = Flavor::ZState;
        net.places = {"a", "b", "x", "y"};
        net.add_transition("t", {{"x", 1}}, {{"y", 1}});
        net.add_transition("s", {{"a", 2}}, {{"b", 1}, {"x", 1}});
        return net;
    }();
    return n;
}

Diagram dia(const std::string& text) { return of_term(*parse_term(text), dnet()); }
}  // namespace

TEST_CASE("circle deletion: eta ; sigma ; eps is the empty diagram") {
    Diagram d = dia("cup(a) ; sym(a|a^-1) ; cap(a^-1)");
    CHECK(d.dom.empty());
    CHECK(d.cod.empty());
    CHECK(d.boxes.empty());
    CHECK(d.wires.empty());
    CHECK(equal(d, empty_diagram()));
}

TEST_CASE("yanking straightens to the identity") {
    Diagram d = dia("id(a) * cup(a^-1) ; cap(a) * id(a)");
    CHECK(equal(d, identity_diagram({pos("a")})));
    CHECK(validate_diagram(dnet(), d).empty());
}

TEST_CASE("generator diagram has one box wired to its boundary") {
    Diagram d = dia("t[x|y]");
    REQUIRE(d.boxes == std::vector<TransitionId>{"t"});
    REQUIRE(d.wires.size() == 2);
    CHECK(validate_diagram(dnet(), d).empty());
    CHECK(equal(d, d));
}

TEST_CASE("component with an extra dual pair wires the pair past the box") {
    Diagram d = dia("t[x b b^-1|y]");
    REQUIRE(d.boxes.size() == 1);
    REQUIRE(d.wires.size() == 3);
    CHECK(validate_diagram(dnet(), d).empty());
    // the pair is a dom->dom wire
    int domdom = 0;
    for (const auto& w : d.wires)
        if (w.from.site == Endpoint::Site::Dom && w.to.site == Endpoint::Site::Dom) ++domdom;
    CHECK(domdom == 1);
}

TEST_CASE("eq(2): components equal their canonical expansions") {
    const Net& n = dnet();
    fixtures::Rng rng(101);
    for (int i = 0; i < 100; ++i) {
        const TransitionId& t = rng.choose(n.transitions);
        ObjString u = fixtures::random_index_string(rng, n.in(t), n.places, 2);
        ObjString v = fixtures::random_index_string(rng, n.out(t), n.places, 2);
        TermPtr lhs = gen_term(t, u, v);
        TermPtr rhs = comp_term(comp_term(structural::canonical_left(n, t, u),
                                          gen_term(t, section(n.in(t)), section(n.out(t)))),
                                structural::canonical_right(n, t, v));
        CHECK(typecheck(*rhs, n).dom == u);
        Diagram dl = of_term(*lhs, n);
        Diagram dr = of_term(*rhs, n);
        INFO("u=" << render_string(u) << " v=" << render_string(v));
        CHECK(validate_diagram(n, dl).empty());
        CHECK(validate_diagram(n, dr).empty());
        CHECK(equal(dl, dr));
    }
}

TEST_CASE("pre-composing the cup cancels against the component's pair") {
    // (id(x) * cup(b)) ; t[x b b^-1 | y]  ==  t[x|y]
    Diagram lhs = dia("id(x) * cup(b) ; t[x b b^-1|y]");
    Diagram rhs = dia("t[x|y]");
    CHECK(equal(lhs, rhs));
    CHECK(lhs.wires.size() == 2);  // the pair fused into a deleted circle
}

TEST_CASE("port order within a group is meaningless") {
    // two parallel feeds into the s box arrive in either order
    Diagram d1 = dia("s[a a|b x]");
    Diagram d2 = dia("sym(a|a) ; s[a a|b x]");
    CHECK(equal(d1, d2));
}

TEST_CASE("boundary positions are pinned") {
    CHECK_FALSE(equal(dia("id(a)"), dia("id(b)")));
    CHECK_FALSE(equal(dia("sym(a|a)"), dia("id(a a)")));
    CHECK_FALSE(equal(dia("cap(a) * cap(a)"), dia("cap(a a^-1)")));
    // crossed versus nested caps over the same boundary
    Diagram nested = dia("cap(a a)");
    Diagram vect = dia("cap(a) * cap(a)");
    CHECK(nested.dom != vect.dom);
}

TEST_CASE("compose and tensor unit laws") {
    fixtures::Rng rng(55);
    const Net& n = dnet();
    for (int i = 0; i < 100; ++i) {
        TermPtr t = fixtures::random_term(rng, n, 3);
        Diagram d = of_term(*t, n);
        TermType ty = typecheck(*t, n);
        CHECK(equal(compose(d, identity_diagram(ty.cod)), d));
        CHECK(equal(compose(identity_diagram(ty.dom), d), d));
        CHECK(equal(tensor(d, empty_diagram()), d));
        CHECK(equal(tensor(empty_diagram(), d), d));
    }
}

TEST_CASE("compositionality: of_term splits across compose") {
    fixtures::Rng rng(66);
    const Net& n = dnet();
    int done = 0;
    while (done < 60) {
        TermPtr a = fixtures::random_term(rng, n, 2);
        TermType ta = typecheck(*a, n);
        // manufacture a partner with matching boundary
        TermPtr b = comp_term(id_term(ta.cod), fixtures::random_term(rng, n, 0));
        TermType tb;
        try {
            tb = typecheck(*b, n);
        } catch (const TypeError&) {
            b = id_term(ta.cod);
            tb = typecheck(*b, n);
        }
        if (tb.dom != ta.cod) {
            b = id_term(ta.cod);
        }
        TermPtr both = comp_term(a, b);
        try {
            typecheck(*both, n);
        } catch (const TypeError&) {
            continue;
        }
        CHECK(equal(compose(of_term(*a, n), of_term(*b, n)), of_term(*both, n)));
        ++done;
    }
}

TEST_CASE("equality is an equivalence and a congruence") {
    fixtures::Rng rng(77);
    const Net& n = dnet();
    for (int i = 0; i < 40; ++i) {
        TermPtr a = fixtures::random_term(rng, n, 2);
        TermType ta = typecheck(*a, n);
        Diagram da = of_term(*a, n);
        CHECK(equal(da, da));
        // congruence under tensor with a shared partner
        TermPtr c = fixtures::random_term(rng, n, 2);
        Diagram dc = of_term(*c, n);
        ObjString u = ta.dom;
        // two different-looking presentations of the same morphism
        Diagram da2 = compose(identity_diagram(ta.dom), compose(da, identity_diagram(ta.cod)));
        CHECK(equal(da, da2));
        CHECK(equal(tensor(da, dc), tensor(da2, dc)));
        CHECK(equal(compose(identity_diagram(ta.dom), da), da2));
    }
}

TEST_CASE("transpose flips and dualizes the boundary") {
    Diagram d = dia("t[x|y]");
    Diagram td = transpose(d);
    CHECK(td.dom == ObjString{neg("y")});
    CHECK(td.cod == ObjString{neg("x")});
    CHECK(td.boxes == d.boxes);
    CHECK(equal(transpose(td), d));
    CHECK(equal(transpose(empty_diagram()), empty_diagram()));

    fixtures::Rng rng(88);
    for (int i = 0; i < 100; ++i) {
        Diagram r = of_term(*fixtures::random_term(rng, dnet(), 3), dnet());
        CHECK(equal(transpose(transpose(r)), r));
    }
}

TEST_CASE("conservation at the diagram level") {
    fixtures::Rng rng(99);
    const Net& n = dnet();
    for (int i = 0; i < 100; ++i) {
        TermPtr t = fixtures::random_term(rng, n, 3);
        Diagram d = of_term(*t, n);
        SignedMultiset delta;
        for (const auto& b : d.boxes) delta = msum(delta, msub(n.out(b), n.in(b)));
        CHECK(msub(multiplicity(d.cod), multiplicity(d.dom)) == delta);
    }
}

TEST_CASE("box cycles are legal diagrams for equality") {
    // hand-built trace of t around itself: x -> y looped through a second box
    Net n;
    n.flavor = Flavor::Int;
    n.places = {"x", "y"};
    n.add_transition("f", {{"x", 1}}, {{"y", 1}});
    n.add_transition("g", {{"y", 1}}, {{"x", 1}});
    Diagram d;
    d.boxes = {"f", "g"};
    d.wires = {
        Wire{{Endpoint::Site::BoxOut, 0, "y"}, {Endpoint::Site::BoxIn, 1, "y"}, "y"},
        Wire{{Endpoint::Site::BoxOut, 1, "x"}, {Endpoint::Site::BoxIn, 0, "x"}, "x"},
    };
    CHECK(validate_diagram(n, d).empty());
    CHECK(equal(d, d));
    Diagram open_version;
    open_version.dom = {pos("x")};
    open_version.cod = {pos("x")};
    open_version.boxes = {"f", "g"};
    open_version.wires = {
        Wire{{Endpoint::Site::Dom, 0, "x"}, {Endpoint::Site::BoxIn, 0, "x"}, "x"},
        Wire{{Endpoint::Site::BoxOut, 0, "y"}, {Endpoint::Site::BoxIn, 1, "y"}, "y"},
        Wire{{Endpoint::Site::BoxOut, 1, "x"}, {Endpoint::Site::Cod, 0, "x"}, "x"},
    };
    CHECK_FALSE(equal(d, open_version));
}

TEST_CASE("scalars compare like any diagram") {
    Net n;
    n.flavor = Flavor::Int;
    n.places = {"x"};
    n.add_transition("k", {}, {});
    Diagram one;
    one.boxes = {"k"};
    Diagram two;
    two.boxes = {"k", "k"};
    CHECK(equal(one, one));
    CHECK_FALSE(equal(one, two));
    CHECK_FALSE(equal(one, empty_diagram()));
}

TEST_CASE("dot output is deterministic and reflects the diagram") {
    CHECK(to_dot(empty_diagram()) == "digraph diagram {\n  rankdir=LR;\n}\n");
    Diagram d = dia("t[x|y]");
    std::string dot1 = to_dot(d);
    std::string dot2 = to_dot(of_term(*parse_term("t[x|y]"), dnet()));
    CHECK(dot1 == dot2);
    CHECK(dot1.find("shape=box") != std::string::npos);
    CHECK(std::count(dot1.begin(), dot1.end(), '>') >= 2);
}

TEST_CASE("structural term builder reproduces arbitrary wirings") {
    fixtures::Rng rng(111);
    const Net& n = dnet();
    for (int i = 0; i < 150; ++i) {
        ObjString x = fixtures::random_string(rng, n.places, 4);
        ObjString y;
        TermPtr t = structural::random_structural(rng, x, &y);
        TermType ty = typecheck(*t, n);
        CHECK(ty.dom == x);
        CHECK(ty.cod == y);
        Diagram d = of_term(*t, n);
        CHECK(validate_diagram(n, d).empty());
        CHECK(d.boxes.empty());
    }
}
