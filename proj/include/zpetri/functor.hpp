#pragma once

#include "zpetri/diagram.hpp"

namespace zpetri {

/// Generating data of an execution category: a net minus its flavor.
/// Objects are implicitly all object strings over the places.
struct CategoryPresentation {
    std::vector<PlaceId> places;
    std::vector<TransitionId> generator_order;
    std::map<TransitionId, std::pair<SignedMultiset, SignedMultiset>> generators;

    friend bool operator==(const CategoryPresentation&, const CategoryPresentation&) = default;
};

inline CategoryPresentation fold(const Net& net) {
    auto rep = validate(net);
    if (!rep.ok()) throw InvalidNetError("fold: invalid net: " + rep.errors.front());
    CategoryPresentation p;
    p.places = net.places;
    p.generator_order = net.transitions;
    for (const auto& t : net.transitions) p.generators[t] = {net.in(t), net.out(t)};
    return p;
}

inline Net unfold(const CategoryPresentation& p) {
    Net n;
    n.flavor = Flavor::Int;
    n.places = p.places;
    for (const auto& t : p.generator_order) {
        const auto& [in, out] = p.generators.at(t);
        n.add_transition(t, in, out);
    }
    return n;
}

inline bool is_positive(const CategoryPresentation& p) {
    for (const auto& [_, gen] : p.generators)
        if (!gen.first.nonnegative() || !gen.second.nonnegative()) return false;
    return true;
}

struct RoundtripReport {
    bool ok = false;
    NetMorphism unit;
    std::vector<std::string> issues;
};

/// Builds the adjunction unit <phi, id>: N -> unfold(fold(N)) and checks it
/// is a valid morphism with phi and g both bijective.
inline RoundtripReport roundtrip_check(const Net& net) {
    RoundtripReport rep;
    auto v = validate(net);
    if (!v.ok()) {
        rep.issues = v.errors;
        return rep;
    }
    Net image = unfold(fold(net));
    rep.unit.source = net;
    rep.unit.target = image;
    for (const auto& t : net.transitions) rep.unit.f[t] = t;
    for (const auto& p : net.places) rep.unit.g[p] = SignedMultiset{{p, 1}};

    rep.issues = check_net_morphism(rep.unit);
    if (net.transitions.size() != image.transitions.size())
        rep.issues.push_back("transition count changed across the roundtrip");
    std::set<TransitionId> targets;
    for (const auto& [_, ft] : rep.unit.f) targets.insert(ft);
    if (targets.size() != image.transitions.size())
        rep.issues.push_back("unit transition map is not a bijection");
    if (net.places.size() != image.places.size())
        rep.issues.push_back("place count changed across the roundtrip");
    rep.ok = rep.issues.empty();
    return rep;
}

struct LiftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Every wire of place p expands into one strand per letter of section(g(p)):
// positive letters keep the wire's direction, inverse letters run backwards.
// Strands are junctions; boundary positions and box interfaces attach stubs,
// and junction contraction produces the lifted wires.
class MorphismLifter {
public:
    MorphismLifter(const NetMorphism& m, const Diagram& d) : m_(m), d_(d) {}

    Diagram run() {
        for (const auto& p : m_.source.places) strands_[p] = section(m_.g.at(p));

        Diagram out;
        out.dom = expand_string(d_.dom);
        out.cod = expand_string(d_.cod);
        dom_offsets_ = offsets(d_.dom);
        cod_offsets_ = offsets(d_.cod);

        for (int wi = 0; wi < static_cast<int>(d_.wires.size()); ++wi) {
            const Wire& w = d_.wires[wi];
            if (!IsoBox(w.from)) attach_boundary(w.from, wi, /*is_producer_end=*/true);
            if (!IsoBox(w.to)) attach_boundary(w.to, wi, /*is_producer_end=*/false);
        }

        for (int b = 0; b < static_cast<int>(d_.boxes.size()); ++b) {
            const TransitionId& t = d_.boxes[b];
            out.boxes.push_back(m_.f.at(t));
            expand_box(b, t, /*in_side=*/true);
            expand_box(b, t, /*in_side=*/false);
        }

        out.wires = contract_junctions(pending_);
        return out;
    }

private:
    const NetMorphism& m_;
    const Diagram& d_;
    std::map<PlaceId, ObjString> strands_;
    std::vector<int> dom_offsets_, cod_offsets_;
    std::vector<PendingWire> pending_;
    std::map<std::pair<int, int>, int> strand_junction_;  // (wire, fwd index) -> id
    int next_junction_ = 0;

    static bool IsoBox(const Endpoint& e) {
        return e.site == Endpoint::Site::BoxIn || e.site == Endpoint::Site::BoxOut;
    }

    const ObjString& strand_of(const PlaceId& p) const { return strands_.at(p); }

    ObjString expand_letter(const Letter& l) const {
        ObjString s = strand_of(l.place);
        return l.sign > 0 ? s : dual(s);
    }

    ObjString expand_string(const ObjString& s) const {
        ObjString r;
        for (const Letter& l : s) r = concat(r, expand_letter(l));
        return r;
    }

    std::vector<int> offsets(const ObjString& s) const {
        std::vector<int> off;
        int at = 0;
        for (const Letter& l : s) {
            off.push_back(at);
            at += static_cast<int>(strand_of(l.place).size());
        }
        return off;
    }

    int strand_junction(int wire, int fwd) {
        auto [it, fresh] = strand_junction_.emplace(std::make_pair(wire, fwd), next_junction_);
        if (fresh) ++next_junction_;
        return it->second;
    }
    int fresh_junction() { return next_junction_++; }

    // stub between a concrete endpoint (or local junction) and a strand
    void emit(BuildEnd site, int wire, int fwd, bool site_is_strand_producer,
              const PlaceId& place) {
        BuildEnd j = junction_end(strand_junction(wire, fwd));
        if (site_is_strand_producer)
            pending_.push_back({std::move(site), std::move(j), place});
        else
            pending_.push_back({std::move(j), std::move(site), place});
    }

    // Boundary attachment: positions of the expansion of the original letter,
    // laid out forward for positive letters and reversed for inverse ones.
    void attach_boundary(const Endpoint& e, int wire, bool is_producer_end) {
        const bool is_dom = e.site == Endpoint::Site::Dom;
        const Letter orig = (is_dom ? d_.dom : d_.cod)[e.index];
        const ObjString& s = strand_of(e.place);
        const int L = static_cast<int>(s.size());
        const int base = (is_dom ? dom_offsets_ : cod_offsets_)[e.index];
        for (int k = 0; k < L; ++k) {
            const Letter& sl = s[k];  // forward strand letter
            const int pos = base + (orig.sign > 0 ? k : L - 1 - k);
            const bool strand_forward = sl.sign > 0;
            // forward strands inherit the wire's orientation at this end
            const bool site_produces = is_producer_end == strand_forward;
            Endpoint ep{e.site, pos, sl.place};
            emit(real_end(ep), wire, k, site_produces, sl.place);
        }
    }

    // Box expansion: the canonical component of f(t) at the expanded index
    // strings. Local interface positions are junctions bridging the strand
    // junctions outside and the canonical port matching inside.
    void expand_box(int b, const TransitionId& t, bool in_side) {
        const SignedMultiset& iface = in_side ? m_.source.in(t) : m_.source.out(t);
        const SignedMultiset fiface = apply_hom(m_.g, iface);

        // slot wires per group, deterministic order by wire index
        std::map<PlaceId, std::vector<std::pair<int, bool>>> group_wires;  // wire id, from-here
        const auto gsite = in_side ? Endpoint::Site::BoxIn : Endpoint::Site::BoxOut;
        for (int wi = 0; wi < static_cast<int>(d_.wires.size()); ++wi) {
            const Wire& w = d_.wires[wi];
            if (w.from.site == gsite && w.from.index == b)
                group_wires[w.from.place].push_back({wi, true});
            if (w.to.site == gsite && w.to.index == b)
                group_wires[w.to.place].push_back({wi, false});
        }

        ObjString local;
        std::vector<int> local_junction;
        for (const auto& [p, k] : iface.entries()) {
            const Letter slot_letter{p, k > 0 ? +1 : -1};
            for (auto [wi, from_here] : group_wires[p]) {
                (void)from_here;
                const ObjString expansion = expand_letter(slot_letter);
                const ObjString& s = strand_of(p);
                const int L = static_cast<int>(s.size());
                for (int j = 0; j < L; ++j) {
                    const int fwd = slot_letter.sign > 0 ? j : L - 1 - j;
                    const Letter& loc = expansion[j];
                    const int pos = static_cast<int>(local.size());
                    local.push_back(loc);
                    const int lj = fresh_junction();
                    local_junction.push_back(lj);
                    // a box input behaves like a codomain, an output like a
                    // domain: producer-end tests flip relative to boundaries
                    const bool site_produces = in_side ? loc.sign < 0 : loc.sign > 0;
                    emit(junction_end(lj), wi, fwd, site_produces, loc.place);
                    (void)pos;
                }
            }
        }

        std::vector<PendingWire> side_pending;
        wire_generator_side(local, fiface, in_side, side_pending);
        const auto bsite = in_side ? Endpoint::Site::Dom : Endpoint::Site::Cod;
        for (auto& pw : side_pending) {
            auto fix = [&](BuildEnd& be) {
                if (be.is_junction) return;
                if (be.ep.site == bsite)
                    be = junction_end(local_junction[be.ep.index]);
                else
                    be.ep.index = b;
            };
            fix(pw.from);
            fix(pw.to);
            pending_.push_back(pw);
        }
    }
};

}  // namespace detail

/// Action of a net morphism on diagrams over fold(source): boundary letters
/// expand through the canonical section of g, wires split into one strand per
/// expansion letter, and each box t becomes the canonical component of f(t).
inline Diagram lift_morphism(const NetMorphism& m, const Diagram& d) {
    {
        auto errs = check_net_morphism(m);
        if (!errs.empty()) throw LiftError("invalid net morphism: " + errs.front());
    }
    for (const auto& b : d.boxes)
        if (!m.source.has_transition(b))
            throw LiftError("diagram box '" + b + "' is not a source transition");
    for (const Letter& l : concat(d.dom, d.cod))
        if (!m.g.count(l.place))
            throw LiftError("diagram mentions place '" + l.place +
                            "' outside the morphism's source");
    return detail::MorphismLifter(m, d).run();
}

}  // namespace zpetri
