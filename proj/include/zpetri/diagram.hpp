#pragma once

#include <cassert>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "zpetri/term.hpp"

namespace zpetri {

/// One end of a wire. Box ports inside a (side, place) group are
/// interchangeable, so an endpoint names the group, never a port index.
struct Endpoint {
    enum class Site { Dom, Cod, BoxIn, BoxOut };
    Site site;
    int index = 0;  // boundary position, or box index
    PlaceId place;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Directed token flow from one producer endpoint to one consumer endpoint.
struct Wire {
    Endpoint from;
    Endpoint to;
    PlaceId place;

    friend bool operator==(const Wire&, const Wire&) = default;
};

/// Normal-form morphism of the execution category: boundary strings, boxes
/// with interface-canonical ports, and producer->consumer wires. Box-free
/// closed circles are deleted at construction time.
struct Diagram {
    ObjString dom, cod;
    std::vector<TransitionId> boxes;
    std::vector<Wire> wires;
};

struct DiagramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Pending wires may end on junctions (glued boundary positions); the
// contraction pass fuses junction chains and drops junction-only cycles.
struct BuildEnd {
    bool is_junction = false;
    Endpoint ep;
    int junction = -1;
};

inline BuildEnd real_end(Endpoint e) { return BuildEnd{false, std::move(e), -1}; }
inline BuildEnd junction_end(int j) { return BuildEnd{true, {}, j}; }

struct PendingWire {
    BuildEnd from, to;
    PlaceId place;
};

inline std::vector<Wire> contract_junctions(const std::vector<PendingWire>& pending) {
    // outgoing[j] = index of the wire whose from-end is junction j
    std::unordered_map<int, std::size_t> outgoing;
    for (std::size_t i = 0; i < pending.size(); ++i)
        if (pending[i].from.is_junction) {
            if (!outgoing.emplace(pending[i].from.junction, i).second)
                throw DiagramError("junction used twice as producer");
        }
    std::vector<Wire> wires;
    for (const auto& w : pending) {
        if (w.from.is_junction) continue;  // reached by walking, or part of a cycle
        Endpoint from = w.from.ep;
        const PendingWire* cur = &w;
        while (cur->to.is_junction) {
            auto it = outgoing.find(cur->to.junction);
            if (it == outgoing.end()) throw DiagramError("dangling junction");
            cur = &pending[it->second];
        }
        wires.push_back(Wire{from, cur->to.ep, w.place});
    }
    // anything not reached from a real producer end is a junction-only cycle:
    // a closed circle, deleted per the circle-deletion axiom
    return wires;
}

}  // namespace detail

inline Diagram empty_diagram() { return Diagram{}; }

inline Diagram identity_diagram(const ObjString& u) {
    Diagram d;
    d.dom = u;
    d.cod = u;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        const Letter& l = u[i];
        Endpoint dm{Endpoint::Site::Dom, i, l.place};
        Endpoint cd{Endpoint::Site::Cod, i, l.place};
        if (l.sign > 0)
            d.wires.push_back(Wire{dm, cd, l.place});
        else
            d.wires.push_back(Wire{cd, dm, l.place});
    }
    return d;
}

inline Diagram compose(const Diagram& d1, const Diagram& d2) {
    if (d1.cod != d2.dom)
        throw TypeMismatchError("compose boundary mismatch: '" + render_string(d1.cod) +
                                "' vs '" + render_string(d2.dom) + "'");
    const int shift = static_cast<int>(d1.boxes.size());
    std::vector<detail::PendingWire> pending;
    auto endify1 = [&](const Endpoint& e) {
        if (e.site == Endpoint::Site::Cod) return detail::junction_end(e.index);
        return detail::real_end(e);
    };
    auto endify2 = [&](const Endpoint& e) {
        if (e.site == Endpoint::Site::Dom) return detail::junction_end(e.index);
        Endpoint shifted = e;
        if (e.site == Endpoint::Site::BoxIn || e.site == Endpoint::Site::BoxOut)
            shifted.index += shift;
        return detail::real_end(shifted);
    };
    for (const auto& w : d1.wires)
        pending.push_back({endify1(w.from), endify1(w.to), w.place});
    for (const auto& w : d2.wires)
        pending.push_back({endify2(w.from), endify2(w.to), w.place});

    Diagram r;
    r.dom = d1.dom;
    r.cod = d2.cod;
    r.boxes = d1.boxes;
    r.boxes.insert(r.boxes.end(), d2.boxes.begin(), d2.boxes.end());
    r.wires = detail::contract_junctions(pending);
    return r;
}

inline Diagram tensor(const Diagram& d1, const Diagram& d2) {
    Diagram r;
    r.dom = concat(d1.dom, d2.dom);
    r.cod = concat(d1.cod, d2.cod);
    r.boxes = d1.boxes;
    r.boxes.insert(r.boxes.end(), d2.boxes.begin(), d2.boxes.end());
    r.wires = d1.wires;
    const int bshift = static_cast<int>(d1.boxes.size());
    const int dshift = static_cast<int>(d1.dom.size());
    const int cshift = static_cast<int>(d1.cod.size());
    auto shift = [&](Endpoint e) {
        switch (e.site) {
            case Endpoint::Site::Dom: e.index += dshift; break;
            case Endpoint::Site::Cod: e.index += cshift; break;
            default: e.index += bshift; break;
        }
        return e;
    };
    for (const auto& w : d2.wires)
        r.wires.push_back(Wire{shift(w.from), shift(w.to), w.place});
    return r;
}

namespace detail {

// Canonical wiring of a generator box against its boundary strings: box
// ports come straight from the net interface, extra dual pairs in the index
// strings become plain wires routed past the box. The matching is fixed
// (producers and consumers paired in ascending order) so construction is
// deterministic.
inline void wire_generator_side(const ObjString& boundary, const SignedMultiset& iface,
                                bool left, std::vector<PendingWire>& pending) {
    std::set<PlaceId> places;
    for (const auto& l : boundary) places.insert(l.place);
    for (const auto& [p, k] : iface.entries()) places.insert(p);
    const auto bsite = left ? Endpoint::Site::Dom : Endpoint::Site::Cod;
    const auto gsite = left ? Endpoint::Site::BoxIn : Endpoint::Site::BoxOut;
    for (const PlaceId& p : places) {
        const long long k = iface.at(p);
        std::vector<Endpoint> producers, consumers;
        // boundary positive letters produce on the left, consume on the right
        for (int i = 0; i < static_cast<int>(boundary.size()); ++i) {
            if (boundary[i].place != p) continue;
            const bool positive = boundary[i].sign > 0;
            if (positive == left)
                producers.push_back(Endpoint{bsite, i, p});
        }
        // box ports between the boundary letters and the pair wires
        if (left) {
            for (long long i = 0; i < -k; ++i) producers.push_back(Endpoint{gsite, 0, p});
            for (long long i = 0; i < k; ++i) consumers.push_back(Endpoint{gsite, 0, p});
        } else {
            for (long long i = 0; i < k; ++i) producers.push_back(Endpoint{gsite, 0, p});
        }
        for (int i = 0; i < static_cast<int>(boundary.size()); ++i) {
            if (boundary[i].place != p) continue;
            const bool positive = boundary[i].sign > 0;
            if (positive != left)
                consumers.push_back(Endpoint{bsite, i, p});
        }
        if (!left)
            for (long long i = 0; i < -k; ++i) consumers.push_back(Endpoint{gsite, 0, p});
        if (producers.size() != consumers.size())
            throw DiagramError("generator interface does not balance on place '" + p + "'");
        for (std::size_t i = 0; i < producers.size(); ++i)
            pending.push_back({real_end(producers[i]), real_end(consumers[i]), p});
    }
}

}  // namespace detail

inline Diagram generator_diagram(const Net& net, const TransitionId& t, const ObjString& u,
                                 const ObjString& v) {
    Diagram d;
    d.dom = u;
    d.cod = v;
    d.boxes.push_back(t);
    std::vector<detail::PendingWire> pending;
    detail::wire_generator_side(u, net.in(t), true, pending);
    detail::wire_generator_side(v, net.out(t), false, pending);
    d.wires = detail::contract_junctions(pending);
    return d;
}

/// Compositional interpretation of a term as a normal-form diagram.
inline Diagram of_term(const Term& t, const Net& net) {
    typecheck(t, net);
    switch (t.kind) {
        case Term::Kind::Id:
            return identity_diagram(t.u);
        case Term::Kind::Sym: {
            Diagram d;
            d.dom = concat(t.u, t.v);
            d.cod = concat(t.v, t.u);
            const int nu = static_cast<int>(t.u.size());
            const int nv = static_cast<int>(t.v.size());
            auto link = [&](int di, int ci, const Letter& l) {
                Endpoint dm{Endpoint::Site::Dom, di, l.place};
                Endpoint cd{Endpoint::Site::Cod, ci, l.place};
                if (l.sign > 0)
                    d.wires.push_back(Wire{dm, cd, l.place});
                else
                    d.wires.push_back(Wire{cd, dm, l.place});
            };
            for (int i = 0; i < nu; ++i) link(i, nv + i, t.u[i]);
            for (int j = 0; j < nv; ++j) link(nu + j, j, t.v[j]);
            return d;
        }
        case Term::Kind::Cup: {
            Diagram d;
            d.cod = concat(t.u, dual(t.u));
            const int n = static_cast<int>(t.u.size());
            for (int i = 0; i < n; ++i) {
                const Letter& l = t.u[i];
                const int j = 2 * n - 1 - i;  // the matching dual letter
                Endpoint a{Endpoint::Site::Cod, i, l.place};
                Endpoint b{Endpoint::Site::Cod, j, l.place};
                if (l.sign > 0)
                    d.wires.push_back(Wire{b, a, l.place});
                else
                    d.wires.push_back(Wire{a, b, l.place});
            }
            return d;
        }
        case Term::Kind::Cap: {
            Diagram d;
            d.dom = concat(t.u, dual(t.u));
            const int n = static_cast<int>(t.u.size());
            for (int i = 0; i < n; ++i) {
                const Letter& l = t.u[i];
                const int j = 2 * n - 1 - i;
                Endpoint a{Endpoint::Site::Dom, i, l.place};
                Endpoint b{Endpoint::Site::Dom, j, l.place};
                if (l.sign > 0)
                    d.wires.push_back(Wire{a, b, l.place});
                else
                    d.wires.push_back(Wire{b, a, l.place});
            }
            return d;
        }
        case Term::Kind::Gen:
            return generator_diagram(net, t.gen, t.u, t.v);
        case Term::Kind::Comp:
            return compose(of_term(*t.left, net), of_term(*t.right, net));
        case Term::Kind::Tensor:
            return tensor(of_term(*t.left, net), of_term(*t.right, net));
    }
    throw DiagramError("malformed term");
}

/// dom' = dual(cod), cod' = dual(dom); boundary endpoints reverse and flip
/// sign, which preserves polarity, so wires keep their orientation.
inline Diagram transpose(const Diagram& d) {
    Diagram r;
    r.dom = dual(d.cod);
    r.cod = dual(d.dom);
    r.boxes = d.boxes;
    const int nd = static_cast<int>(d.dom.size());
    const int nc = static_cast<int>(d.cod.size());
    auto flip = [&](Endpoint e) {
        if (e.site == Endpoint::Site::Dom) {
            e.site = Endpoint::Site::Cod;
            e.index = nd - 1 - e.index;
        } else if (e.site == Endpoint::Site::Cod) {
            e.site = Endpoint::Site::Dom;
            e.index = nc - 1 - e.index;
        }
        return e;
    };
    for (const auto& w : d.wires)
        r.wires.push_back(Wire{flip(w.from), flip(w.to), w.place});
    return r;
}

namespace detail {

inline std::string encode_endpoint(const Endpoint& e, const std::vector<int>* box_map) {
    switch (e.site) {
        case Endpoint::Site::Dom: return "D" + std::to_string(e.index);
        case Endpoint::Site::Cod: return "C" + std::to_string(e.index);
        case Endpoint::Site::BoxIn:
            return "I" + std::to_string(box_map ? (*box_map)[e.index] : e.index) + ":" + e.place;
        case Endpoint::Site::BoxOut:
            return "O" + std::to_string(box_map ? (*box_map)[e.index] : e.index) + ":" + e.place;
    }
    return "?";
}

inline std::vector<std::string> encode_wires(const Diagram& d, const std::vector<int>* box_map) {
    std::vector<std::string> enc;
    enc.reserve(d.wires.size());
    for (const auto& w : d.wires)
        enc.push_back(encode_endpoint(w.from, box_map) + ">" + encode_endpoint(w.to, box_map) +
                      "#" + w.place);
    std::sort(enc.begin(), enc.end());
    return enc;
}

// Iterative color refinement with individualization backtracking. Boundary
// positions are pinned; box colors start from transition labels and refine
// by incident wire signatures until stable, then ties are broken by search.
class IsoChecker {
public:
    IsoChecker(const Diagram& a, const Diagram& b) : a_(a), b_(b) {}

    bool run() {
        if (a_.dom != b_.dom || a_.cod != b_.cod) return false;
        if (a_.boxes.size() != b_.boxes.size() || a_.wires.size() != b_.wires.size())
            return false;
        std::vector<std::string> la = a_.boxes, lb = b_.boxes;
        std::sort(la.begin(), la.end());
        std::sort(lb.begin(), lb.end());
        if (la != lb) return false;
        incident_a_ = incidence(a_);
        incident_b_ = incidence(b_);
        std::vector<int> ca = initial_colors(a_), cb = initial_colors(b_);
        return search(ca, cb);
    }

private:
    const Diagram& a_;
    const Diagram& b_;
    std::vector<std::vector<std::size_t>> incident_a_, incident_b_;
    std::map<std::string, int> palette_;

    int color_of(const std::string& sig) {
        auto [it, _] = palette_.emplace(sig, static_cast<int>(palette_.size()));
        return it->second;
    }

    static bool at_box(const Endpoint& e) {
        return e.site == Endpoint::Site::BoxIn || e.site == Endpoint::Site::BoxOut;
    }

    static std::vector<std::vector<std::size_t>> incidence(const Diagram& d) {
        std::vector<std::vector<std::size_t>> inc(d.boxes.size());
        for (std::size_t i = 0; i < d.wires.size(); ++i) {
            const auto& w = d.wires[i];
            if (at_box(w.from)) inc[w.from.index].push_back(i);
            if (at_box(w.to) && !(at_box(w.from) && w.to.index == w.from.index))
                inc[w.to.index].push_back(i);
        }
        return inc;
    }

    std::vector<int> initial_colors(const Diagram& d) {
        std::vector<int> c(d.boxes.size());
        for (std::size_t i = 0; i < d.boxes.size(); ++i) c[i] = color_of("L" + d.boxes[i]);
        return c;
    }

    static std::string peer_sig(const Endpoint& e, int box, const std::vector<int>& colors) {
        switch (e.site) {
            case Endpoint::Site::Dom: return "D" + std::to_string(e.index);
            case Endpoint::Site::Cod: return "C" + std::to_string(e.index);
            case Endpoint::Site::BoxIn:
            case Endpoint::Site::BoxOut: {
                std::string s = e.site == Endpoint::Site::BoxIn ? "i" : "o";
                s += e.place;
                s += e.index == box ? "@self" : "@" + std::to_string(colors[e.index]);
                return s;
            }
        }
        return "?";
    }

    std::string box_signature(const Diagram& d, const std::vector<std::vector<std::size_t>>& inc,
                              const std::vector<int>& colors, int b) {
        std::vector<std::string> parts;
        for (std::size_t wi : inc[b]) {
            const Wire& w = d.wires[wi];
            if (at_box(w.from) && w.from.index == b)
                parts.push_back(std::string("f") +
                                (w.from.site == Endpoint::Site::BoxIn ? "i" : "o") + w.place +
                                ">" + peer_sig(w.to, b, colors));
            if (at_box(w.to) && w.to.index == b)
                parts.push_back(std::string("t") +
                                (w.to.site == Endpoint::Site::BoxIn ? "i" : "o") + w.place + "<" +
                                peer_sig(w.from, b, colors));
        }
        std::sort(parts.begin(), parts.end());
        std::string sig = "K" + std::to_string(colors[b]);
        for (auto& p : parts) sig += "|" + p;
        return sig;
    }

    // refine both colorings in lockstep; false when histograms diverge
    bool refine(std::vector<int>& ca, std::vector<int>& cb) {
        for (int round = 0; round < static_cast<int>(ca.size()) + 1; ++round) {
            std::vector<int> na(ca.size()), nb(cb.size());
            for (std::size_t i = 0; i < ca.size(); ++i)
                na[i] = color_of(box_signature(a_, incident_a_, ca, static_cast<int>(i)));
            for (std::size_t i = 0; i < cb.size(); ++i)
                nb[i] = color_of(box_signature(b_, incident_b_, cb, static_cast<int>(i)));
            std::map<int, int> ha, hb;
            for (int c : na) ha[c]++;
            for (int c : nb) hb[c]++;
            if (ha != hb) return false;
            bool stable = true;
            {
                std::map<int, std::set<int>> split;
                for (std::size_t i = 0; i < ca.size(); ++i) split[ca[i]].insert(na[i]);
                for (std::size_t i = 0; i < cb.size(); ++i) split[cb[i]].insert(nb[i]);
                for (auto& [_, s] : split)
                    if (s.size() > 1) stable = false;
            }
            ca = std::move(na);
            cb = std::move(nb);
            if (stable) break;
        }
        return true;
    }

    bool search(std::vector<int> ca, std::vector<int> cb) {
        if (!refine(ca, cb)) return false;
        // find smallest non-singleton class
        std::map<int, std::vector<int>> cls_a, cls_b;
        for (std::size_t i = 0; i < ca.size(); ++i) cls_a[ca[i]].push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < cb.size(); ++i) cls_b[cb[i]].push_back(static_cast<int>(i));
        int target = -1;
        std::size_t best = 0;
        for (auto& [c, v] : cls_a)
            if (v.size() > 1 && (target == -1 || v.size() < best)) {
                target = c;
                best = v.size();
            }
        if (target == -1) {
            // all classes singleton: read off the bijection and compare wires
            std::vector<int> box_map(ca.size());
            std::map<int, int> where_b;
            for (std::size_t i = 0; i < cb.size(); ++i) where_b[cb[i]] = static_cast<int>(i);
            for (std::size_t i = 0; i < ca.size(); ++i) {
                auto it = where_b.find(ca[i]);
                if (it == where_b.end()) return false;
                box_map[i] = it->second;
            }
            return encode_wires(a_, &box_map) == encode_wires(b_, nullptr);
        }
        const int b1 = cls_a[target].front();
        for (int b2 : cls_b[target]) {
            std::vector<int> ca2 = ca, cb2 = cb;
            const int fresh = color_of("X" + std::to_string(palette_.size()));
            ca2[b1] = fresh;
            cb2[b2] = fresh;
            if (search(std::move(ca2), std::move(cb2))) return true;
        }
        return false;
    }
};

}  // namespace detail

/// Morphism equality modulo the compact closed axioms: boundary strings must
/// match and a label-preserving box bijection must carry the wire multiset
/// across, with box ports free to permute inside each (side, place) group.
inline bool equal(const Diagram& a, const Diagram& b) {
    return detail::IsoChecker(a, b).run();
}

/// Structural sanity check against a net: every boundary position and every
/// box port is used exactly once and wire places agree with their endpoints.
inline std::vector<std::string> validate_diagram(const Net& net, const Diagram& d) {
    std::vector<std::string> errs;
    std::map<int, int> dom_use, cod_use;
    std::map<std::pair<int, std::pair<int, PlaceId>>, long long> group_use;  // (box,(side,place))
    auto touch = [&](const Endpoint& e, bool as_producer) {
        switch (e.site) {
            case Endpoint::Site::Dom: {
                if (e.index < 0 || e.index >= static_cast<int>(d.dom.size())) {
                    errs.push_back("dom index out of range");
                    return;
                }
                const Letter& l = d.dom[e.index];
                if (l.place != e.place) errs.push_back("dom endpoint place mismatch");
                if ((l.sign > 0) != as_producer) errs.push_back("dom polarity violated");
                dom_use[e.index]++;
                break;
            }
            case Endpoint::Site::Cod: {
                if (e.index < 0 || e.index >= static_cast<int>(d.cod.size())) {
                    errs.push_back("cod index out of range");
                    return;
                }
                const Letter& l = d.cod[e.index];
                if (l.place != e.place) errs.push_back("cod endpoint place mismatch");
                if ((l.sign < 0) != as_producer) errs.push_back("cod polarity violated");
                cod_use[e.index]++;
                break;
            }
            case Endpoint::Site::BoxIn:
            case Endpoint::Site::BoxOut: {
                if (e.index < 0 || e.index >= static_cast<int>(d.boxes.size())) {
                    errs.push_back("box index out of range");
                    return;
                }
                const bool in_side = e.site == Endpoint::Site::BoxIn;
                const auto& iface =
                    in_side ? net.in(d.boxes[e.index]) : net.out(d.boxes[e.index]);
                const long long k = iface.at(e.place);
                if (k == 0) {
                    errs.push_back("wire touches absent group " + e.place);
                    return;
                }
                const bool group_is_producer = in_side ? (k < 0) : (k > 0);
                if (group_is_producer != as_producer) errs.push_back("box polarity violated");
                group_use[{e.index, {in_side ? 0 : 1, e.place}}]++;
                break;
            }
        }
    };
    for (const auto& w : d.wires) {
        if (w.from.place != w.place || w.to.place != w.place)
            errs.push_back("wire place labels disagree");
        touch(w.from, true);
        touch(w.to, false);
    }
    for (int i = 0; i < static_cast<int>(d.dom.size()); ++i)
        if (dom_use[i] != 1) errs.push_back("dom position " + std::to_string(i) + " used " +
                                            std::to_string(dom_use[i]) + " times");
    for (int i = 0; i < static_cast<int>(d.cod.size()); ++i)
        if (cod_use[i] != 1) errs.push_back("cod position " + std::to_string(i) + " used " +
                                            std::to_string(cod_use[i]) + " times");
    for (int b = 0; b < static_cast<int>(d.boxes.size()); ++b) {
        if (!net.has_transition(d.boxes[b])) {
            errs.push_back("box references unknown transition '" + d.boxes[b] + "'");
            continue;
        }
        for (int side = 0; side < 2; ++side) {
            const auto& iface = side == 0 ? net.in(d.boxes[b]) : net.out(d.boxes[b]);
            for (const auto& [p, k] : iface.entries()) {
                const long long need = k > 0 ? k : -k;
                const long long got = group_use[{b, {side, p}}];
                if (got != need)
                    errs.push_back("box " + std::to_string(b) + " group (" +
                                   (side == 0 ? "in" : "out") + "," + p + ") has " +
                                   std::to_string(got) + " wires, expected " +
                                   std::to_string(need));
            }
        }
    }
    return errs;
}

/// Deterministic Graphviz rendering: boundary ports as rank-pinned nodes,
/// boxes as squares, wires as place-labeled edges.
inline std::string to_dot(const Diagram& d) {
    std::string out = "digraph diagram {\n  rankdir=LR;\n";
    if (!d.dom.empty()) {
        out += "  { rank=source;";
        for (std::size_t i = 0; i < d.dom.size(); ++i)
            out += " d" + std::to_string(i) + " [shape=plaintext label=\"" +
                   d.dom[i].place + (d.dom[i].sign < 0 ? "^-1" : "") + "\"];";
        out += " }\n";
    }
    if (!d.cod.empty()) {
        out += "  { rank=sink;";
        for (std::size_t i = 0; i < d.cod.size(); ++i)
            out += " c" + std::to_string(i) + " [shape=plaintext label=\"" +
                   d.cod[i].place + (d.cod[i].sign < 0 ? "^-1" : "") + "\"];";
        out += " }\n";
    }
    for (std::size_t b = 0; b < d.boxes.size(); ++b)
        out += "  b" + std::to_string(b) + " [shape=box style=filled fillcolor=lightgray label=\"" +
               d.boxes[b] + "\"];\n";
    auto node = [](const Endpoint& e) {
        switch (e.site) {
            case Endpoint::Site::Dom: return "d" + std::to_string(e.index);
            case Endpoint::Site::Cod: return "c" + std::to_string(e.index);
            default: return "b" + std::to_string(e.index);
        }
    };
    for (const auto& w : d.wires)
        out += "  " + node(w.from) + " -> " + node(w.to) + " [label=\"" + w.place + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace zpetri
