#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>

#include "zpetri/net.hpp"

namespace zpetri {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Syntax tree of execution-category morphisms.
struct Term {
    enum class Kind { Id, Sym, Cup, Cap, Gen, Comp, Tensor };

    Kind kind;
    ObjString u, v;      // Id/Cup/Cap use u; Sym and Gen use u and v
    TransitionId gen;    // Gen only
    TermPtr left, right; // Comp/Tensor
};

inline TermPtr id_term(ObjString u) {
    return std::make_shared<Term>(Term{Term::Kind::Id, std::move(u), {}, {}, nullptr, nullptr});
}
inline TermPtr sym_term(ObjString u, ObjString v) {
    return std::make_shared<Term>(Term{Term::Kind::Sym, std::move(u), std::move(v), {}, nullptr, nullptr});
}
inline TermPtr cup_term(ObjString u) {
    return std::make_shared<Term>(Term{Term::Kind::Cup, std::move(u), {}, {}, nullptr, nullptr});
}
inline TermPtr cap_term(ObjString u) {
    return std::make_shared<Term>(Term{Term::Kind::Cap, std::move(u), {}, {}, nullptr, nullptr});
}
inline TermPtr gen_term(TransitionId t, ObjString u, ObjString v) {
    return std::make_shared<Term>(Term{Term::Kind::Gen, std::move(u), std::move(v), std::move(t), nullptr, nullptr});
}
inline TermPtr comp_term(TermPtr l, TermPtr r) {
    return std::make_shared<Term>(Term{Term::Kind::Comp, {}, {}, {}, std::move(l), std::move(r)});
}
inline TermPtr tensor_term(TermPtr l, TermPtr r) {
    return std::make_shared<Term>(Term{Term::Kind::Tensor, {}, {}, {}, std::move(l), std::move(r)});
}

struct TermType {
    ObjString dom, cod;
};

struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TypeMismatchError : TypeError {
    using TypeError::TypeError;
};
struct BadGeneratorError : TypeError {
    using TypeError::TypeError;
};

/// Structural typing: Id(u): u->u; Sym(u,v): uv->vu; Cup(u): I->u.dual(u);
/// Cap(u): u.dual(u)->I; Gen(t,u,v): u->v with the two multiplicity side
/// conditions; Comp glues, Tensor concatenates.
inline TermType typecheck(const Term& t, const Net& net) {
    switch (t.kind) {
        case Term::Kind::Id:
            return {t.u, t.u};
        case Term::Kind::Sym:
            return {concat(t.u, t.v), concat(t.v, t.u)};
        case Term::Kind::Cup:
            return {{}, concat(t.u, dual(t.u))};
        case Term::Kind::Cap:
            return {concat(t.u, dual(t.u)), {}};
        case Term::Kind::Gen: {
            if (!net.has_transition(t.gen))
                throw BadGeneratorError("generator references unknown transition '" + t.gen + "'");
            if (multiplicity(t.u) != net.in(t.gen))
                throw BadGeneratorError("generator '" + t.gen +
                                        "': multiplicity of domain string '" + render_string(t.u) +
                                        "' does not match the transition input");
            if (multiplicity(t.v) != net.out(t.gen))
                throw BadGeneratorError("generator '" + t.gen +
                                        "': multiplicity of codomain string '" + render_string(t.v) +
                                        "' does not match the transition output");
            return {t.u, t.v};
        }
        case Term::Kind::Comp: {
            TermType a = typecheck(*t.left, net);
            TermType b = typecheck(*t.right, net);
            if (a.cod != b.dom)
                throw TypeMismatchError("composition boundary mismatch: '" + render_string(a.cod) +
                                        "' vs '" + render_string(b.dom) + "'");
            return {a.dom, b.cod};
        }
        case Term::Kind::Tensor: {
            TermType a = typecheck(*t.left, net);
            TermType b = typecheck(*t.right, net);
            return {concat(a.dom, b.dom), concat(a.cod, b.cod)};
        }
    }
    throw TypeError("malformed term");
}

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

namespace detail {

class TermParser {
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    TermPtr parse() {
        TermPtr t = parse_comp();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
        return t;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    static bool name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string parse_name() {
        skip_ws();
        if (pos_ >= text_.size() || !name_start(text_[pos_]))
            throw ParseError("expected identifier", pos_);
        std::size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    // letters separated by whitespace, inverse suffix ^-1; stops at | ) ]
    ObjString parse_string() {
        ObjString s;
        while (true) {
            char c = peek();
            if (c == '|' || c == ')' || c == ']' || c == '\0') break;
            std::string nm = parse_name();
            int sign = +1;
            if (pos_ + 2 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '-' &&
                text_[pos_ + 2] == '1') {
                pos_ += 3;
                sign = -1;
            }
            s.push_back(Letter{nm, sign});
        }
        return s;
    }

    TermPtr parse_comp() {
        TermPtr t = parse_tensor();
        while (eat(';')) t = comp_term(t, parse_tensor());
        return t;
    }

    TermPtr parse_tensor() {
        TermPtr t = parse_atom();
        while (eat('*')) t = tensor_term(t, parse_atom());
        return t;
    }

    TermPtr parse_atom() {
        skip_ws();
        if (eat('(')) {
            TermPtr t = parse_comp();
            expect(')');
            return t;
        }
        std::size_t at = pos_;
        std::string nm = parse_name();
        if (nm == "id" && peek() == '(') {
            expect('(');
            ObjString u = parse_string();
            expect(')');
            return id_term(std::move(u));
        }
        if (nm == "sym" && peek() == '(') {
            expect('(');
            ObjString u = parse_string();
            expect('|');
            ObjString v = parse_string();
            expect(')');
            return sym_term(std::move(u), std::move(v));
        }
        if (nm == "cup" && peek() == '(') {
            expect('(');
            ObjString u = parse_string();
            expect(')');
            return cup_term(std::move(u));
        }
        if (nm == "cap" && peek() == '(') {
            expect('(');
            ObjString u = parse_string();
            expect(')');
            return cap_term(std::move(u));
        }
        if (peek() == '[') {
            expect('[');
            ObjString u = parse_string();
            expect('|');
            ObjString v = parse_string();
            expect(']');
            return gen_term(std::move(nm), std::move(u), std::move(v));
        }
        throw ParseError("expected term", at);
    }
};

}  // namespace detail

inline TermPtr parse_term(std::string_view text) { return detail::TermParser(text).parse(); }

/// Inverse of parse_term up to whitespace: single spaces, parentheses exactly
/// where reassociation would otherwise change the tree (Comp under Tensor is
/// always parenthesized).
inline std::string render_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Id:
            return "id(" + render_string(t.u) + ")";
        case Term::Kind::Sym:
            return "sym(" + render_string(t.u) + "|" + render_string(t.v) + ")";
        case Term::Kind::Cup:
            return "cup(" + render_string(t.u) + ")";
        case Term::Kind::Cap:
            return "cap(" + render_string(t.u) + ")";
        case Term::Kind::Gen:
            return t.gen + "[" + render_string(t.u) + "|" + render_string(t.v) + "]";
        case Term::Kind::Comp: {
            std::string l = render_term(*t.left);
            std::string r = render_term(*t.right);
            if (t.right->kind == Term::Kind::Comp) r = "(" + r + ")";
            return l + " ; " + r;
        }
        case Term::Kind::Tensor: {
            std::string l = render_term(*t.left);
            std::string r = render_term(*t.right);
            if (t.left->kind == Term::Kind::Comp) l = "(" + l + ")";
            if (t.right->kind == Term::Kind::Comp || t.right->kind == Term::Kind::Tensor)
                r = "(" + r + ")";
            return l + " * " + r;
        }
    }
    return {};
}

inline bool term_equal(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Id:
        case Term::Kind::Cup:
        case Term::Kind::Cap:
            return a.u == b.u;
        case Term::Kind::Sym:
            return a.u == b.u && a.v == b.v;
        case Term::Kind::Gen:
            return a.gen == b.gen && a.u == b.u && a.v == b.v;
        case Term::Kind::Comp:
        case Term::Kind::Tensor:
            return term_equal(*a.left, *b.left) && term_equal(*a.right, *b.right);
    }
    return false;
}

}  // namespace zpetri
