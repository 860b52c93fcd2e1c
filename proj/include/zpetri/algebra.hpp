#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace zpetri {

using PlaceId = std::string;

/// Finitely supported place -> integer mapping. Zero entries are never
/// stored, so structural equality is multiset equality.
class SignedMultiset {
public:
    using Map = std::map<PlaceId, long long>;

    SignedMultiset() = default;
    SignedMultiset(std::initializer_list<std::pair<const PlaceId, long long>> init) {
        for (const auto& [p, k] : init) add(p, k);
    }

    long long at(const PlaceId& p) const {
        auto it = entries_.find(p);
        return it == entries_.end() ? 0 : it->second;
    }

    void add(const PlaceId& p, long long k) {
        if (k == 0) return;
        auto it = entries_.find(p);
        if (it == entries_.end()) {
            entries_.emplace(p, k);
        } else {
            it->second += k;
            if (it->second == 0) entries_.erase(it);
        }
    }

    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

    bool nonnegative() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](const auto& e) { return e.second > 0; });
    }

    friend bool operator==(const SignedMultiset&, const SignedMultiset&) = default;

private:
    Map entries_;
};

inline SignedMultiset msum(const SignedMultiset& a, const SignedMultiset& b) {
    SignedMultiset r = a;
    for (const auto& [p, k] : b.entries()) r.add(p, k);
    return r;
}

inline SignedMultiset mneg(const SignedMultiset& a) {
    SignedMultiset r;
    for (const auto& [p, k] : a.entries()) r.add(p, -k);
    return r;
}

inline SignedMultiset msub(const SignedMultiset& a, const SignedMultiset& b) {
    return msum(a, mneg(b));
}

inline SignedMultiset mscale(const SignedMultiset& a, long long c) {
    SignedMultiset r;
    for (const auto& [p, k] : a.entries()) r.add(p, c * k);
    return r;
}

/// Pointwise a >= b.
inline bool mgeq(const SignedMultiset& a, const SignedMultiset& b) {
    for (const auto& [p, k] : b.entries())
        if (a.at(p) < k) return false;
    for (const auto& [p, k] : a.entries())
        if (k < b.at(p)) return false;
    return true;
}

/// One letter of an object string: a place or its formal inverse.
struct Letter {
    PlaceId place;
    int sign = +1;  // +1 or -1

    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline Letter pos(PlaceId p) { return Letter{std::move(p), +1}; }
inline Letter neg(PlaceId p) { return Letter{std::move(p), -1}; }

/// Word over places and formal inverses; the empty string is the monoidal unit.
using ObjString = std::vector<Letter>;

inline ObjString concat(const ObjString& u, const ObjString& v) {
    ObjString r = u;
    r.insert(r.end(), v.begin(), v.end());
    return r;
}

/// Group inverse of the word: reverse and flip every sign.
inline ObjString dual(const ObjString& u) {
    ObjString r;
    r.reserve(u.size());
    for (auto it = u.rbegin(); it != u.rend(); ++it) r.push_back(Letter{it->place, -it->sign});
    return r;
}

inline SignedMultiset multiplicity(const ObjString& u) {
    SignedMultiset m;
    for (const Letter& l : u) m.add(l.place, l.sign);
    return m;
}

/// Canonical right inverse of multiplicity: places ascending, k > 0 gives
/// k positive letters, k < 0 gives |k| inverse letters.
inline ObjString section(const SignedMultiset& m) {
    ObjString r;
    for (const auto& [p, k] : m.entries()) {
        const long long n = k > 0 ? k : -k;
        for (long long i = 0; i < n; ++i) r.push_back(Letter{p, k > 0 ? +1 : -1});
    }
    return r;
}

/// Text form: letters separated by single spaces, inverses marked `^-1`.
inline std::string render_string(const ObjString& u) {
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) out += ' ';
        out += u[i].place;
        if (u[i].sign < 0) out += "^-1";
    }
    return out;
}

}  // namespace zpetri
