#include "dessins/invariants.hpp"

#include <algorithm>
#include <set>

#include "dessins/lattice.hpp"

namespace dessins {

Value Value::sum(FormalSum s) {
    Value v(0LL);
    v.v_ = std::make_shared<const FormalSum>(std::move(s));
    return v;
}

int compare(const Value& a, const Value& b) {
    if (a.v_.index() != b.v_.index()) {
        return a.v_.index() < b.v_.index() ? -1 : 1;
    }
    switch (a.v_.index()) {
        case 0: {
            auto x = std::get<0>(a.v_), y = std::get<0>(b.v_);
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        case 1: {
            const auto& x = std::get<1>(a.v_);
            const auto& y = std::get<1>(b.v_);
            return x < y ? -1 : (y < x ? 1 : 0);
        }
        case 2: {
            const auto& x = std::get<2>(a.v_);
            const auto& y = std::get<2>(b.v_);
            return x < y ? -1 : (y < x ? 1 : 0);
        }
        default:
            return compare(*std::get<3>(a.v_), *std::get<3>(b.v_));
    }
}

std::string Value::str() const {
    switch (v_.index()) {
        case 0: return std::to_string(std::get<0>(v_));
        case 1: return std::get<1>(v_).str();
        case 2: return std::get<2>(v_).line();
        default: return std::get<3>(v_)->inline_str();
    }
}

FormalSum FormalSum::singleton(Value v, long long coeff) {
    FormalSum s;
    s.add(v, coeff);
    return s;
}

void FormalSum::add(const Value& v, long long coeff) {
    if (coeff == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                               [](const auto& term, const Value& key) {
                                   return term.first < key;
                               });
    if (it != terms_.end() && it->first == v) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    } else {
        terms_.insert(it, {v, coeff});
    }
}

FormalSum& FormalSum::operator+=(const FormalSum& other) {
    for (const auto& [v, c] : other.terms_) add(v, c);
    return *this;
}

FormalSum FormalSum::scaled(long long k) const {
    FormalSum out;
    if (k == 0) return out;
    out.terms_ = terms_;
    for (auto& [v, c] : out.terms_) c *= k;
    return out;
}

long long FormalSum::total_mass() const {
    long long mass = 0;
    for (const auto& [v, c] : terms_) mass += c;
    return mass;
}

std::vector<std::string> FormalSum::lines() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& [v, c] : terms_) {
        out.push_back(std::to_string(c) + "*" + v.str());
    }
    return out;
}

std::string FormalSum::inline_str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        out += std::to_string(c) + "*" + v.str();
    }
    return out + "}";
}

int compare(const FormalSum& a, const FormalSum& b) {
    const size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a.terms_[i].first, b.terms_[i].first);
        if (c != 0) return c;
        if (a.terms_[i].second != b.terms_[i].second) {
            return a.terms_[i].second < b.terms_[i].second ? -1 : 1;
        }
    }
    if (a.terms_.size() != b.terms_.size()) {
        return a.terms_.size() < b.terms_.size() ? -1 : 1;
    }
    return 0;
}

InvariantFn degree_invariant() {
    return {"degree", [](const BiasedDessin& d) { return Value(d.degree()); }};
}

InvariantFn triple_invariant() {
    return {"triple", [](const BiasedDessin& d) { return Value(partition_triple(d)); }};
}

InvariantFn key_invariant() {
    return {"key", [](const BiasedDessin& d) { return Value(canonical_key(d)); }};
}

InvariantFn tower_as_invariant(InvariantFn h, std::vector<BiasedDessin> S,
                               std::string name) {
    return {std::move(name),
            [h = std::move(h), S = std::move(S)](const BiasedDessin& X) {
                return Value::sum(tower_invariant(h, S, X));
            }};
}

FormalSum tower_invariant(const InvariantFn& h, const std::vector<BiasedDessin>& S,
                          const BiasedDessin& X) {
    FormalSum sum;
    for (const BiasedDessin& Y : S) {
        sum.add(h.eval(join(Y, X)), 1);
    }
    return sum;
}

std::vector<BiasedDessin> level_set(const InvariantFn& h, const BiasedDessin& R,
                                    const std::vector<BiasedDessin>& pool) {
    const Value target = h.eval(R);
    std::vector<BiasedDessin> out;
    for (const BiasedDessin& Y : pool) {
        if (h.eval(Y) == target) out.push_back(Y);
    }
    return out;
}

FormalSum unbiased_descent(const InvariantFn& h, const CanonicalKey& unbiased_key) {
    const BiasedDessin base = dessin_from_key(unbiased_key);
    if (unbiased_canonical(base) != unbiased_key) {
        throw std::invalid_argument("key is not an unbiased canonical key: " +
                                    unbiased_key.line());
    }
    std::set<CanonicalKey> classes;
    for (int e = 0; e < base.degree(); ++e) {
        classes.insert(canonical_key(BiasedDessin(base.pair(), e)));
    }
    FormalSum sum;
    for (const CanonicalKey& key : classes) {
        sum.add(h.eval(dessin_from_key(key)), 1);
    }
    return sum;
}

int bias_class_count(const CanonicalKey& unbiased_key) {
    const BiasedDessin base = dessin_from_key(unbiased_key);
    std::set<CanonicalKey> classes;
    for (int e = 0; e < base.degree(); ++e) {
        classes.insert(canonical_key(BiasedDessin(base.pair(), e)));
    }
    return static_cast<int>(classes.size());
}

}  // namespace dessins
