#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dessins/dessin.hpp"

namespace dessins {

class FormalSum;

// A value an invariant can take: a degree, a partition triple, a canonical
// key, or a (boxed, immutable) formal sum; the last alternative is what
// makes sums-of-sums possible.  Totally ordered so formal sums serialize
// deterministically: degrees numerically, triples and keys lexicographically,
// sums term by term; values of different kinds order by kind.
class Value {
public:
    Value(long long degree) : v_(degree) {}
    Value(int degree) : v_(static_cast<long long>(degree)) {}
    Value(PartitionTriple triple) : v_(std::move(triple)) {}
    Value(CanonicalKey key) : v_(std::move(key)) {}
    static Value sum(FormalSum s);

    std::string str() const;

    friend int compare(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

private:
    std::variant<long long, PartitionTriple, CanonicalKey,
                 std::shared_ptr<const FormalSum>> v_;
};

// Finitely supported integer-valued map on Values; zero coefficients are
// never stored, terms are kept sorted, equality is exact term by term.
class FormalSum {
public:
    FormalSum() = default;
    static FormalSum singleton(Value v, long long coeff = 1);

    void add(const Value& v, long long coeff);
    FormalSum& operator+=(const FormalSum& other);
    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    FormalSum scaled(long long k) const;

    const std::vector<std::pair<Value, long long>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    long long total_mass() const;  // sum of coefficients

    std::vector<std::string> lines() const;  // sorted "coefficient*value"
    std::string inline_str() const;          // "{c*v + c*v}"

    friend int compare(const FormalSum& a, const FormalSum& b);
    friend bool operator==(const FormalSum& a, const FormalSum& b) { return compare(a, b) == 0; }
    friend bool operator<(const FormalSum& a, const FormalSum& b) { return compare(a, b) < 0; }

private:
    std::vector<std::pair<Value, long long>> terms_;  // sorted by Value, nonzero
};

// Named relabelling-invariant function of a biased dessin.
struct InvariantFn {
    std::string name;
    std::function<Value(const BiasedDessin&)> eval;
};

InvariantFn degree_invariant();
InvariantFn triple_invariant();
InvariantFn key_invariant();
// X -> tower_invariant(h, S, X) packaged as an invariant (sums of sums).
InvariantFn tower_as_invariant(InvariantFn h, std::vector<BiasedDessin> S,
                               std::string name);

// Sum over Y in S of [h(join(Y, X))].  S must be deduplicated by canonical
// key; the result is order-independent by construction.
FormalSum tower_invariant(const InvariantFn& h,
                          const std::vector<BiasedDessin>& S,
                          const BiasedDessin& X);

// All Y in the pool with h(Y) = h(R).
std::vector<BiasedDessin> level_set(const InvariantFn& h, const BiasedDessin& R,
                                    const std::vector<BiasedDessin>& pool);

// The distinct re-biasings Y of the unbiased dessin named by `unbiased_key`
// (one per biased equality class), summed as Σ [h(Y)].
FormalSum unbiased_descent(const InvariantFn& h, const CanonicalKey& unbiased_key);

// Number of distinct biased classes over the given unbiased dessin.
int bias_class_count(const CanonicalKey& unbiased_key);

}  // namespace dessins
