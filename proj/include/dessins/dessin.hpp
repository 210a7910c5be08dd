#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include "dessins/perm.hpp"

namespace dessins {

class DessinError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class NotIrreducibleError : public DessinError {
    using DessinError::DessinError;
};
class EmptyEdgeSetError : public DessinError {
    using DessinError::DessinError;
};
class ChosenOutOfRangeError : public DessinError {
    using DessinError::DessinError;
};
class DegreeLimitError : public DessinError {
    using DessinError::DessinError;
};

// Cycle-type partitions of alpha, beta and gamma = (alpha beta)^-1, each
// sorted descending.  gamma is the monodromy at infinity.
struct PartitionTriple {
    std::vector<int> alpha;
    std::vector<int> beta;
    std::vector<int> gamma;

    std::string str() const;  // "3/1,1,1/3"

    bool operator==(const PartitionTriple&) const = default;
    auto operator<=>(const PartitionTriple&) const = default;
};

// Identity key of a biased dessin: the image arrays after the canonical
// relabelling, chosen edge 0.  Two biased dessins are equal (related by a
// relabelling that matches chosen edges) iff their keys are identical.
struct CanonicalKey {
    int degree = 0;
    std::vector<int> alpha;
    std::vector<int> beta;

    std::string line() const;  // "n:alphaImages:betaImages:0"

    bool operator==(const CanonicalKey&) const = default;
    auto operator<=>(const CanonicalKey&) const = default;
};

// Irreducible pair of permutations with at least one edge, plus a chosen edge.
class BiasedDessin {
public:
    BiasedDessin(PermPair pair, int chosen);

    int degree() const { return pair_.degree(); }
    const Permutation& alpha() const { return pair_.alpha; }
    const Permutation& beta() const { return pair_.beta; }
    const PermPair& pair() const { return pair_; }
    int chosen() const { return chosen_; }

    bool operator==(const BiasedDessin&) const = default;

private:
    PermPair pair_;
    int chosen_;
};

struct CanonicalResult {
    BiasedDessin dessin;        // the canonical representative, chosen edge 0
    CanonicalKey key;
    std::vector<int> relabel;   // old edge -> new edge
};

// Deterministic relabelling by breadth-first discovery from the chosen edge,
// expanding each discovered edge's alpha-image then beta-image in label
// order.  Idempotent; a complete invariant of biased-dessin equality.
CanonicalResult canonicalize(const BiasedDessin& dessin);
CanonicalKey canonical_key(const BiasedDessin& dessin);
BiasedDessin dessin_from_key(const CanonicalKey& key);

// True iff alpha*beta has exactly one orbit AND the dessin has genus 0
// (#alpha-orbits + #beta-orbits = n + 1).  The genus condition is needed:
// alpha = beta = (0 1 2) has a single alpha*beta orbit but genus 1.
bool is_biased_tree(const BiasedDessin& dessin);

PartitionTriple partition_triple(const BiasedDessin& dessin);

// g with 2 - 2g = #alpha-orbits + #beta-orbits - n + #gamma-orbits.
int genus(const BiasedDessin& dessin);

// Lexicographically least canonical key over all n re-biasings; constant on
// re-biasings, so it identifies the underlying unbiased dessin.
CanonicalKey unbiased_canonical(const BiasedDessin& dessin);

inline constexpr int kMaxEnumerationDegree = 7;

// All biased dessins of the given degree up to equality, as sorted canonical
// keys.  Naive scan of S_n x S_n with the chosen edge fixed at 0, filtered by
// irreducibility, deduplicated by key.  `workers` <= 0 uses the OpenMP
// default; output is independent of the worker count.
std::vector<CanonicalKey> enumerate_biased(int degree, bool trees_only,
                                           int workers = 0);
// Serial reference implementation (plain double loop, no unranking).
std::vector<CanonicalKey> enumerate_biased_serial(int degree, bool trees_only);
// Degrees 1..max_degree, ordered by (degree, key).
std::vector<CanonicalKey> enumerate_universe(int max_degree,
                                             bool trees_only = false,
                                             int workers = 0);

// Line format, bit-exact: "n:alphaImages:betaImages:chosen",
// e.g. biased star(3) = "3:1,2,0:0,1,2:0".
std::string dessin_line(const BiasedDessin& dessin);
BiasedDessin parse_dessin_line(const std::string& line);
// Parses a line and checks it is the canonical representative.
CanonicalKey key_from_line(const std::string& line);

// alpha = n-cycle (0 1 ... n-1), beta = id, chosen 0.
BiasedDessin star_dessin(int n);
// The unique one-edge biased dessin D1.
BiasedDessin unit_dessin();

}  // namespace dessins
