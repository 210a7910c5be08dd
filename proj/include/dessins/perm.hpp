#pragma once

#include <compare>
#include <string>
#include <vector>

namespace dessins {

// Permutation of {0,...,n-1}, stored as the image array i -> images[i].
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    // Cycle through the listed indices, all other points fixed: {0,1,2} -> (0 1 2).
    static Permutation from_cycle(int n, const std::vector<int>& cycle);
    static Permutation from_image_csv(const std::string& csv);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i]; }
    const std::vector<int>& images() const { return images_; }

    // Function composition: (this ∘ rhs)(i) = this(rhs(i)).
    Permutation compose(const Permutation& rhs) const;
    Permutation inverse() const;

    // Cycles, each listed from its minimal element, ordered by minimal element.
    std::vector<std::vector<int>> orbits() const;
    int orbit_count() const;
    std::vector<int> orbit_sizes_desc() const;

    std::string cycle_string() const;  // "(0 1)(2)"
    std::string image_csv() const;     // "1,0,2"

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<int> images_;
};

// Ordered pair of permutations acting on the same edge set {0,...,n-1}.
struct PermPair {
    Permutation alpha;
    Permutation beta;

    PermPair() = default;
    PermPair(Permutation a, Permutation b);

    int degree() const { return alpha.size(); }

    bool operator==(const PermPair&) const = default;
};

// Closure of {seed} under alpha and beta, returned sorted.  Forward closure
// is enough: both permutations have finite order, so the reachable set is
// closed under inverses as well.
std::vector<int> group_orbit(const PermPair& pair, int seed);

// True iff the edge set is empty or a single orbit of <alpha, beta>.
bool is_irreducible(const PermPair& pair);

// Product on the edge set E1 x E2, flattened row-major: (e1, e2) -> e1*n2 + e2.
// alpha(e1, e2) = (alpha1(e1), alpha2(e2)), and likewise for beta.  The
// flattening convention is part of the file-format contract.
PermPair pair_product(const PermPair& lhs, const PermPair& rhs);

}  // namespace dessins
