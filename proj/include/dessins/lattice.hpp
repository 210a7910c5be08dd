#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dessins/dessin.hpp"

namespace dessins {

// Edge map psi: E_R -> E_S with psi∘alpha_R = alpha_S∘psi, psi∘beta_R =
// beta_S∘psi and psi(e_R) = e_S.  At most one exists for any (R, S); it is
// surjective with fibers of equal size deg(R)/deg(S).
struct Morphism {
    BiasedDessin source;
    BiasedDessin target;
    std::vector<int> map;  // length deg(source), values are target edges

    bool well_formed() const;  // re-checks all three conditions plus fibers
};

// The unique morphism R -> S if one exists, built by seeding map(e_R) = e_S
// and propagating through alpha and beta breadth-first; nullopt iff the
// propagation hits a conflict.
std::optional<Morphism> find_morphism(const BiasedDessin& R,
                                      const BiasedDessin& S);
// Same decision without materializing the Morphism.
bool has_morphism(const BiasedDessin& R, const BiasedDessin& S);

// R is above S in the order when R -> S; D1 is the unique minimum.

// Least upper bound: the <alpha,beta>-orbit of (e_R, e_S) in the product,
// with that pair as chosen edge.  Returned canonicalized.
BiasedDessin join(const BiasedDessin& R, const BiasedDessin& S);

// Greatest lower bound via folding: disjoint union of the edge sets, merge
// e_R with e_S, then propagate merges through alpha and beta until the
// partition is a congruence; the quotient carries well-defined alpha, beta.
// Returned canonicalized.
BiasedDessin meet(const BiasedDessin& R, const BiasedDessin& S);

// matrix[i*k + j] = 1 iff nodes[i] -> nodes[j].
std::vector<char> morphism_matrix(const std::vector<BiasedDessin>& nodes,
                                  int workers = 0);
std::vector<char> morphism_matrix_serial(const std::vector<BiasedDessin>& nodes);

// Covering pairs (i, j) of the order restricted to `nodes`: i -> j, i != j,
// and no node strictly between.  Nodes must be deduplicated (by canonical
// key).  Hasse is relative to the supplied node set.
std::vector<std::pair<int, int>> hasse_edges(
    const std::vector<BiasedDessin>& nodes, int workers = 0);
std::vector<std::pair<int, int>> hasse_edges_serial(
    const std::vector<BiasedDessin>& nodes);

}  // namespace dessins
