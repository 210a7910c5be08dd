#pragma once

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dessins/lattice.hpp"

namespace dessins {

enum class VertexColor { black = 0, white = 1, infinity = 2 };
const char* color_name(VertexColor c);

// One vertex of a node: an alpha-orbit (black), beta-orbit (white) or
// gamma-orbit (at infinity) of the node's canonical form; mult is the orbit
// size.  Within a node, vertices are ordered blacks, whites, faces, each
// color class by the orbit's minimal edge.
struct DecoratedVertex {
    VertexColor color;
    int mult;

    std::string id(int index_in_color) const;  // "b0", "w1", "f0"
    bool operator==(const DecoratedVertex&) const = default;
};

struct DecoratedNode {
    CanonicalKey key;
    std::vector<DecoratedVertex> vertices;
    // Per color: edge -> index into `vertices` of the orbit containing it.
    std::array<std::vector<int>, 3> vertex_of_edge;

    int degree() const { return key.degree; }
    int color_offset(VertexColor c) const;  // index of the first vertex of c
    std::string vertex_id(int vertex_index) const;
    int vertex_index_from_id(const std::string& id) const;

    bool operator==(const DecoratedNode& o) const {
        return key == o.key && vertices == o.vertices;
    }
};

DecoratedNode decorate(const BiasedDessin& canonical_dessin);

// The vertex map V_R -> V_S induced by a morphism: the alpha-orbit of e maps
// to the alpha-orbit of psi(e), and likewise for beta- and gamma-orbits.
// Colors are preserved.  Throws std::logic_error if the orbit images are
// inconsistent (cannot happen for a genuine morphism).
std::vector<int> induced_vertex_map(const Morphism& m);

// Degree-truncated decorated lattice: every biased dessin of degree <= N as a
// decorated node, the Hasse edges of the restricted order, and the induced
// vertex map for every comparable ordered pair (including each node to
// itself).
struct DecoratedLattice {
    int max_degree = 0;
    std::vector<DecoratedNode> nodes;               // sorted by (degree, key)
    std::vector<std::pair<int, int>> hasse;          // covering pairs (from, to)
    // (from, to) -> map; map[v] is a vertex index of `to`.
    std::map<std::pair<int, int>, std::vector<int>> vertex_maps;

    bool operator==(const DecoratedLattice&) const = default;
};

inline constexpr int kMaxDecoratedDegree = 5;

DecoratedLattice build_decorated(int max_degree, int workers = 0);

struct DecorationReport {
    std::vector<std::string> violations;
    int chains_checked = 0;
    int map_edges_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Checks, over the stored maps: (i) every composable triangle of vertex maps
// commutes, (ii) mult(image) divides mult(source) on every map edge,
// (iii) the mult fibers of V_R -> V_{D1} reproduce the partition triple of
// every node, and (iv) D1 is the unique bottom.
DecorationReport verify_decoration(const DecoratedLattice& lattice);

std::string export_lattice_json(const DecoratedLattice& lattice);
std::string export_lattice_dot(const DecoratedLattice& lattice);
DecoratedLattice parse_lattice_json(const std::string& text);

}  // namespace dessins
