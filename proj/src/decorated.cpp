#include "dessins/decorated.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dessins {

const char* color_name(VertexColor c) {
    switch (c) {
        case VertexColor::black: return "black";
        case VertexColor::white: return "white";
        default: return "infinity";
    }
}

std::string DecoratedVertex::id(int index_in_color) const {
    static const char prefix[3] = {'b', 'w', 'f'};
    return std::string(1, prefix[static_cast<int>(color)]) + std::to_string(index_in_color);
}

int DecoratedNode::color_offset(VertexColor c) const {
    int offset = 0;
    for (const auto& v : vertices) {
        if (v.color == c) break;
        ++offset;
    }
    return offset;
}

std::string DecoratedNode::vertex_id(int vertex_index) const {
    const DecoratedVertex& v = vertices[vertex_index];
    return v.id(vertex_index - color_offset(v.color));
}

int DecoratedNode::vertex_index_from_id(const std::string& id) const {
    if (id.empty()) throw std::invalid_argument("empty vertex id");
    VertexColor color;
    switch (id[0]) {
        case 'b': color = VertexColor::black; break;
        case 'w': color = VertexColor::white; break;
        case 'f': color = VertexColor::infinity; break;
        default: throw std::invalid_argument("bad vertex id: " + id);
    }
    const int within = std::stoi(id.substr(1));
    const int idx = color_offset(color) + within;
    if (idx < 0 || idx >= static_cast<int>(vertices.size()) ||
        vertices[idx].color != color) {
        throw std::invalid_argument("vertex id out of range: " + id);
    }
    return idx;
}

DecoratedNode decorate(const BiasedDessin& d) {
    DecoratedNode node;
    node.key = canonical_key(d);
    const int n = d.degree();
    const Permutation gamma = d.alpha().compose(d.beta()).inverse();
    const Permutation* perms[3] = {&d.alpha(), &d.beta(), &gamma};
    for (int c = 0; c < 3; ++c) {
        node.vertex_of_edge[c].assign(n, -1);
        for (const auto& orbit : perms[c]->orbits()) {
            const int vertex_index = static_cast<int>(node.vertices.size());
            node.vertices.push_back(DecoratedVertex{static_cast<VertexColor>(c),
                                                    static_cast<int>(orbit.size())});
            for (int e : orbit) node.vertex_of_edge[c][e] = vertex_index;
        }
    }
    return node;
}

std::vector<int> induced_vertex_map(const Morphism& m) {
    const DecoratedNode src = decorate(m.source);
    const DecoratedNode dst = decorate(m.target);
    std::vector<int> map(src.vertices.size(), -1);
    for (int c = 0; c < 3; ++c) {
        for (int e = 0; e < m.source.degree(); ++e) {
            const int v = src.vertex_of_edge[c][e];
            const int image = dst.vertex_of_edge[c][m.map[e]];
            if (map[v] < 0) {
                map[v] = image;
            } else if (map[v] != image) {
                throw std::logic_error("orbit images inconsistent: not a morphism");
            }
        }
    }
    return map;
}

DecoratedLattice build_decorated(int max_degree, int workers) {
    if (max_degree < 1 || max_degree > kMaxDecoratedDegree) {
        throw DegreeLimitError("decorated lattice degree must be between 1 and " +
                               std::to_string(kMaxDecoratedDegree));
    }
    DecoratedLattice lattice;
    lattice.max_degree = max_degree;

    const std::vector<CanonicalKey> keys = enumerate_universe(max_degree, false, workers);
    std::vector<BiasedDessin> dessins;
    dessins.reserve(keys.size());
    for (const auto& key : keys) {
        dessins.push_back(dessin_from_key(key));
        lattice.nodes.push_back(decorate(dessins.back()));
    }

    const int k = static_cast<int>(dessins.size());
    const std::vector<char> matrix = morphism_matrix(dessins, workers);
    lattice.hasse = hasse_edges(dessins, workers);

    std::vector<std::vector<int>> maps(static_cast<size_t>(k) * k);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers > 0 ? workers : omp_get_max_threads())
#endif
    for (int flat = 0; flat < k * k; ++flat) {
        if (!matrix[flat]) continue;
        const int i = flat / k, j = flat % k;
        auto m = find_morphism(dessins[i], dessins[j]);
        maps[flat] = induced_vertex_map(*m);
    }
    for (int flat = 0; flat < k * k; ++flat) {
        if (matrix[flat]) {
            lattice.vertex_maps.emplace(std::make_pair(flat / k, flat % k),
                                        std::move(maps[flat]));
        }
    }
    return lattice;
}

DecorationReport verify_decoration(const DecoratedLattice& lattice) {
    DecorationReport report;
    const auto& maps = lattice.vertex_maps;

    // (ii) mult of the image divides mult of the source.
    for (const auto& [pair, map] : maps) {
        const DecoratedNode& from = lattice.nodes[pair.first];
        const DecoratedNode& to = lattice.nodes[pair.second];
        for (size_t v = 0; v < map.size(); ++v) {
            ++report.map_edges_checked;
            if (from.vertices[v].color != to.vertices[map[v]].color) {
                report.violations.push_back(
                    "color not preserved on map " + std::to_string(pair.first) + "->" +
                    std::to_string(pair.second) + " at " + from.vertex_id(static_cast<int>(v)));
            }
            if (from.vertices[v].mult % to.vertices[map[v]].mult != 0) {
                report.violations.push_back(
                    "mult(image) does not divide mult(source) on map " +
                    std::to_string(pair.first) + "->" + std::to_string(pair.second) +
                    " at " + from.vertex_id(static_cast<int>(v)));
            }
        }
    }

    // (i) all composable triangles commute.
    for (const auto& [ij, map_ij] : maps) {
        const auto [i, j] = ij;
        for (const auto& [jk, map_jk] : maps) {
            if (jk.first != j) continue;
            const int k = jk.second;
            const auto it = maps.find({i, k});
            if (it == maps.end()) {
                report.violations.push_back("order not transitive: " + std::to_string(i) +
                                            "->" + std::to_string(j) + "->" + std::to_string(k));
                continue;
            }
            ++report.chains_checked;
            const auto& map_ik = it->second;
            for (size_t v = 0; v < map_ij.size(); ++v) {
                if (map_jk[map_ij[v]] != map_ik[v]) {
                    report.violations.push_back(
                        "triangle " + std::to_string(i) + "->" + std::to_string(j) + "->" +
                        std::to_string(k) + " does not commute at vertex " +
                        lattice.nodes[i].vertex_id(static_cast<int>(v)));
                    break;
                }
            }
        }
    }

    // D1 is the unique bottom, with three multiplicity-one vertices.
    if (lattice.nodes.empty() || lattice.nodes[0].degree() != 1) {
        report.violations.push_back("bottom node is not the one-edge dessin");
    } else {
        const DecoratedNode& bottom = lattice.nodes[0];
        if (bottom.vertices.size() != 3 ||
            !std::all_of(bottom.vertices.begin(), bottom.vertices.end(),
                         [](const DecoratedVertex& v) { return v.mult == 1; })) {
            report.violations.push_back("bottom node must have three multiplicity-one vertices");
        }
        for (size_t i = 0; i < lattice.nodes.size(); ++i) {
            if (maps.find({static_cast<int>(i), 0}) == maps.end()) {
                report.violations.push_back("node " + std::to_string(i) +
                                            " has no map to the bottom");
            }
        }
        // (iii) mult fibers over V_{D1} reproduce the partition triple.
        for (size_t i = 0; i < lattice.nodes.size(); ++i) {
            const auto it = maps.find({static_cast<int>(i), 0});
            if (it == maps.end()) continue;
            const DecoratedNode& node = lattice.nodes[i];
            std::vector<int> fiber[3];
            for (size_t v = 0; v < node.vertices.size(); ++v) {
                fiber[it->second[v]].push_back(node.vertices[v].mult);
            }
            for (auto& f : fiber) std::sort(f.rbegin(), f.rend());
            const PartitionTriple expected = partition_triple(dessin_from_key(node.key));
            if (fiber[0] != expected.alpha || fiber[1] != expected.beta ||
                fiber[2] != expected.gamma) {
                report.violations.push_back("fibers over the bottom do not give the partition triple at node " +
                                            std::to_string(i));
            }
        }
    }
    return report;
}

namespace {

using nlohmann::json;

json node_to_json(const DecoratedNode& node) {
    json vertices = json::array();
    for (size_t v = 0; v < node.vertices.size(); ++v) {
        vertices.push_back({{"id", node.vertex_id(static_cast<int>(v))},
                            {"color", color_name(node.vertices[v].color)},
                            {"mult", node.vertices[v].mult}});
    }
    return {{"degree", node.degree()}, {"key", node.key.line()}, {"vertices", vertices}};
}

}  // namespace

std::string export_lattice_json(const DecoratedLattice& lattice) {
    json doc;
    doc["schema"] = "biased-dessins-lattice/1";
    doc["max_degree"] = lattice.max_degree;
    json nodes = json::array();
    for (const auto& node : lattice.nodes) nodes.push_back(node_to_json(node));
    doc["nodes"] = std::move(nodes);
    json hasse = json::array();
    for (const auto& [from, to] : lattice.hasse) hasse.push_back({from, to});
    doc["hasse"] = std::move(hasse);
    json maps = json::array();
    for (const auto& [pair, map] : lattice.vertex_maps) {
        json entry;
        entry["from"] = pair.first;
        entry["to"] = pair.second;
        json image;
        const DecoratedNode& from = lattice.nodes[pair.first];
        const DecoratedNode& to = lattice.nodes[pair.second];
        for (size_t v = 0; v < map.size(); ++v) {
            image[from.vertex_id(static_cast<int>(v))] = to.vertex_id(map[v]);
        }
        entry["map"] = std::move(image);
        maps.push_back(std::move(entry));
    }
    doc["vertex_maps"] = std::move(maps);
    return doc.dump(2) + "\n";
}

std::string export_lattice_dot(const DecoratedLattice& lattice) {
    std::ostringstream out;
    out << "digraph biased_dessin_lattice {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    for (size_t i = 0; i < lattice.nodes.size(); ++i) {
        const auto triple = partition_triple(dessin_from_key(lattice.nodes[i].key));
        out << "  n" << i << " [label=\"deg " << lattice.nodes[i].degree() << "  "
            << triple.str() << "\"];\n";
    }
    // Covering pairs point toward the bottom, so D1 ends up as the sink row.
    for (const auto& [from, to] : lattice.hasse) {
        out << "  n" << from << " -> n" << to << ";\n";
    }
    out << "}\n";
    return out.str();
}

DecoratedLattice parse_lattice_json(const std::string& text) {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != "biased-dessins-lattice/1") {
        throw std::invalid_argument("unknown lattice schema");
    }
    DecoratedLattice lattice;
    lattice.max_degree = doc.at("max_degree").get<int>();
    for (const auto& jnode : doc.at("nodes")) {
        const CanonicalKey key = key_from_line(jnode.at("key").get<std::string>());
        DecoratedNode node = decorate(dessin_from_key(key));
        // The decoration is derived from the key; cross-check the stored copy.
        json expected = node_to_json(node);
        if (expected.at("vertices") != jnode.at("vertices") ||
            expected.at("degree") != jnode.at("degree")) {
            throw std::invalid_argument("stored decoration disagrees with the key " + key.line());
        }
        lattice.nodes.push_back(std::move(node));
    }
    for (const auto& edge : doc.at("hasse")) {
        const int from = edge.at(0).get<int>();
        const int to = edge.at(1).get<int>();
        if (from < 0 || to < 0 || from >= static_cast<int>(lattice.nodes.size()) ||
            to >= static_cast<int>(lattice.nodes.size())) {
            throw std::invalid_argument("hasse edge index out of range");
        }
        lattice.hasse.emplace_back(from, to);
    }
    for (const auto& jmap : doc.at("vertex_maps")) {
        const int from = jmap.at("from").get<int>();
        const int to = jmap.at("to").get<int>();
        const DecoratedNode& src = lattice.nodes.at(from);
        const DecoratedNode& dst = lattice.nodes.at(to);
        std::vector<int> map(src.vertices.size(), -1);
        for (const auto& [id, image] : jmap.at("map").items()) {
            map[src.vertex_index_from_id(id)] =
                dst.vertex_index_from_id(image.get<std::string>());
        }
        if (std::find(map.begin(), map.end(), -1) != map.end()) {
            throw std::invalid_argument("incomplete vertex map in lattice file");
        }
        lattice.vertex_maps.emplace(std::make_pair(from, to), std::move(map));
    }
    return lattice;
}

}  // namespace dessins
