#include "dessins/lattice.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dessins {

namespace {

// Union-find with path halving; the worklist of merged element pairs drives
// the folding in meet().
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // Returns true if two classes were actually merged.
    bool unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx == ry) return false;
        parent[ry] = rx;
        return true;
    }
};

}  // namespace

bool Morphism::well_formed() const {
    const int nR = source.degree();
    const int nS = target.degree();
    if (static_cast<int>(map.size()) != nR) return false;
    if (nS == 0 || nR % nS != 0) return false;
    if (map[source.chosen()] != target.chosen()) return false;
    std::vector<int> fiber(nS, 0);
    for (int e = 0; e < nR; ++e) {
        if (map[e] < 0 || map[e] >= nS) return false;
        if (map[source.alpha()(e)] != target.alpha()(map[e])) return false;
        if (map[source.beta()(e)] != target.beta()(map[e])) return false;
        ++fiber[map[e]];
    }
    return std::all_of(fiber.begin(), fiber.end(),
                       [&](int c) { return c == nR / nS; });
}

std::optional<Morphism> find_morphism(const BiasedDessin& R, const BiasedDessin& S) {
    const int nR = R.degree();
    std::vector<int> map(nR, -1);
    std::vector<int> queue;
    queue.reserve(nR);
    map[R.chosen()] = S.chosen();
    queue.push_back(R.chosen());
    for (size_t head = 0; head < queue.size(); ++head) {
        const int e = queue[head];
        const int m = map[e];
        const int ta = R.alpha()(e), ia = S.alpha()(m);
        if (map[ta] < 0) {
            map[ta] = ia;
            queue.push_back(ta);
        } else if (map[ta] != ia) {
            return std::nullopt;
        }
        const int tb = R.beta()(e), ib = S.beta()(m);
        if (map[tb] < 0) {
            map[tb] = ib;
            queue.push_back(tb);
        } else if (map[tb] != ib) {
            return std::nullopt;
        }
    }
    // R irreducible: propagation reaches every edge.
    return Morphism{R, S, std::move(map)};
}

bool has_morphism(const BiasedDessin& R, const BiasedDessin& S) {
    const int nR = R.degree();
    std::vector<int> map(nR, -1);
    std::vector<int> queue;
    queue.reserve(nR);
    map[R.chosen()] = S.chosen();
    queue.push_back(R.chosen());
    for (size_t head = 0; head < queue.size(); ++head) {
        const int e = queue[head];
        const int m = map[e];
        const int ta = R.alpha()(e), ia = S.alpha()(m);
        if (map[ta] < 0) {
            map[ta] = ia;
            queue.push_back(ta);
        } else if (map[ta] != ia) {
            return false;
        }
        const int tb = R.beta()(e), ib = S.beta()(m);
        if (map[tb] < 0) {
            map[tb] = ib;
            queue.push_back(tb);
        } else if (map[tb] != ib) {
            return false;
        }
    }
    return true;
}

BiasedDessin join(const BiasedDessin& R, const BiasedDessin& S) {
    const int nS = S.degree();
    const auto& aR = R.alpha().images();
    const auto& bR = R.beta().images();
    const auto& aS = S.alpha().images();
    const auto& bS = S.beta().images();
    const int total = R.degree() * nS;

    // Orbit of (e_R, e_S) in the product, discovered breadth-first.
    std::vector<int> local_of(total, -1);
    std::vector<int> order;
    const int start = R.chosen() * nS + S.chosen();
    local_of[start] = 0;
    order.push_back(start);
    for (size_t head = 0; head < order.size(); ++head) {
        const int x = order[head];
        const int e1 = x / nS, e2 = x % nS;
        for (int img : {aR[e1] * nS + aS[e2], bR[e1] * nS + bS[e2]}) {
            if (local_of[img] < 0) {
                local_of[img] = static_cast<int>(order.size());
                order.push_back(img);
            }
        }
    }

    const int k = static_cast<int>(order.size());
    std::vector<int> a(k), b(k);
    for (int i = 0; i < k; ++i) {
        const int e1 = order[i] / nS, e2 = order[i] % nS;
        a[i] = local_of[aR[e1] * nS + aS[e2]];
        b[i] = local_of[bR[e1] * nS + bS[e2]];
    }
    BiasedDessin result(PermPair(Permutation(std::move(a)), Permutation(std::move(b))), 0);
    return canonicalize(result).dessin;
}

BiasedDessin meet(const BiasedDessin& R, const BiasedDessin& S) {
    const int nR = R.degree();
    const int n = nR + S.degree();

    // alpha/beta on the disjoint union of the edge sets.
    std::vector<int> a(n), b(n);
    for (int e = 0; e < nR; ++e) {
        a[e] = R.alpha()(e);
        b[e] = R.beta()(e);
    }
    for (int e = nR; e < n; ++e) {
        a[e] = nR + S.alpha()(e - nR);
        b[e] = nR + S.beta()(e - nR);
    }

    // Fold: merging u ~ v forces alpha(u) ~ alpha(v) and beta(u) ~ beta(v).
    Dsu dsu(n);
    std::vector<std::pair<int, int>> pending;
    auto unite = [&](int x, int y) {
        if (dsu.unite(x, y)) pending.emplace_back(x, y);
    };
    unite(R.chosen(), nR + S.chosen());
    while (!pending.empty()) {
        auto [u, v] = pending.back();
        pending.pop_back();
        unite(a[u], a[v]);
        unite(b[u], b[v]);
    }

    // Quotient: classes indexed by their minimal element.
    std::vector<int> class_of(n, -1);
    std::vector<int> rep;
    for (int e = 0; e < n; ++e) {
        const int r = dsu.find(e);
        if (class_of[r] < 0) {
            class_of[r] = static_cast<int>(rep.size());
            rep.push_back(e);
        }
    }
    const int k = static_cast<int>(rep.size());
    std::vector<int> qa(k), qb(k);
    for (int c = 0; c < k; ++c) {
        qa[c] = class_of[dsu.find(a[rep[c]])];
        qb[c] = class_of[dsu.find(b[rep[c]])];
    }
    BiasedDessin result(PermPair(Permutation(std::move(qa)), Permutation(std::move(qb))),
                        class_of[dsu.find(R.chosen())]);
    return canonicalize(result).dessin;
}

std::vector<char> morphism_matrix(const std::vector<BiasedDessin>& nodes, int workers) {
#ifndef _OPENMP
    (void)workers;
    return morphism_matrix_serial(nodes);
#else
    const int k = static_cast<int>(nodes.size());
    std::vector<char> matrix(static_cast<size_t>(k) * k, 0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers > 0 ? workers : omp_get_max_threads())
    for (int flat = 0; flat < k * k; ++flat) {
        const int i = flat / k, j = flat % k;
        matrix[flat] = has_morphism(nodes[i], nodes[j]) ? 1 : 0;
    }
    return matrix;
#endif
}

std::vector<char> morphism_matrix_serial(const std::vector<BiasedDessin>& nodes) {
    const int k = static_cast<int>(nodes.size());
    std::vector<char> matrix(static_cast<size_t>(k) * k, 0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            matrix[static_cast<size_t>(i) * k + j] = has_morphism(nodes[i], nodes[j]) ? 1 : 0;
        }
    }
    return matrix;
}

namespace {

std::vector<std::pair<int, int>> covering_pairs(const std::vector<char>& matrix, int k) {
    std::vector<std::pair<int, int>> edges;
    auto at = [&](int i, int j) { return matrix[static_cast<size_t>(i) * k + j]; };
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i == j || !at(i, j)) continue;
            bool covered = true;
            for (int t = 0; t < k; ++t) {
                if (t != i && t != j && at(i, t) && at(t, j)) {
                    covered = false;
                    break;
                }
            }
            if (covered) edges.emplace_back(i, j);
        }
    }
    return edges;  // sorted by construction
}

}  // namespace

std::vector<std::pair<int, int>> hasse_edges(const std::vector<BiasedDessin>& nodes,
                                             int workers) {
    return covering_pairs(morphism_matrix(nodes, workers),
                          static_cast<int>(nodes.size()));
}

std::vector<std::pair<int, int>> hasse_edges_serial(const std::vector<BiasedDessin>& nodes) {
    return covering_pairs(morphism_matrix_serial(nodes),
                          static_cast<int>(nodes.size()));
}

}  // namespace dessins
