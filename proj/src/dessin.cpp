#include "dessins/dessin.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dessins {

namespace {

std::string csv(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// Raw helpers on bare image arrays; used by the enumeration hot loop.

int reach_count_from_zero(const std::vector<int>& a, const std::vector<int>& b,
                          std::vector<int>& queue, std::vector<char>& seen) {
    const int n = static_cast<int>(a.size());
    queue.clear();
    seen.assign(n, 0);
    queue.push_back(0);
    seen[0] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        const int e = queue[head];
        if (!seen[a[e]]) { seen[a[e]] = 1; queue.push_back(a[e]); }
        if (!seen[b[e]]) { seen[b[e]] = 1; queue.push_back(b[e]); }
    }
    return static_cast<int>(queue.size());
}

int cycle_count(const std::vector<int>& images, std::vector<char>& seen) {
    const int n = static_cast<int>(images.size());
    seen.assign(n, 0);
    int count = 0;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++count;
        for (int j = i; !seen[j]; j = images[j]) seen[j] = 1;
    }
    return count;
}

// One-face and genus-zero test without building Permutation objects.
bool raw_is_tree(const std::vector<int>& a, const std::vector<int>& b,
                 std::vector<int>& ab, std::vector<char>& seen) {
    const int n = static_cast<int>(a.size());
    ab.resize(n);
    for (int i = 0; i < n; ++i) ab[i] = a[b[i]];
    if (cycle_count(ab, seen) != 1) return false;
    return cycle_count(a, seen) + cycle_count(b, seen) == n + 1;
}

void raw_canonical(const std::vector<int>& a, const std::vector<int>& b,
                   int chosen, std::vector<int>& relabel, std::vector<int>& order,
                   CanonicalKey& out) {
    const int n = static_cast<int>(a.size());
    relabel.assign(n, -1);
    order.clear();
    relabel[chosen] = 0;
    order.push_back(chosen);
    for (size_t head = 0; head < order.size(); ++head) {
        const int e = order[head];
        if (relabel[a[e]] < 0) { relabel[a[e]] = static_cast<int>(order.size()); order.push_back(a[e]); }
        if (relabel[b[e]] < 0) { relabel[b[e]] = static_cast<int>(order.size()); order.push_back(b[e]); }
    }
    out.degree = n;
    out.alpha.resize(n);
    out.beta.resize(n);
    for (int e = 0; e < n; ++e) {
        out.alpha[relabel[e]] = relabel[a[e]];
        out.beta[relabel[e]] = relabel[b[e]];
    }
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Lexicographic unranking via the factorial number system.
std::vector<int> unrank_permutation(int n, long long rank) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(n);
    long long f = factorial(n - 1);
    for (int i = n - 1; i >= 0; --i) {
        const long long q = (i > 0) ? rank / f : 0;
        out.push_back(pool[static_cast<size_t>(q)]);
        pool.erase(pool.begin() + static_cast<long>(q));
        if (i > 0) {
            rank %= f;
            f /= i;
        }
    }
    return out;
}

// Scans all beta in S_n against a fixed alpha, inserting canonical keys.
void scan_betas(const std::vector<int>& alpha, bool trees_only,
                std::set<CanonicalKey>& sink) {
    const int n = static_cast<int>(alpha.size());
    std::vector<int> beta(n);
    std::iota(beta.begin(), beta.end(), 0);
    std::vector<int> queue, ab, relabel, order;
    std::vector<char> seen;
    CanonicalKey key;
    do {
        if (reach_count_from_zero(alpha, beta, queue, seen) != n) continue;
        if (trees_only && !raw_is_tree(alpha, beta, ab, seen)) continue;
        raw_canonical(alpha, beta, 0, relabel, order, key);
        sink.insert(key);
    } while (std::next_permutation(beta.begin(), beta.end()));
}

void check_enumeration_degree(int degree) {
    if (degree < 1 || degree > kMaxEnumerationDegree) {
        throw DegreeLimitError("degree must be between 1 and " +
                               std::to_string(kMaxEnumerationDegree));
    }
}

}  // namespace

std::string PartitionTriple::str() const {
    return csv(alpha) + "/" + csv(beta) + "/" + csv(gamma);
}

std::string CanonicalKey::line() const {
    return std::to_string(degree) + ":" + csv(alpha) + ":" + csv(beta) + ":0";
}

BiasedDessin::BiasedDessin(PermPair pair, int chosen)
    : pair_(std::move(pair)), chosen_(chosen) {
    if (pair_.degree() == 0) throw EmptyEdgeSetError("dessins have at least one edge");
    if (chosen_ < 0 || chosen_ >= pair_.degree()) {
        throw ChosenOutOfRangeError("chosen edge " + std::to_string(chosen_) +
                                    " out of range for degree " +
                                    std::to_string(pair_.degree()));
    }
    if (!is_irreducible(pair_)) {
        throw NotIrreducibleError("pair is not irreducible (graph is disconnected)");
    }
}

CanonicalResult canonicalize(const BiasedDessin& dessin) {
    std::vector<int> relabel, order;
    CanonicalKey key;
    raw_canonical(dessin.alpha().images(), dessin.beta().images(), dessin.chosen(),
                  relabel, order, key);
    BiasedDessin canon(PermPair(Permutation(key.alpha), Permutation(key.beta)), 0);
    return CanonicalResult{std::move(canon), std::move(key), std::move(relabel)};
}

CanonicalKey canonical_key(const BiasedDessin& dessin) {
    std::vector<int> relabel, order;
    CanonicalKey key;
    raw_canonical(dessin.alpha().images(), dessin.beta().images(), dessin.chosen(),
                  relabel, order, key);
    return key;
}

BiasedDessin dessin_from_key(const CanonicalKey& key) {
    return BiasedDessin(PermPair(Permutation(key.alpha), Permutation(key.beta)), 0);
}

bool is_biased_tree(const BiasedDessin& dessin) {
    std::vector<int> ab;
    std::vector<char> seen;
    return raw_is_tree(dessin.alpha().images(), dessin.beta().images(), ab, seen);
}

PartitionTriple partition_triple(const BiasedDessin& dessin) {
    const Permutation gamma = dessin.alpha().compose(dessin.beta()).inverse();
    return PartitionTriple{dessin.alpha().orbit_sizes_desc(),
                           dessin.beta().orbit_sizes_desc(),
                           gamma.orbit_sizes_desc()};
}

int genus(const BiasedDessin& dessin) {
    const int n = dessin.degree();
    const int va = dessin.alpha().orbit_count();
    const int vb = dessin.beta().orbit_count();
    const int faces = dessin.alpha().compose(dessin.beta()).orbit_count();
    const int euler = va + vb - n + faces;
    if ((2 - euler) % 2 != 0 || euler > 2) {
        throw std::logic_error("Euler characteristic out of range for a connected dessin");
    }
    return (2 - euler) / 2;
}

CanonicalKey unbiased_canonical(const BiasedDessin& dessin) {
    const int n = dessin.degree();
    std::vector<int> relabel, order;
    CanonicalKey best, key;
    for (int e = 0; e < n; ++e) {
        raw_canonical(dessin.alpha().images(), dessin.beta().images(), e,
                      relabel, order, key);
        if (e == 0 || key < best) best = key;
    }
    return best;
}

std::vector<CanonicalKey> enumerate_biased(int degree, bool trees_only, int workers) {
    check_enumeration_degree(degree);
#ifndef _OPENMP
    (void)workers;
    return enumerate_biased_serial(degree, trees_only);
#else
    const long long nf = factorial(degree);
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    std::set<CanonicalKey> merged;
#pragma omp parallel num_threads(threads)
    {
        std::set<CanonicalKey> local;
#pragma omp for schedule(dynamic, 8)
        for (long long rank = 0; rank < nf; ++rank) {
            scan_betas(unrank_permutation(degree, rank), trees_only, local);
        }
#pragma omp critical
        merged.merge(local);
    }
    return {merged.begin(), merged.end()};
#endif
}

std::vector<CanonicalKey> enumerate_biased_serial(int degree, bool trees_only) {
    check_enumeration_degree(degree);
    std::set<CanonicalKey> keys;
    std::vector<int> alpha(degree);
    std::iota(alpha.begin(), alpha.end(), 0);
    do {
        scan_betas(alpha, trees_only, keys);
    } while (std::next_permutation(alpha.begin(), alpha.end()));
    return {keys.begin(), keys.end()};
}

std::vector<CanonicalKey> enumerate_universe(int max_degree, bool trees_only,
                                             int workers) {
    check_enumeration_degree(max_degree);
    std::vector<CanonicalKey> all;
    for (int n = 1; n <= max_degree; ++n) {
        auto part = enumerate_biased(n, trees_only, workers);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;  // ordered by (degree, key) since each part is sorted
}

std::string dessin_line(const BiasedDessin& dessin) {
    return std::to_string(dessin.degree()) + ":" + dessin.alpha().image_csv() +
           ":" + dessin.beta().image_csv() + ":" + std::to_string(dessin.chosen());
}

BiasedDessin parse_dessin_line(const std::string& line) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) {
        throw std::invalid_argument("expected n:alphaImages:betaImages:chosen, got: " + line);
    }
    int n = 0, chosen = 0;
    try {
        n = std::stoi(parts[0]);
        chosen = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad degree or chosen edge in: " + line);
    }
    Permutation alpha = Permutation::from_image_csv(parts[1]);
    Permutation beta = Permutation::from_image_csv(parts[2]);
    if (alpha.size() != n || beta.size() != n) {
        throw std::invalid_argument("image arrays do not match the declared degree in: " + line);
    }
    return BiasedDessin(PermPair(std::move(alpha), std::move(beta)), chosen);
}

CanonicalKey key_from_line(const std::string& line) {
    BiasedDessin d = parse_dessin_line(line);
    CanonicalKey key = canonical_key(d);
    if (d.chosen() != 0 || key.alpha != d.alpha().images() || key.beta != d.beta().images()) {
        throw std::invalid_argument("line is not in canonical form: " + line);
    }
    return key;
}

BiasedDessin star_dessin(int n) {
    if (n < 1) throw std::invalid_argument("star degree must be >= 1");
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) a[i] = (i + 1) % n;
    return BiasedDessin(PermPair(Permutation(std::move(a)), Permutation::identity(n)), 0);
}

BiasedDessin unit_dessin() { return star_dessin(1); }

}  // namespace dessins
