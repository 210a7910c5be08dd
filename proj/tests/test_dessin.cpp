#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "dessins/dessin.hpp"
#include "test_util.hpp"

using namespace dessins;

namespace {

BiasedDessin genus_one_witness() {
    return BiasedDessin(PermPair{Permutation::from_cycle(3, {0, 1, 2}),
                                 Permutation::from_cycle(3, {0, 1, 2})}, 1);
}

}  // namespace

TEST_CASE("construction and validation") {
    CHECK_NOTHROW(unit_dessin());
    CHECK_THROWS_AS(BiasedDessin(PermPair{Permutation::identity(2), Permutation::identity(2)}, 0),
                    NotIrreducibleError);
    CHECK_THROWS_AS(BiasedDessin(PermPair{Permutation::identity(0), Permutation::identity(0)}, 0),
                    EmptyEdgeSetError);
    CHECK_THROWS_AS(BiasedDessin(PermPair{Permutation::from_cycle(2, {0, 1}),
                                          Permutation::identity(2)}, 2),
                    ChosenOutOfRangeError);
    CHECK_NOTHROW(genus_one_witness());
}

TEST_CASE("canonicalize: examples and idempotence") {
    const auto d1 = canonicalize(unit_dessin());
    CHECK(d1.key.line() == "1:0:0:0");

    // (0 1) with the chosen edge 1: BFS from edge 1 relabels 1 -> 0, 0 -> 1.
    const BiasedDessin d(PermPair{Permutation::from_cycle(2, {0, 1}), Permutation::identity(2)}, 1);
    const auto canon = canonicalize(d);
    CHECK(canon.key.alpha == std::vector<int>{1, 0});
    CHECK(canon.key.beta == std::vector<int>{0, 1});
    CHECK(canon.dessin.chosen() == 0);

    std::mt19937 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const BiasedDessin x = testutil::random_dessin(n, rng);
        const auto once = canonicalize(x);
        const auto twice = canonicalize(once.dessin);
        CHECK(once.key == twice.key);
        CHECK(once.dessin == twice.dessin);
    }
}

TEST_CASE("canonical keys are relabelling-invariant") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const BiasedDessin x = testutil::random_dessin(n, rng);
        const BiasedDessin y = testutil::random_relabel(x, rng);
        CHECK(canonical_key(x) == canonical_key(y));
    }
}

TEST_CASE("canonical key is a complete invariant on the exhaustive degree <= 4 universe") {
    for (int n = 1; n <= 4; ++n) {
        // Group every labeled biased dessin by key.
        std::map<CanonicalKey, std::vector<BiasedDessin>> groups;
        for (const PermPair& pair : testutil::all_irreducible_pairs(n)) {
            for (int chosen = 0; chosen < n; ++chosen) {
                BiasedDessin d(pair, chosen);
                groups[canonical_key(d)].push_back(std::move(d));
            }
        }
        // Same key -> an explicit relabelling exists (to the group leader).
        for (const auto& [key, members] : groups) {
            for (size_t i = 1; i < members.size(); ++i) {
                REQUIRE(testutil::relabelling_exists(members[0], members[i]));
            }
        }
        // Different keys -> no relabelling between the leaders.
        std::vector<const BiasedDessin*> leaders;
        for (const auto& [key, members] : groups) leaders.push_back(&members[0]);
        for (size_t i = 0; i < leaders.size(); ++i) {
            for (size_t j = i + 1; j < leaders.size(); ++j) {
                REQUIRE_FALSE(testutil::relabelling_exists(*leaders[i], *leaders[j]));
            }
        }
    }
}

TEST_CASE("tree recognition") {
    for (int n = 1; n <= 6; ++n) CHECK(is_biased_tree(star_dessin(n)));
    CHECK_FALSE(is_biased_tree(genus_one_witness()));  // one face but genus 1
    // Two-edge path with the white vertex in the middle.
    const BiasedDessin path(PermPair{Permutation::identity(2), Permutation::from_cycle(2, {0, 1})}, 0);
    CHECK(is_biased_tree(path));
    // Doubled edge: genus 0 but two faces.
    const BiasedDessin doubled(PermPair{Permutation::from_cycle(2, {0, 1}),
                                        Permutation::from_cycle(2, {0, 1})}, 0);
    CHECK_FALSE(is_biased_tree(doubled));
}

TEST_CASE("tree invariants hold together") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const BiasedDessin d = testutil::random_dessin(n, rng);
        const bool tree = is_biased_tree(d);
        const int vertices = d.alpha().orbit_count() + d.beta().orbit_count();
        const int faces = testutil::face_count_by_tracing(d);
        if (tree) {
            CHECK(vertices == n + 1);
            CHECK(genus(d) == 0);
            CHECK(faces == 1);
        } else {
            CHECK((vertices != n + 1 || faces != 1));
        }
    }
}

TEST_CASE("partition triples") {
    CHECK(partition_triple(unit_dessin()).str() == "1/1/1");
    CHECK(partition_triple(star_dessin(3)).str() == "3/1,1,1/3");
    const BiasedDessin path(PermPair{Permutation::identity(2), Permutation::from_cycle(2, {0, 1})}, 0);
    CHECK(partition_triple(path).str() == "1,1/2/2");

    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const BiasedDessin d = testutil::random_dessin(n, rng);
        const PartitionTriple t = partition_triple(d);
        for (const auto* part : {&t.alpha, &t.beta, &t.gamma}) {
            int sum = 0;
            for (int p : *part) {
                CHECK(p >= 1);
                sum += p;
            }
            CHECK(sum == n);
        }
    }
}

TEST_CASE("genus: examples and the face-tracing oracle") {
    CHECK(genus(star_dessin(4)) == 0);
    CHECK(genus(genus_one_witness()) == 1);

    const BiasedDessin g1(PermPair{Permutation::from_cycle(4, {0, 1, 2, 3}),
                                   Permutation({2, 3, 0, 1})}, 0);
    const int faces = testutil::face_count_by_tracing(g1);
    CHECK(2 - 2 * genus(g1) ==
          g1.alpha().orbit_count() + g1.beta().orbit_count() - 4 + faces);

    std::mt19937 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 7);
        const BiasedDessin d = testutil::random_dessin(n, rng);
        const int g = genus(d);
        CHECK(g >= 0);
        CHECK(testutil::face_count_by_tracing(d) ==
              2 - 2 * g - d.alpha().orbit_count() - d.beta().orbit_count() + n);
    }
}

TEST_CASE("enumeration counts match the independent oracles") {
    const auto hall = testutil::hall_counts(4);
    CHECK(hall == std::vector<long long>{0, 1, 3, 13, 71});
    for (int n = 1; n <= 4; ++n) {
        const auto all = enumerate_biased(n, false);
        CHECK(static_cast<long long>(all.size()) == hall[n]);
        const auto trees = enumerate_biased(n, true);
        CHECK(static_cast<long long>(trees.size()) == testutil::catalan(n));
    }
    CHECK(enumerate_biased(5, true).size() == 42);
    CHECK(testutil::catalan(5) == 42);
    CHECK(testutil::catalan(6) == 132);
}

TEST_CASE("enumeration: ordering, dedup, serial/parallel agreement, limits") {
    for (int n = 1; n <= 4; ++n) {
        const auto parallel = enumerate_biased(n, false, 2);
        const auto serial = enumerate_biased_serial(n, false);
        CHECK(parallel == serial);
        for (size_t i = 1; i < parallel.size(); ++i) {
            CHECK(parallel[i - 1] < parallel[i]);  // strictly sorted, no duplicates
        }
        for (const auto& key : parallel) {
            CHECK(key.degree == n);
            CHECK_NOTHROW(dessin_from_key(key));
        }
    }
    CHECK_THROWS_AS(enumerate_biased(0, false), DegreeLimitError);
    CHECK_THROWS_AS(enumerate_biased(kMaxEnumerationDegree + 1, false), DegreeLimitError);
}

TEST_CASE("degree-2 universe in full") {
    const auto all = enumerate_biased(2, false);
    REQUIRE(all.size() == 3);
    CHECK(all[0].line() == "2:0,1:1,0:0");
    CHECK(all[1].line() == "2:1,0:0,1:0");
    CHECK(all[2].line() == "2:1,0:1,0:0");
    CHECK(enumerate_biased(2, true).size() == 2);
}

TEST_CASE("unbiased canonical") {
    const BiasedDessin star3 = star_dessin(3);
    const CanonicalKey expected = unbiased_canonical(star3);
    for (int e = 0; e < 3; ++e) {
        CHECK(unbiased_canonical(BiasedDessin(star3.pair(), e)) == expected);
        CHECK(canonical_key(BiasedDessin(star3.pair(), e)) == canonical_key(star3));
    }

    // Three-edge path: three distinct biased classes, a single unbiased one.
    const BiasedDessin path3(PermPair{Permutation::from_cycle(3, {1, 2}),
                                      Permutation::from_cycle(3, {0, 1})}, 0);
    std::set<CanonicalKey> biased;
    std::set<CanonicalKey> unbiased;
    for (int e = 0; e < 3; ++e) {
        const BiasedDessin rebias(path3.pair(), e);
        biased.insert(canonical_key(rebias));
        unbiased.insert(unbiased_canonical(rebias));
    }
    CHECK(biased.size() == 3);
    CHECK(unbiased.size() == 1);

    CHECK(unbiased_canonical(unit_dessin()) == canonical_key(unit_dessin()));
}

TEST_CASE("line format round trip") {
    CHECK(dessin_line(star_dessin(3)) == "3:1,2,0:0,1,2:0");
    const BiasedDessin parsed = parse_dessin_line("3:1,2,0:0,1,2:0");
    CHECK(parsed == star_dessin(3));
    CHECK_THROWS(parse_dessin_line("3:1,2,0:0,1,2"));
    CHECK_THROWS(parse_dessin_line("2:0,1:0,1:0"));   // reducible
    CHECK_THROWS(parse_dessin_line("3:1,2,0:0,1:0")); // length mismatch

    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const BiasedDessin d = testutil::random_dessin(1 + rng() % 6, rng);
        CHECK(parse_dessin_line(dessin_line(d)) == d);
    }
}
