#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "dessins/lattice.hpp"
#include "test_util.hpp"

using namespace dessins;

namespace {

std::vector<BiasedDessin> universe(int max_degree, bool trees_only = false) {
    std::vector<BiasedDessin> out;
    for (const auto& key : enumerate_universe(max_degree, trees_only)) {
        out.push_back(dessin_from_key(key));
    }
    return out;
}

}  // namespace

TEST_CASE("find_morphism: identity, star(4)->star(2), star(2)->star(3)") {
    const BiasedDessin star4 = star_dessin(4);
    const auto self = find_morphism(star4, star4);
    REQUIRE(self.has_value());
    std::vector<int> id(4);
    std::iota(id.begin(), id.end(), 0);
    CHECK(self->map == id);
    CHECK(self->well_formed());

    const auto down = find_morphism(star4, star_dessin(2));
    REQUIRE(down.has_value());
    CHECK(down->map == std::vector<int>{0, 1, 0, 1});
    CHECK(down->well_formed());

    CHECK_FALSE(find_morphism(star_dessin(2), star_dessin(3)).has_value());
}

TEST_CASE("morphism uniqueness against brute force, degree <= 3") {
    const auto nodes = universe(3);
    for (const auto& r : nodes) {
        for (const auto& s : nodes) {
            const auto maps = testutil::all_morphism_maps(r, s);
            REQUIRE(maps.size() <= 1);
            const auto found = find_morphism(r, s);
            CHECK(found.has_value() == (maps.size() == 1));
            if (found) {
                CHECK(found->map == maps[0]);
                CHECK(found->well_formed());
            }
        }
    }
}

TEST_CASE("join: bottom element, stars, idempotence") {
    const BiasedDessin d1 = unit_dessin();
    std::mt19937 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 5, rng);
        CHECK(canonical_key(join(d1, x)) == canonical_key(x));
        CHECK(canonical_key(join(x, d1)) == canonical_key(x));
        CHECK(canonical_key(join(x, x)) == canonical_key(x));
    }
    CHECK(canonical_key(join(star_dessin(2), star_dessin(3))) == canonical_key(star_dessin(6)));
}

TEST_CASE("meet: idempotence and the star family") {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 5, rng);
        CHECK(canonical_key(meet(x, x)) == canonical_key(x));
    }
    CHECK(canonical_key(meet(star_dessin(4), star_dessin(6))) == canonical_key(star_dessin(2)));
    CHECK(canonical_key(meet(star_dessin(2), star_dessin(3))) == canonical_key(unit_dessin()));
}

TEST_CASE("projection morphisms out of the join") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const BiasedDessin r = testutil::random_dessin(1 + rng() % 4, rng);
        const BiasedDessin s = testutil::random_dessin(1 + rng() % 4, rng);
        const BiasedDessin j = join(r, s);
        CHECK(has_morphism(j, r));
        CHECK(has_morphism(j, s));
        CHECK(has_morphism(r, meet(r, s)));
        CHECK(has_morphism(s, meet(r, s)));
    }
}

TEST_CASE("partial order on the degree <= 3 universe") {
    const auto nodes = universe(3);
    const int k = static_cast<int>(nodes.size());
    REQUIRE(k == 17);  // 1 + 3 + 13
    const auto m = morphism_matrix(nodes);
    auto at = [&](int i, int j) { return m[static_cast<size_t>(i) * k + j]; };
    for (int i = 0; i < k; ++i) {
        CHECK(at(i, i));          // reflexive
        CHECK(at(i, 0));          // D1 is the bottom
        for (int j = 0; j < k; ++j) {
            if (i != j) CHECK_FALSE((at(i, j) && at(j, i)));  // antisymmetric (keys differ)
            for (int l = 0; l < k; ++l) {
                if (at(i, j) && at(j, l)) CHECK(at(i, l));  // transitive
            }
        }
    }
}

TEST_CASE("degree laws on random pairs") {
    std::mt19937 rng(24);
    for (int trial = 0; trial < 80; ++trial) {
        const BiasedDessin r = testutil::random_dessin(1 + rng() % 4, rng);
        const BiasedDessin s = testutil::random_dessin(1 + rng() % 4, rng);
        const int dj = join(r, s).degree();
        const int dm = meet(r, s).degree();
        CHECK(dj % std::lcm(r.degree(), s.degree()) == 0);
        CHECK(dj <= r.degree() * s.degree());
        CHECK(std::gcd(r.degree(), s.degree()) % dm == 0);
    }
}

TEST_CASE("commutativity, associativity, absorption on random triples") {
    std::mt19937 rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        const BiasedDessin r = testutil::random_dessin(1 + rng() % 4, rng);
        const BiasedDessin s = testutil::random_dessin(1 + rng() % 4, rng);
        const BiasedDessin t = testutil::random_dessin(1 + rng() % 4, rng);
        CHECK(canonical_key(join(r, s)) == canonical_key(join(s, r)));
        CHECK(canonical_key(meet(r, s)) == canonical_key(meet(s, r)));
        CHECK(canonical_key(join(join(r, s), t)) == canonical_key(join(r, join(s, t))));
        CHECK(canonical_key(meet(meet(r, s), t)) == canonical_key(meet(r, meet(s, t))));
        CHECK(canonical_key(meet(r, join(r, s))) == canonical_key(r));
        CHECK(canonical_key(join(r, meet(r, s))) == canonical_key(r));
    }
}

TEST_CASE("hasse: single node, degree <= 2 universe, transitivity reduction") {
    CHECK(hasse_edges({unit_dessin()}).empty());

    const auto nodes2 = universe(2);
    REQUIRE(nodes2.size() == 4);
    const auto edges2 = hasse_edges(nodes2);
    REQUIRE(edges2.size() == 3);
    for (const auto& [from, to] : edges2) {
        CHECK(to == 0);  // each degree-2 dessin covers D1
        CHECK(from != 0);
    }

    const std::vector<BiasedDessin> chain{star_dessin(2), star_dessin(4), unit_dessin()};
    const auto edges = hasse_edges(chain);
    CHECK(edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 0}});
    // star(4) -> D1 is not a covering pair: star(2) sits between.
}

TEST_CASE("hasse serial and parallel agree") {
    const auto nodes = universe(3);
    CHECK(hasse_edges(nodes, 2) == hasse_edges_serial(nodes));
    CHECK(morphism_matrix(nodes, 2) == morphism_matrix_serial(nodes));
}
