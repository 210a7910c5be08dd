#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dessins/perm.hpp"
#include "test_util.hpp"

using namespace dessins;

TEST_CASE("orbits: identity, full cycle, transposition") {
    CHECK(Permutation::identity(3).orbits() ==
          std::vector<std::vector<int>>{{0}, {1}, {2}});
    CHECK(Permutation::from_cycle(3, {0, 1, 2}).orbits() ==
          std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK(Permutation::from_cycle(3, {0, 1}).orbits() ==
          std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("permutation validation") {
    CHECK_THROWS_AS(Permutation({0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({-1, 0}), std::invalid_argument);
}

TEST_CASE("group orbit") {
    PermPair p{Permutation::from_cycle(2, {0, 1}), Permutation::identity(2)};
    CHECK(group_orbit(p, 0) == std::vector<int>{0, 1});

    PermPair q{Permutation::identity(3), Permutation::identity(3)};
    CHECK(group_orbit(q, 1) == std::vector<int>{1});

    PermPair r{Permutation::from_cycle(3, {0, 1}), Permutation::from_cycle(3, {1, 2})};
    CHECK(group_orbit(r, 0) == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(group_orbit(q, 3), std::out_of_range);
    CHECK_THROWS_AS(group_orbit(q, -1), std::out_of_range);
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible(PermPair{Permutation::identity(0), Permutation::identity(0)}));
    CHECK_FALSE(is_irreducible(PermPair{Permutation::identity(2), Permutation::identity(2)}));
    CHECK(is_irreducible(PermPair{Permutation::from_cycle(3, {0, 1}),
                                  Permutation::from_cycle(3, {1, 2})}));
}

TEST_CASE("product: one-edge, star(2) x star(3), star(2) x star(2)") {
    PermPair d1{Permutation::identity(1), Permutation::identity(1)};
    PermPair p11 = pair_product(d1, d1);
    CHECK(p11.degree() == 1);
    CHECK(p11.alpha == Permutation::identity(1));

    PermPair star2{Permutation::from_cycle(2, {0, 1}), Permutation::identity(2)};
    PermPair star3{Permutation::from_cycle(3, {0, 1, 2}), Permutation::identity(3)};
    PermPair p23 = pair_product(star2, star3);
    CHECK(p23.degree() == 6);
    // (i, j) -> (i+1 mod 2, j+1 mod 3) on indices i*3 + j.
    CHECK(p23.alpha.images() == std::vector<int>{4, 5, 3, 1, 2, 0});
    CHECK(p23.beta == Permutation::identity(6));
    CHECK(p23.alpha.orbit_count() == 1);  // a single 6-cycle
    CHECK(is_irreducible(p23));

    PermPair p22 = pair_product(star2, star2);
    CHECK(p22.alpha.images() == std::vector<int>{3, 2, 1, 0});
    CHECK(p22.alpha.orbits() == std::vector<std::vector<int>>{{0, 3}, {1, 2}});
    CHECK_FALSE(is_irreducible(p22));
}

TEST_CASE("composition and inversion laws on random permutations") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const Permutation p = testutil::random_permutation(n, rng);
        const Permutation q = testutil::random_permutation(n, rng);
        CHECK(p.compose(q).inverse() == q.inverse().compose(p.inverse()));
        CHECK(p.compose(p.inverse()) == Permutation::identity(n));

        int total = 0;
        for (const auto& block : p.orbits()) total += static_cast<int>(block.size());
        CHECK(total == n);
    }
}

TEST_CASE("group orbit is independent of traversal order") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        PermPair pair{testutil::random_permutation(n, rng),
                      testutil::random_permutation(n, rng)};
        const int seed = static_cast<int>(rng() % n);
        // Shuffled-worklist closure, checked against the library BFS.
        std::vector<int> stack{seed};
        std::vector<char> seen(n, 0);
        seen[seed] = 1;
        while (!stack.empty()) {
            std::shuffle(stack.begin(), stack.end(), rng);
            const int e = stack.back();
            stack.pop_back();
            for (int img : {pair.alpha(e), pair.beta(e)}) {
                if (!seen[img]) {
                    seen[img] = 1;
                    stack.push_back(img);
                }
            }
        }
        std::vector<int> closure;
        for (int e = 0; e < n; ++e) {
            if (seen[e]) closure.push_back(e);
        }
        CHECK(closure == group_orbit(pair, seed));
    }
}

TEST_CASE("product irreducible only if both factors are; diagonal obstruction") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n1 = 1 + static_cast<int>(rng() % 4);
        const int n2 = 1 + static_cast<int>(rng() % 4);
        PermPair p1{testutil::random_permutation(n1, rng), testutil::random_permutation(n1, rng)};
        PermPair p2{testutil::random_permutation(n2, rng), testutil::random_permutation(n2, rng)};
        if (is_irreducible(pair_product(p1, p2))) {
            CHECK(is_irreducible(p1));
            CHECK(is_irreducible(p2));
        }
    }
    // P x P splits off the diagonal whenever n >= 2.
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        PermPair p{testutil::random_permutation(n, rng), testutil::random_permutation(n, rng)};
        const PermPair sq = pair_product(p, p);
        std::vector<char> claimed(sq.degree(), 0);
        int orbit_count = 0;
        for (int e = 0; e < sq.degree(); ++e) {
            if (claimed[e]) continue;
            ++orbit_count;
            for (int x : group_orbit(sq, e)) claimed[x] = 1;
        }
        CHECK(orbit_count >= 2);
    }
}

TEST_CASE("rendering: cycle notation and image csv") {
    const Permutation p = Permutation::from_cycle(4, {0, 1, 2});
    CHECK(p.cycle_string() == "(0 1 2)(3)");
    CHECK(p.image_csv() == "1,2,0,3");
    CHECK(Permutation::from_image_csv("1,2,0,3") == p);
    CHECK(Permutation::identity(0).cycle_string() == "()");

    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Permutation q = testutil::random_permutation(1 + rng() % 9, rng);
        CHECK(Permutation::from_image_csv(q.image_csv()) == q);
    }
}
