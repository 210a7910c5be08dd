#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "dessins/invariants.hpp"
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

TEST_CASE("formal sums: module axioms, no stored zeros") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        FormalSum a, b;
        for (int i = 0; i < 12; ++i) {
            a.add(Value(static_cast<long long>(rng() % 6)), static_cast<long long>(rng() % 7) - 3);
            b.add(Value(static_cast<long long>(rng() % 6)), static_cast<long long>(rng() % 7) - 3);
        }
        CHECK(a + b == b + a);
        CHECK((a + b).scaled(3) == a.scaled(3) + b.scaled(3));
        CHECK(a.scaled(0) == FormalSum{});
        CHECK(a + a.scaled(-1) == FormalSum{});
        for (const auto& [v, c] : (a + b).terms()) CHECK(c != 0);
    }
    FormalSum s;
    s.add(Value(5), 2);
    s.add(Value(5), -2);
    CHECK(s.empty());
}

TEST_CASE("value ordering and rendering") {
    CHECK(Value(2) < Value(3));
    CHECK(Value(2).str() == "2");
    CHECK(Value(partition_triple(star_dessin(3))).str() == "3/1,1,1/3");
    CHECK(Value(canonical_key(star_dessin(3))).str() == "3:1,2,0:0,1,2:0");
    FormalSum s;
    s.add(Value(6), 2);
    s.add(Value(2), 1);
    CHECK(s.lines() == std::vector<std::string>{"1*2", "2*6"});
    CHECK(Value::sum(s).str() == "{1*2 + 2*6}");
}

TEST_CASE("tower invariant: worked examples") {
    const InvariantFn deg = degree_invariant();

    std::mt19937 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 5, rng);
        CHECK(tower_invariant(deg, {unit_dessin()}, x) ==
              FormalSum::singleton(Value(x.degree())));
    }

    const FormalSum t = tower_invariant(deg, {star_dessin(2), star_dessin(3)}, star_dessin(2));
    FormalSum expected;
    expected.add(Value(2), 1);
    expected.add(Value(6), 1);
    CHECK(t == expected);

    CHECK(tower_invariant(triple_invariant(), {unit_dessin()}, star_dessin(3)) ==
          FormalSum::singleton(Value(partition_triple(star_dessin(3)))));
}

TEST_CASE("tower invariant is order- and relabelling-independent") {
    std::mt19937 rng(33);
    const InvariantFn deg = degree_invariant();
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BiasedDessin> s;
        for (int i = 0; i < 4; ++i) s.push_back(testutil::random_dessin(1 + rng() % 4, rng));
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 4, rng);
        const FormalSum reference = tower_invariant(deg, s, x);

        std::shuffle(s.begin(), s.end(), rng);
        CHECK(tower_invariant(deg, s, x) == reference);

        for (auto& y : s) y = testutil::random_relabel(y, rng);
        CHECK(tower_invariant(deg, s, testutil::random_relabel(x, rng)) == reference);
    }
}

TEST_CASE("the three named invariants are relabelling-invariant") {
    std::mt19937 rng(34);
    for (const InvariantFn& h : {degree_invariant(), triple_invariant(), key_invariant()}) {
        for (int trial = 0; trial < 60; ++trial) {
            const BiasedDessin x = testutil::random_dessin(1 + rng() % 5, rng);
            CHECK(h.eval(x) == h.eval(testutil::random_relabel(x, rng)));
        }
    }
}

TEST_CASE("level sets") {
    const auto pool2 = universe(2);
    const auto degree_two = level_set(degree_invariant(), star_dessin(2), pool2);
    CHECK(degree_two.size() == 3);

    for (const auto& r : pool2) {
        const auto only = level_set(key_invariant(), r, pool2);
        REQUIRE(only.size() == 1);
        CHECK(canonical_key(only[0]) == canonical_key(r));
    }

    const auto trees3 = universe(3, true);
    const auto stars = level_set(triple_invariant(), star_dessin(3), trees3);
    REQUIRE(stars.size() == 1);
    CHECK(canonical_key(stars[0]) == canonical_key(star_dessin(3)));
    for (const auto& y : stars) {
        CHECK(partition_triple(y).str() == "3/1,1,1/3");
    }
}

TEST_CASE("unbiased descent") {
    const InvariantFn deg = degree_invariant();
    for (int n = 1; n <= 6; ++n) {
        const FormalSum s = unbiased_descent(deg, unbiased_canonical(star_dessin(n)));
        CHECK(s == FormalSum::singleton(Value(n)));  // one bias class
        CHECK(s.total_mass() == 1);
    }

    const BiasedDessin path3(PermPair{Permutation::from_cycle(3, {1, 2}),
                                      Permutation::from_cycle(3, {0, 1})}, 0);
    const CanonicalKey upath = unbiased_canonical(path3);
    CHECK(unbiased_descent(key_invariant(), upath).term_count() == 3);
    CHECK(unbiased_descent(deg, upath) == FormalSum::singleton(Value(3), 3));
    CHECK(bias_class_count(upath) == 3);

    CHECK(unbiased_descent(deg, unbiased_canonical(unit_dessin())) ==
          FormalSum::singleton(Value(1)));

    // Total mass counts the bias classes and divides the degree.
    std::mt19937 rng(35);
    for (int trial = 0; trial < 40; ++trial) {
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 5, rng);
        const CanonicalKey u = unbiased_canonical(x);
        const long long mass = unbiased_descent(deg, u).total_mass();
        CHECK(mass == bias_class_count(u));
        CHECK(x.degree() % mass == 0);
    }

    CHECK_THROWS_AS(unbiased_descent(deg, canonical_key(BiasedDessin(path3.pair(), 2))),
                    std::invalid_argument);
}

TEST_CASE("formal sums of formal sums: one nesting level") {
    const InvariantFn inner = tower_as_invariant(degree_invariant(), {unit_dessin()},
                                                 "degree_tower");
    // inner(X) = {1*[deg X]}; it is itself relabelling-invariant.
    std::mt19937 rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        const BiasedDessin x = testutil::random_dessin(1 + rng() % 4, rng);
        CHECK(inner.eval(x) == inner.eval(testutil::random_relabel(x, rng)));
    }

    const FormalSum nested = tower_invariant(inner, {star_dessin(2), star_dessin(3)},
                                             star_dessin(2));
    // join degrees are 2 and 6, so the nested sum has two singleton-sum terms.
    CHECK(nested.term_count() == 2);
    FormalSum expected;
    expected.add(Value::sum(FormalSum::singleton(Value(2))), 1);
    expected.add(Value::sum(FormalSum::singleton(Value(6))), 1);
    CHECK(nested == expected);
}
