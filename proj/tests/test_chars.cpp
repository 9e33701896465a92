#include "doctest.h"
#include "dforge/dirichlet.hpp"
#include "dforge/hilbert.hpp"

#include <random>

using namespace dforge;

TEST_CASE("hilbert symbols") {
    CHECK(hilbert_symbol(30, 2, 5) == -1);
    CHECK(hilbert_symbol(-1, 30, 5) == 1);
    CHECK(hilbert_symbol(1, 7, 3) == 1);
    CHECK(hilbert_symbol(1, -11, 2) == 1);
    CHECK(hilbert_symbol(-1, -1, 0) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    // (30,2) ramified exactly at {3,5}
    auto places = quaternion_ramified_places(Rat(30), Rat(2));
    REQUIRE(places.size() == 2);
    CHECK(places[0] == Int(3));
    CHECK(places[1] == Int(5));
    // (-1,30) vs (30,2): differ at 5
    CHECK(hilbert_symbol(-1, 30, 5) != hilbert_symbol(30, 2, 5));
    // bimultiplicativity + product formula on a few random pairs
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        long a = static_cast<long>(rng() % 200) - 100;
        long b = static_cast<long>(rng() % 200) - 100;
        long c = static_cast<long>(rng() % 200) - 100;
        if (!a || !b || !c) continue;
        for (long pl : {0L, 2L, 3L, 5L, 7L}) {
            CHECK(hilbert_symbol(a * c, b, pl) == hilbert_symbol(a, b, pl) * hilbert_symbol(c, b, pl));
        }
        // product over all places = +1
        int prod = hilbert_symbol(Rat(a), Rat(b), Int(0));
        Int support = Int(2) * Int(a) * Int(b);
        for (auto& [p, e] : factor(support.abs())) prod *= hilbert_symbol(Rat(a), Rat(b), p);
        CHECK(prod == 1);
    }
}

TEST_CASE("dirichlet characters mod 15") {
    auto chars = dirichlet_characters(15);
    CHECK(chars.size() == 8);
    CharacterFilter f;
    f.order = 4;
    f.conductor = 15;
    auto quartic = dirichlet_characters(15, f);
    CHECK(quartic.size() == 2);  // the two conductor-15 order-4 characters
    for (auto& chi : quartic) {
        CHECK(chi(-1).is_one());  // even
        // multiplicativity
        for (long m = 1; m < 15; ++m)
            for (long n = 1; n < 15; ++n) {
                if (std::gcd(m * n, 15L) != 1) continue;
                CHECK(chi(m * n) == chi(m) * chi(n));
            }
    }
    // mod 8: unique odd quadratic character of conductor 8
    CharacterFilter f8;
    f8.order = 2;
    f8.conductor = 8;
    f8.parity = -1;
    auto eps8 = dirichlet_characters(8, f8);
    CHECK(eps8.size() == 1);
    CHECK(eps8[0](-1).is_minus_one());
    // trivial modulus
    auto triv = dirichlet_characters(1);
    CHECK(triv.size() == 1);
    CHECK(triv[0].order() == 1);
    // label round trip
    auto lab = quartic[0].label();
    CHECK(character_from_label(lab) == quartic[0]);
    // product: eps8 * eps5(order4) has conductor 40
    CharacterFilter f5;
    f5.order = 4;
    auto eps5 = dirichlet_characters(5, f5);
    CHECK(eps5.size() == 2);
    auto prod = eps8[0] * eps5[0];
    CHECK(prod.modulus() == 40);
    CHECK(prod.conductor() == 40);
    CHECK(prod.order() == 4);
    // chi = eps8*eps5 squared has trivial 2-part: conductor of chi^2 = 5
    auto chi2 = prod * prod;
    CHECK(chi2.conductor() == 5);
}
