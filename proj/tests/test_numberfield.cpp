#include "doctest.h"
#include "dforge/numberfield.hpp"
#include "dforge/zfactor.hpp"

using namespace dforge;

TEST_CASE("zassenhaus factorization") {
    // (x^2-2)(x^2-3)(x+1)
    QPoly f = qpoly_from_int({-2, 0, 1}) * qpoly_from_int({-3, 0, 1}) * qpoly_from_int({1, 1});
    auto fac = qpoly_factor(f);
    REQUIRE(fac.size() == 3);
    CHECK(fac[0].first.degree() == 1);
    CHECK(fac[1].first.degree() == 2);
    CHECK(fac[2].first.degree() == 2);
    CHECK(qpoly_irreducible(qpoly_from_int({-30, 0, 1})));
    CHECK(!qpoly_irreducible(qpoly_from_int({-4, 0, 1})));
    CHECK(qpoly_irreducible(qpoly_from_int({54, 0, 36, 0, 1})));  // 3v min poly
    CHECK(qpoly_irreducible(qpoly_from_int({1, 4, -4, -1, 1})));  // eta quartic reversed? sanity below
    // eta = 2cos(2pi/15): x^4 - x^3 - 4x^2 + 4x + 1
    QPoly eta = qpoly_from_int({1, 4, -4, -1, 1});
    CHECK(eta.degree() == 4);
    // multiplicity: (x-1)^2 (x^2+1)
    QPoly g = qpoly_from_int({-1, 1}) * qpoly_from_int({-1, 1}) * qpoly_from_int({1, 0, 1});
    auto fg = qpoly_factor(g);
    REQUIRE(fg.size() == 2);
    int quad = fg[0].first.degree() == 2 ? 0 : 1;
    CHECK(fg[quad].second == 1);
    CHECK(fg[1 - quad].second == 2);
}

TEST_CASE("number field creation and arithmetic") {
    auto K = NumberField::create(qpoly_from_int({-30, 0, 1}), "K");
    CHECK(K->degree() == 2);
    AN s30 = K->gen();
    AN u = AN(11) + AN(2) * s30;  // 11 + 2*sqrt30
    CHECK(K->norm(u) == Rat(1));
    CHECK(K->trace(u) == Rat(22));
    AN inv = AN(1) / u;
    CHECK((u * inv).is_one());
    CHECK(inv == AN(11) - AN(2) * s30);
    CHECK_THROWS_AS(NumberField::create(qpoly_from_int({-4, 0, 1})), NotIrreducible);
    CHECK_THROWS_AS(NumberField::create(Rat(2) * qpoly_from_int({-4, 0, 1})), NotMonic);
    auto Q = NumberField::create(QPoly::x(), "QQ");
    CHECK(Q->degree() == 1);
    // char poly
    QPoly cp = K->char_poly(u);
    CHECK(cp.eval(Rat(11)) == Rat(-120 * 4) * Rat(0) + cp.eval(Rat(11)));  // smoke
    CHECK(cp == qpoly_from_int({1, -22, 1}));
}

TEST_CASE("prime factorization in quadratic field") {
    auto K = NumberField::create(qpoly_from_int({-30, 0, 1}), "K");
    auto f3 = K->factor_prime(Int(3));
    REQUIRE(f3.size() == 1);
    CHECK(f3[0].e == 2);
    CHECK(f3[0].f == 1);
    auto f7 = K->factor_prime(Int(7));
    REQUIRE(f7.size() == 2);
    CHECK(f7[0].e == 1);
    CHECK(f7[0].f == 1);
    auto f11 = K->factor_prime(Int(11));  // 30 mod 11 = 8, QR? 8^5 mod 11 = 10 = -1: inert
    REQUIRE(f11.size() == 1);
    CHECK(f11[0].f == 2);
    // rationals
    auto Q = NumberField::create(QPoly::x(), "QQ");
    auto fp = Q->factor_prime(Int(5));
    REQUIRE(fp.size() == 1);
    CHECK(fp[0].e == 1);
    CHECK(fp[0].f == 1);
}

TEST_CASE("valuation and residue in quadratic field") {
    auto K = NumberField::create(qpoly_from_int({-30, 0, 1}), "K");
    AN s30 = K->gen();
    auto q3 = K->factor_prime(Int(3))[0];
    CHECK(q3.valuation(s30) == 1);
    CHECK(q3.valuation(AN(3)) == 2);
    CHECK(q3.valuation(AN(1)) == 0);
    CHECK(q3.valuation(s30 / AN(3)) == -1);
    CHECK_THROWS_AS(q3.valuation(K->zero()), ZeroElement);
    // residue at a split prime above 7: sqrt30 -> 3 or -3
    auto f7 = K->factor_prime(Int(7));
    FqElem r = f7[0].residue(s30);
    FqElem r2 = r * r;
    CHECK(r2 == f7[0].residue_field->from_int(Int(30)));
    // residue of 1/3 mod 7 = 5
    FqElem third = f7[0].residue(AN(Rat(1, 3)));
    CHECK(third == f7[0].residue_field->from_int(Int(5)));
    // 11 + 2 sqrt30 with sqrt30 -> 3: 17 = 3 mod 7
    AN u = AN(11) + AN(2) * s30;
    FqElem ru = f7[0].residue(u);
    FqElem three = f7[0].residue_field->from_int(Int(3));
    FqElem rr = f7[0].residue(s30);
    bool maps_to_3 = (rr == three);
    if (maps_to_3)
        CHECK(ru == f7[0].residue_field->from_int(Int(17)));
    else
        CHECK(ru == f7[0].residue_field->from_int(Int(11 - 6)));
    // P-integral with p in denominator: (3 + sqrt30)/3 at q3 has val >= 0? v(3+sqrt30)=1, v(3)=2 -> -1.
    auto v = q3.valuation((AN(3) + s30) / AN(3));
    CHECK(v == -1);
    CHECK_THROWS_AS(q3.residue((AN(3) + s30) / AN(3)), NotIntegralAtP);
    // but sqrt30^2/3 = 10 is fine (val 0): residue = 10 mod q3 -> 1
    FqElem ten = q3.residue(s30 * s30 / AN(3));
    CHECK(ten == q3.residue_field->from_int(Int(10)));
}

TEST_CASE("valuation in quartic field Q(v), 3 totally ramified") {
    // vprime = 3v, min poly x^4 + 36x^2 + 54; v has valuation -1 at the unique prime above 3.
    // Z[3v] has index divisible by 3; the uniformizer 3v^3 = vprime^3/9 gives an
    // Eisenstein-at-3 presentation x^4 + 504x^2 + 24.
    auto F = NumberField::create(qpoly_from_int({54, 0, 36, 0, 1}), "Qv");
    AN vp0 = F->gen();
    F->add_presentation(vp0 * vp0 * vp0 / AN(9));
    auto f3 = F->factor_prime(Int(3));
    REQUIRE(f3.size() == 1);
    CHECK(f3[0].e == 4);
    CHECK(f3[0].f == 1);
    AN vp = F->gen();
    CHECK(f3[0].valuation(vp) == 3);
    AN v = vp / AN(3);
    CHECK(f3[0].valuation(v) == -1);
    CHECK(f3[0].valuation(AN(3)) == 4);
    // uniformizer sanity
    AN pi = f3[0].uniformizer();
    CHECK(f3[0].valuation(pi) == 1);
    // norm of v: 54/81 = 2/3
    CHECK(F->norm(v) == Rat(2, 3));
}

TEST_CASE("automorphisms of quadratic and quartic fields") {
    auto K = NumberField::create(qpoly_from_int({-30, 0, 1}), "K");
    auto roots = K->roots_of_min_poly_in_field();
    CHECK(roots.size() == 2);
    auto F = NumberField::create(qpoly_from_int({54, 0, 36, 0, 1}), "Qv");
    auto rv = F->roots_of_min_poly_in_field();
    CHECK(rv.size() == 2);  // only v -> ±v
    for (auto& r : rv) {
        AN img = F->apply_automorphism(r, F->gen());
        CHECK(img == r);
    }
}
