#include "doctest.h"
#include "dforge/ap4.hpp"

using namespace dforge;

TEST_CASE("frey family invariants match the printed formulas") {
    auto C = AP4Context::make();
    AN s30 = C.s30;
    auto I1 = invariants(C.E1.model);
    auto I2 = invariants(C.E2.model);
    // Delta_1 = -2^9 3^6 5^4 (5+sqrt30) g1 g2^2
    ParamPolynomial d1 = ParamPolynomial(AN(-512 * 729) * AN(625) * (AN(5) + s30)) * C.g1 * C.g2 * C.g2;
    CHECK(I1.disc == d1);
    // Delta_2 = -2^13 3 5^4 sqrt30 g1^2 g2
    ParamPolynomial d2 = ParamPolynomial(AN(-8192 * 3) * AN(625) * s30) * C.g1 * C.g1 * C.g2;
    CHECK(I2.disc == d2);
    // c4,1 = -2^5 3^2 5 (5+sqrt30) ((43-8s)a^2 + (6-s)b^2)
    using PP = ParamPolynomial;
    PP a2p = PP::monomial(AN(1), 2, 0), b2p = PP::monomial(AN(1), 0, 2);
    PP c41 = PP(AN(-32 * 9 * 5) * (AN(5) + s30)) *
             (PP(AN(43) - AN(8) * s30) * a2p + PP(AN(6) - s30) * b2p);
    CHECK(I1.c4 == c41);
    // c4,2 = -2^6 3^{-1} 5 sqrt30 (9a^2 + (18-5 sqrt30) b^2)
    PP c42 = PP(AN(-64 * 5) * s30 / AN(3)) * (PP(AN(9)) * a2p + PP(AN(18) - AN(5) * s30) * b2p);
    CHECK(I2.c4 == c42);
    // c4^3 - c6^2 = 1728 disc for both families (symbolic identity)
    CHECK(I1.c4 * I1.c4 * I1.c4 - I1.c6 * I1.c6 == PP(AN(1728)) * I1.disc);
    CHECK(I2.c4 * I2.c4 * I2.c4 - I2.c6 * I2.c6 == PP(AN(1728)) * I2.disc);
    // specializations at (1,0): Delta_1 = -2^9 3^6 5^4 (5 + sqrt30)
    auto E1spec = specialize(C.E1, Int(1), Int(0));
    auto IS = invariants(E1spec);
    CHECK(IS.disc == AN(-512 * 729) * AN(625) * (AN(5) + s30));
    auto E2spec = specialize(C.E2, Int(1), Int(0));
    CHECK(invariants(E2spec).c4 == AN(-64 * 3 * 5) * s30);
    // j formulas as the identity c4^3 = j * disc:
    // j1 = (11+2s) 2^6 F1^3 / (g1 g2^2) with F1 = (43-8s)a^2+(6-s)b^2, so
    // c4^3 = (11+2s) 2^6 F1^3 * (-2^9 3^6 5^4 (5+s))
    PP F1 = PP(AN(43) - AN(8) * s30) * a2p + PP(AN(6) - s30) * b2p;
    AN k1 = (AN(11) + AN(2) * s30) * AN(64) * AN(-512 * 729) * AN(625) * (AN(5) + s30);
    CHECK(I1.c4 * I1.c4 * I1.c4 == PP(k1) * F1 * F1 * F1);
    // j2 = 2^6 3^{-3} F2^3/(g1^2 g2): c4^3 = 2^6 3^{-3} F2^3 * (-2^13 3 5^4 s)
    PP F2 = PP(AN(9)) * a2p + PP(AN(18) - AN(5) * s30) * b2p;
    AN k2 = AN(64) / AN(27) * AN(-8192 * 3) * AN(625) * s30;
    CHECK(I2.c4 * I2.c4 * I2.c4 == PP(k2) * F2 * F2 * F2);
}

TEST_CASE("assumption handling in specialize") {
    auto C = AP4Context::make();
    CHECK_THROWS_AS(specialize(C.E1, Int(2), Int(2)), AssumptionViolated);
    CHECK_THROWS_AS(specialize(C.E1, Int(2), Int(1)), AssumptionViolated);  // a even
    CHECK(AP4Context::f_value(Int(1), Int(2)) == Int(83));
    // untwisted E2-prime has denominator 20: rejected as non-integral family
    auto Cx = AP4Context::make();
    using PP = ParamPolynomial;
    Weierstrass<PP> bad;
    bad.a2 = PP::monomial(AN(2), 0, 1);
    bad.a4 = PP(Cx.s30 / AN(20)) * PP::monomial(AN(1), 2, 0);
    CHECK_THROWS_AS(define_frey_family(Cx.K.nf, bad, FamilyAssumptions{}, "E2prime"),
                    NonIntegralCoefficient);
}

TEST_CASE("j denominator certificates supported on {2,3,5}") {
    auto C = AP4Context::make();
    auto s1 = j_denominator_certificate(C.E1);
    for (auto& p : s1) CHECK((p == Int(2) || p == Int(3) || p == Int(5)));
    auto s2 = j_denominator_certificate(C.E2);
    for (auto& p : s2) CHECK((p == Int(2) || p == Int(3) || p == Int(5)));
}

TEST_CASE("symbolic tate at q3 and p5: Prop 5.1 fixed parts away from 2") {
    auto C = AP4Context::make();
    // E2 at q3: good reduction (exponent 0) for every admissible class
    auto q3 = C.K.nf->factor_prime(Int(3))[0];
    auto cv2 = symbolic_tate(C.E2, q3);
    REQUIRE(!cv2.cases.empty());
    for (auto& [cls, r] : cv2.cases) CHECK(r.f == 0);
    // E1 at q3: exponent 2 everywhere
    auto cv1 = symbolic_tate(C.E1, q3);
    for (auto& [cls, r] : cv1.cases) CHECK(r.f == 2);
    // E1, E2 at p5: exponent 2 everywhere
    auto p5 = C.K.nf->factor_prime(Int(5))[0];
    for (auto& [cls, r] : symbolic_tate(C.E1, p5).cases) CHECK(r.f == 2);
    for (auto& [cls, r] : symbolic_tate(C.E2, p5).cases) CHECK(r.f == 2);
}

TEST_CASE("symbolic tate at p2: the parity split of Prop 5.1") {
    auto C = AP4Context::make();
    auto p2 = C.K.nf->factor_prime(Int(2))[0];
    auto cv1 = symbolic_tate(C.E1, p2);
    REQUIRE(!cv1.cases.empty());
    // every case with even b gives 12; odd b gives 10
    bool saw_even = false, saw_odd = false;
    for (auto& [cls, r] : cv1.cases) {
        if (cls.b0.is_even()) {
            CHECK(r.f == 12);
            saw_even = true;
        } else {
            CHECK(r.f == 10);
            saw_odd = true;
        }
    }
    CHECK(saw_even);
    CHECK(saw_odd);
    // E2 at p2: constant exponent 14
    auto cv2 = symbolic_tate(C.E2, p2);
    for (auto& [cls, r] : cv2.cases) CHECK(r.f == 14);
}

TEST_CASE("exhaustiveness and disjointness of the case split") {
    auto C = AP4Context::make();
    auto p2 = C.K.nf->factor_prime(Int(2))[0];
    auto cv = symbolic_tate(C.E1, p2);
    // collect max modulus, then check each admissible pair mod that modulus is covered once
    Int maxmod(1);
    for (auto& [cls, r] : cv.cases) maxmod = std::max(maxmod, cls.modulus(), [](const Int& x, const Int& y) { return x < y; });
    long M = maxmod.to_long();
    for (long a = 0; a < M; ++a) {
        for (long b = 0; b < M; ++b) {
            if (a % 2 == 0) continue;  // inadmissible: a must be odd
            int hits = 0;
            for (auto& [cls, r] : cv.cases)
                if (cls.contains(Int(a), Int(b))) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("soundness: classical tate on specializations agrees with the class value") {
    auto C = AP4Context::make();
    auto p2 = C.K.nf->factor_prime(Int(2))[0];
    auto q3 = C.K.nf->factor_prime(Int(3))[0];
    auto p5 = C.K.nf->factor_prime(Int(5))[0];
    auto cv2_1 = symbolic_tate(C.E1, p2);
    std::mt19937_64 rng(7);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 25; ++trial) {
        Int a(static_cast<long>(rng() % 200) - 100), b(static_cast<long>(rng() % 200) - 100);
        if (!C.E1.assumptions.admits_pair(a, b)) continue;
        ++done;
        auto E = specialize(C.E1, a, b);
        CHECK(tate_at_prime(p2, E).f == cv2_1.at(a, b).f);
        if (done % 5 == 0) {
            if (!b.fmod(Int(3)).is_zero()) CHECK(tate_at_prime(q3, E).f == 2);
            CHECK(tate_at_prime(p5, E).f == 2);
        }
    }
    CHECK(done >= 25);
}
