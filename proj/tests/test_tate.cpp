#include "doctest.h"
#include "dforge/tate.hpp"

using namespace dforge;

namespace {
// rational curves as Weierstrass models over the degree-1 field
struct QCurve {
    NFPtr Q;
    QCurve() : Q(NumberField::create(QPoly::x(), "QQ")) {}
    Weierstrass<AN> make(long a1, long a2, long a3, long a4, long a6) {
        Weierstrass<AN> m;
        m.a1 = Q->element({Rat(a1)});
        m.a2 = Q->element({Rat(a2)});
        m.a3 = Q->element({Rat(a3)});
        m.a4 = Q->element({Rat(a4)});
        m.a6 = Q->element({Rat(a6)});
        return m;
    }
    TateResult run(const Weierstrass<AN>& E, long p) {
        auto P = Q->factor_prime(Int(p))[0];
        return tate_at_prime(P, E);
    }
};
}  // namespace

TEST_CASE("tate on classical rational curves") {
    QCurve H;
    // 11a1: y^2 + y = x^3 - x^2 - 10x - 20, I5 at 11, f=1
    auto e11 = H.make(0, -1, 1, -10, -20);
    auto r11 = H.run(e11, 11);
    CHECK(r11.kodaira == "In");
    CHECK(r11.n == 5);
    CHECK(r11.f == 1);
    // good elsewhere
    CHECK(H.run(e11, 7).f == 0);
    CHECK(H.run(e11, 2).f == 0);
    // 36a1: y^2 = x^3 + 1: conductor 36 = 2^2 * 3^2
    auto e36 = H.make(0, 0, 0, 0, 1);
    CHECK(H.run(e36, 2).f == 2);
    CHECK(H.run(e36, 3).f == 2);
    CHECK(H.run(e36, 5).f == 0);
    // 32a: y^2 = x^3 - x: f_2 = 5
    auto e32 = H.make(0, 0, 0, -1, 0);
    CHECK(H.run(e32, 2).f == 5);
    // 27a1: y^2 + y = x^3 - 7: f_3 = 3
    auto e27 = H.make(0, 0, 1, 0, -7);
    CHECK(H.run(e27, 3).f == 3);
    // 49a1: y^2 + xy = x^3 - x^2 - 2x - 1: f_7 = 2
    auto e49 = H.make(1, -1, 0, -2, -1);
    CHECK(H.run(e49, 7).f == 2);
    CHECK(H.run(e49, 2).f == 0);
    // 15a1: y^2 + xy + y = x^3 + x^2 - 10x - 10: f_3 = f_5 = 1 (multiplicative)
    auto e15 = H.make(1, 1, 1, -10, -10);
    CHECK(H.run(e15, 3).kodaira == "In");
    CHECK(H.run(e15, 5).kodaira == "In");
    CHECK(H.run(e15, 3).f == 1);
    // 14a1: y^2 + xy + y = x^3 + 4x - 6: f_2 = 1, f_7 = 1
    auto e14 = H.make(1, 0, 1, 4, -6);
    CHECK(H.run(e14, 2).f == 1);
    CHECK(H.run(e14, 7).f == 1);
    // 20a1: y^2 = x^3 + x^2 + 4x + 4: f_2 = 2 (IV), f_5 = 1
    auto e20 = H.make(0, 1, 0, 4, 4);
    CHECK(H.run(e20, 2).f == 2);
    CHECK(H.run(e20, 5).f == 1);
    // 24a1: y^2 = x^3 - x^2 - 4x + 4: f_2 = 3, f_3 = 1
    auto e24 = H.make(0, -1, 0, -4, 4);
    CHECK(H.run(e24, 2).f == 3);
    CHECK(H.run(e24, 3).f == 1);
    // 256b1? y^2 = x^3 - 2x: f_2 = 8 (conductor 256)
    auto e256 = H.make(0, 0, 0, -2, 0);
    CHECK(H.run(e256, 2).f == 8);
    // 37a1: y^2 + y = x^3 - x: I1 at 37
    auto e37 = H.make(0, 0, 1, -1, 0);
    auto r37 = H.run(e37, 37);
    CHECK(r37.kodaira == "In");
    CHECK(r37.n == 1);
}

TEST_CASE("tate detects non-minimal models") {
    QCurve H;
    // 11a1 scaled by u=2: a_i' = a_i * u^i => (0,-4,8,-160,-1280)
    auto big = H.make(0, -4, 8, -160, -1280);
    auto r = H.run(big, 2);
    CHECK(r.u_scalings == 1);
    CHECK(r.f == 0);  // still good at 2 after minimalization
    auto r11 = H.run(big, 11);
    CHECK(r11.f == 1);
    CHECK(r11.n == 5);
}

TEST_CASE("kodaira types for In* cases") {
    QCurve H;
    // y^2 = x^3 - 2^2*7^2 x + ... pick curve 392d1? simpler: use known I1*: 48a1
    // 48a1: y^2 = x^3 + x^2 - 4x - 4: at 2: f=4? conductor 48 = 2^4*3
    auto e48 = H.make(0, 1, 0, -4, -4);
    CHECK(H.run(e48, 2).f == 4);
    CHECK(H.run(e48, 3).f == 1);
    // tame In* family: y^2 = x(x - p)(x - p(1+p^k)) has v(disc) = 2k+6, type I_{2k}*, f = 2
    for (long p : {5L, 7L}) {
        for (int k = 1; k <= 2; ++k) {
            long pk1 = 1;
            for (int i = 0; i <= k; ++i) pk1 *= p;
            long r1 = p, r2 = p + pk1;
            // x(x-r1)(x-r2) = x^3 - (r1+r2)x^2 + r1 r2 x
            auto e = H.make(0, -(r1 + r2), 0, r1 * r2, 0);
            auto res = H.run(e, p);
            CHECK(res.kodaira == "In*");
            CHECK(res.n == 2 * k);
            CHECK(res.f == 2);
            CHECK(res.vdisc == 2 * k + 6);
        }
    }
    // I0* example: 50a1 f_5 = 2? conductor 50 = 2 * 5^2: y^2+xy+y = x^3-x-2
    auto e50 = H.make(1, 0, 1, -1, -2);
    CHECK(H.run(e50, 2).f == 1);
    CHECK(H.run(e50, 5).f == 2);
}

TEST_CASE("reduction data traces match naive counts") {
    QCurve H;
    auto e11 = H.make(0, -1, 1, -10, -20);
    // a_p values of 11a1: a_2 = -2, a_3 = -1, a_5 = 1, a_7 = -2, a_13 = 4
    std::vector<std::pair<long, long>> aps{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}};
    for (auto& [p, ap] : aps) {
        auto P = H.Q->factor_prime(Int(p))[0];
        auto rd = reduction_data(P, e11, CountMethod::Naive);
        CHECK(rd.type == ReductionData::Type::Good);
        CHECK(rd.trace == Int(ap));
    }
    // at 11: split multiplicative, trace = +12
    auto P11 = H.Q->factor_prime(Int(11))[0];
    auto rd11 = reduction_data(P11, e11);
    CHECK(rd11.type == ReductionData::Type::SplitMult);
    CHECK(rd11.trace == Int(12));
}

TEST_CASE("point counting: naive vs bsgs on random curves") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        long ps[] = {5, 7, 11, 13, 17, 97, 101, 9973};
        long p = ps[rng() % 8];
        Fq F(p);
        FqElem a4 = F.from_int(Int(static_cast<long>(rng() % p)));
        FqElem a6 = F.from_int(Int(static_cast<long>(rng() % p)));
        auto m = Weierstrass<FqElem>::short_form(FqElem(0), a4, a6);
        auto I = invariants(m);
        if (I.disc.is_zero()) continue;
        Int naive = ec_point_count(F, m, CountMethod::Naive);
        Int fast = ec_point_count(F, m, CountMethod::BSGS, 1234 + trial);
        CHECK(naive == fast);
    }
    // extension field: F_49 and F_81 and F_2401
    {
        Fq F49(7, {3, 1, 1});  // x^2+x+3 irreducible mod 7
        auto m = Weierstrass<FqElem>::short_form(F49.gen(), F49.one(), F49.gen());
        auto I = invariants(m);
        REQUIRE(!I.disc.is_zero());
        CHECK(ec_point_count(F49, m, CountMethod::Naive) ==
              ec_point_count(F49, m, CountMethod::BSGS));
    }
    {
        // F_2401 = F_7[x]/(x^4 + x + 1)? check irreducibility first in test spirit
        FpPoly f = fp_make({1, 1, 0, 0, 1}, 7);
        auto fac = fp_factor(f);
        REQUIRE(fac.size() == 1);
        Fq F(7, {1, 1, 0, 0, 1});
        auto m = Weierstrass<FqElem>::short_form(F.gen(), F.one() + F.gen(), F.one());
        auto I = invariants(m);
        REQUIRE(!I.disc.is_zero());
        CHECK(ec_point_count(F, m, CountMethod::Naive) ==
              ec_point_count(F, m, CountMethod::BSGS));
    }
}

TEST_CASE("isogeny and twist identities") {
    QCurve H;
    NFPtr Q = H.Q;
    auto A = Q->element({Rat(3)});
    auto B1 = Q->element({Rat(5)});
    auto B2 = A * A - B1;
    auto E = frey_construct(A, B1, B2);
    auto I = invariants(E);
    CHECK(I.disc == AN(64) * B1 * B1 * B2);
    CHECK(I.c4 == AN(16) * (B1 + AN(4) * B2));
    auto img = two_isogeny_image(E);
    // image = y^2 = x^3 - 4A x^2 + 4B2 x
    CHECK(img.a2 == AN(-4) * A);
    CHECK(img.a4 == AN(4) * B2);
    // Velu oracle gives the same j
    auto velu = velu_two_isogeny(E, Q->zero());
    auto Iv = invariants(velu);
    auto Ii = invariants(img);
    CHECK(Iv.j() == Ii.j());
    // twist by 1 = identity; twist twice returns same j and c4^3/c6^2
    auto tw = quadratic_twist(E, AN(7));
    auto tw2 = quadratic_twist(tw, AN(7));
    CHECK(invariants(tw).j() == I.j());
    CHECK(invariants(tw2).j() == I.j());
    CHECK(invariants(tw2).c4 == I.c4 * AN(49 * 49));
    CHECK_THROWS_AS(quadratic_twist(E, Q->zero()), ZeroTwist);
    CHECK_THROWS_AS(frey_construct(A, B1, B1), SumNotSquare);
    CHECK_THROWS_AS(frey_construct(Q->element({Rat(1)}), Q->element({Rat(1)}), Q->zero()),
                    Singular);
}
