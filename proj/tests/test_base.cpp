#include "doctest.h"
#include "dforge/fq.hpp"
#include "dforge/int.hpp"
#include "dforge/poly.hpp"

using namespace dforge;

TEST_CASE("Int basics") {
    Int a(12), b(18);
    CHECK(Int::gcd(a, b) == Int(6));
    CHECK((a * b).str() == "216");
    CHECK(Int("123456789012345678901234567890") * Int(1) ==
          Int("123456789012345678901234567890"));
    CHECK(Int(-7).fmod(Int(3)) == Int(2));
    CHECK(Int::powmod(Int(2), Int(10), Int(1000)) == Int(24));
    CHECK(Int(30).val(Int(2)) == 1);
    CHECK(Int(360).val(Int(2)) == 3);
    auto f = factor(Int(599940));
    Int prod(1);
    for (auto& [p, e] : f) {
        CHECK(p.is_probab_prime());
        prod *= Int::pow(p, e);
    }
    CHECK(prod == Int(599940));
}

TEST_CASE("Rat basics") {
    Rat a(1, 3), b(1, 6);
    CHECK(a + b == Rat(1, 2));
    CHECK((a / b) == Rat(2));
    CHECK(Rat(Int(10), Int(-4)) == Rat(-5, 2));
    CHECK(Rat("22/7").num() == Int(22));
    CHECK(Rat(9, 8).val(Int(2)) == -3);
}

TEST_CASE("QPoly arithmetic and resultants") {
    QPoly f = qpoly_from_int({-30, 0, 1});  // x^2 - 30
    QPoly g = QPoly::x();
    CHECK(QPoly::resultant(f, g) == Rat(-30));
    CHECK(QPoly::resultant(g, f) == Rat(-30));
    QPoly h = qpoly_from_int({2, 3});
    CHECK(QPoly::resultant(f, h) == QPoly::resultant(h, f) * Rat(1));  // even degree product
    // disc(x^2-30) = 120
    CHECK(qpoly_disc(f) == Rat(120));
    // x^4+36x^2+54: disc = 2^11 3^9 5^2
    QPoly m = qpoly_from_int({54, 0, 36, 0, 1});
    CHECK(qpoly_disc(m) == Rat(Int(2048) * Int(19683) * Int(25)));
    // resultant antisymmetry sign: deg f * deg g odd
    QPoly l1 = qpoly_from_int({1, 1});
    QPoly l2 = qpoly_from_int({2, 1});
    CHECK(QPoly::resultant(l1, l2) == -QPoly::resultant(l2, l1));
    // shift then evaluate agrees
    QPoly s = m.shift(Rat(2));
    CHECK(s.eval(Rat(0)) == m.eval(Rat(2)));
}

TEST_CASE("Fp polynomial factorization") {
    // x^2 - 30 mod 7 = (x-3)(x+3)
    FpPoly f = fp_make({7 - 30 % 7, 0, 1}, 7);
    auto fac = fp_factor(f);
    REQUIRE(fac.size() == 2);
    CHECK(fac[0].first.deg() == 1);
    CHECK(fac[1].first.deg() == 1);
    // x^2 - 30 mod 3 = x^2
    FpPoly g = fp_make({0, 0, 1}, 3);
    auto fac3 = fp_factor(g);
    REQUIRE(fac3.size() == 1);
    CHECK(fac3[0].second == 2);
    // eta quartic mod 2: irreducible
    FpPoly q = fp_make({1, 4 % 2 + 2, 2, 1, 1}, 2);  // x^4+x^3+0x^2+0x+1 -> careful below
    q = fp_make({1, 0, 0, 1, 1}, 2);                 // 1 + x^3 + x^4
    auto fac2 = fp_factor(q);
    REQUIRE(fac2.size() == 1);
    CHECK(fac2[0].first.deg() == 4);
    // random-ish product check mod 11
    FpPoly a = fp_make({3, 1}, 11), b = fp_make({5, 0, 1}, 11), c = fp_make({1, 1, 0, 1}, 11);
    FpPoly prod = fp_mul(fp_mul(a, b), c);
    auto ff = fp_factor(prod);
    int total = 0;
    for (auto& [pi, e] : ff) total += pi.deg() * e;
    CHECK(total == prod.deg());
}

TEST_CASE("Fq extension field arithmetic") {
    // F_9 = F_3[t]/(t^2+1)
    Fq F9(3, {1, 0, 1});
    FqElem t = F9.gen();
    CHECK((t * t + FqElem(1)).is_zero());
    FqElem inv = F9.inv(t);
    CHECK((t * inv).is_one());
    CHECK(F9.chi(t * t) == 1);  // squares
    int nsq = 0;
    for (auto& e : F9.all_elements())
        if (F9.chi(e) == -1) ++nsq;
    CHECK(nsq == 4);  // half the nonzero elements
    auto r = F9.sqrt(t * t);
    REQUIRE(r.has_value());
    CHECK((*r * *r) == (t * t));
    // F_16 = F_2[t]/(t^4+t^3+1)
    Fq F16(2, {1, 0, 0, 1, 1});
    FqElem u = F16.gen();
    FqElem pw = F16.pow(u, Int(15));
    CHECK(pw.is_one());
}
