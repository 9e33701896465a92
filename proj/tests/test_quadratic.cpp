#include "doctest.h"
#include "dforge/quadratic.hpp"

using namespace dforge;

TEST_CASE("fundamental units by continued fractions") {
    auto K30 = QuadContext::make(Int(30));
    auto u = quad_fundamental_unit(K30);
    CHECK(u.u == K30.nf->element({Rat(11), Rat(2)}));
    CHECK(u.norm_sign == 1);
    auto K6 = QuadContext::make(Int(6));
    auto u6 = quad_fundamental_unit(K6);
    CHECK(u6.u == K6.nf->element({Rat(5), Rat(2)}));
    auto K5 = QuadContext::make(Int(5));
    auto u5 = quad_fundamental_unit(K5);
    CHECK(u5.u == K5.nf->element({Rat(1, 2), Rat(1, 2)}));  // golden ratio
    CHECK(u5.norm_sign == -1);
    auto K2 = QuadContext::make(Int(2));
    CHECK(quad_fundamental_unit(K2).norm_sign == -1);  // 1 + sqrt2
}

TEST_CASE("class numbers via reduced forms") {
    CHECK(quad_class_number(QuadContext::make(Int(30))) == 2);
    CHECK(quad_class_number(QuadContext::make(Int(-10))) == 2);
    CHECK(quad_class_number(QuadContext::make(Int(-1))) == 1);
    CHECK(quad_class_number(QuadContext::make(Int(-5))) == 2);
    CHECK(quad_class_number(QuadContext::make(Int(2))) == 1);
    CHECK(quad_class_number(QuadContext::make(Int(10))) == 2);
    CHECK(quad_class_number(QuadContext::make(Int(-23))) == 3);
    CHECK(quad_class_number(QuadContext::make(Int(-14))) == 4);
}

TEST_CASE("ideal arithmetic and principality") {
    auto K = QuadContext::make(Int(30));
    AN s30 = K.sqrt_d();
    // q3 = (3, sqrt30): non-principal
    QuadIdeal q3 = quad_ideal_from_generators(K, {AN(3), s30});
    CHECK(q3.norm() == Rat(3));
    CHECK(!quad_is_principal(q3).has_value());
    // (6+sqrt30) principal by construction
    QuadIdeal I = quad_principal(K, AN(6) + s30);
    auto g = quad_is_principal(I);
    REQUIRE(g.has_value());
    CHECK(quad_principal(K, *g) == I);
    // q3^2 = (3)
    QuadIdeal q3sq = quad_mul(q3, q3);
    QuadIdeal three = quad_principal(K, AN(3));
    CHECK(q3sq == three);
    // I * I^{-1} = O
    QuadIdeal unit = quad_mul(q3, quad_inv(q3));
    QuadIdeal one = quad_principal(K, AN(1));
    CHECK(unit == one);

    // Q(sqrt(-10)): p2 = (2, sqrt(-10)) non-principal, norm 9 prime above 3 inert? no: 3 splits?
    auto Km10 = QuadContext::make(Int(-10));
    AN sm10 = Km10.sqrt_d();
    QuadIdeal p2 = quad_ideal_from_generators(Km10, {AN(2), sm10});
    CHECK(p2.norm() == Rat(2));
    CHECK(!quad_is_principal(p2).has_value());
    QuadIdeal p2sq = quad_mul(p2, p2);
    CHECK(quad_is_principal(p2sq).has_value());  // (2)
}

TEST_CASE("ideal valuation via prime machinery") {
    auto K = QuadContext::make(Int(30));
    AN s30 = K.sqrt_d();
    auto q3p = K.nf->factor_prime(Int(3))[0];
    QuadIdeal q3 = quad_ideal_from_generators(K, {AN(3), s30});
    CHECK(quad_ideal_valuation(q3, q3p) == 1);
    QuadIdeal inv = quad_inv(q3);
    CHECK(quad_ideal_valuation(inv, q3p) == -1);
    // g1(1,2) = 1 + (2 + sqrt30/3)*4 = 9 + 4sqrt30/3: valuation -1 at q3
    AN g1 = AN(9) + AN(4) * s30 / AN(3);
    CHECK(q3p.valuation(g1) == -1);
    auto p83 = K.nf->factor_prime(Int(83));
    // N(g1(1,2)) = 83/3: exactly one prime above 83 divides it
    int tot = 0;
    for (auto& P : p83) tot += P.valuation(g1);
    CHECK(tot == 1);
}
