#include "doctest.h"
#include "dforge/composite.hpp"

using namespace dforge;

namespace {
// the real quartic subfield of Q(zeta15): eta = zeta + 1/zeta, sigma: eta -> eta^2 - 2
CompositeField make_Kbeta() {
    return CompositeField(qpoly_from_int({1, 4, -4, -1, 1}), qpoly_from_int({-2, 0, 1}), {6},
                          "Kbeta");
}
CompositeField make_Kdec() {
    return CompositeField(qpoly_from_int({1, 4, -4, -1, 1}), qpoly_from_int({-2, 0, 1}), {6, -2},
                          "Kdec");
}
}  // namespace

TEST_CASE("composite field arithmetic in K_beta") {
    auto F = make_Kbeta();
    CHECK(F.dim() == 8);
    CElem eta = F.eta();
    CElem s6 = F.sqrt_rad(0);
    CHECK((s6 * s6) == F.from_rat(Rat(6)));
    // minimal polynomial of eta vanishes
    QPoly m = qpoly_from_int({1, 4, -4, -1, 1});
    CElem acc = F.zero();
    CElem pw = F.one();
    for (int i = 0; i <= 4; ++i) {
        acc += F.from_rat(m[i]) * pw;
        pw *= eta;
    }
    CHECK(acc.is_zero());
    // sqrt5 = 2 eta^3 - 6 eta + 1; sqrt30 = sqrt6 * sqrt5
    CElem s5 = CElem(2) * eta * eta * eta - CElem(6) * eta + CElem(1);
    CHECK((s5 * s5) == F.from_rat(Rat(5)));
    CElem s30 = s6 * s5;
    CHECK((s30 * s30) == F.from_rat(Rat(30)));
    // inverses
    CElem x = eta + s6 * (eta * eta) + CElem(3);
    CElem xi = F.one() / x;
    CHECK((x * xi).is_one());
    CHECK(F.norm(x) * F.norm(xi) == Rat(1));
}

TEST_CASE("Galois action on K_dec has order 16 and fixes Q") {
    auto F = make_Kdec();
    CHECK(F.dim() == 16);
    auto G = F.galois_elements();
    CHECK(G.size() == 16);
    CElem eta = F.eta();
    CElem s6 = F.sqrt_rad(0), sm2 = F.sqrt_rad(1);
    // sigma: eta -> eta^2-2 has order 4
    GalElem c{1, 0};
    CElem im = F.apply(c, eta);
    CHECK(im == eta * eta - CElem(2));
    CElem im4 = eta;
    for (int i = 0; i < 4; ++i) im4 = F.apply(c, im4);
    CHECK(im4 == eta);
    // flips
    GalElem fa{0, 1u};  // sqrt6 -> -sqrt6
    CHECK(F.apply(fa, s6) == -s6);
    CHECK(F.apply(fa, sm2) == sm2);
    // homomorphism property on a sample
    CElem x = eta * s6 + sm2 * eta * eta + CElem(7);
    CElem y = s6 * sm2 - eta + CElem(2);
    for (auto& g : G) {
        CHECK(F.apply(g, x * y) == F.apply(g, x) * F.apply(g, y));
        CHECK(F.apply(g, x + y) == F.apply(g, x) + F.apply(g, y));
    }
    // sqrt30 = -sqrt(-2)sqrt(-3)sqrt5 consistency: sqrt(-3) = -sqrt6*sqrt(-2)/2
    CElem sm3 = -(s6 * sm2) / CElem(2);
    CHECK((sm3 * sm3) == F.from_rat(Rat(-3)));
}

TEST_CASE("tower square roots") {
    auto F = make_Kdec();
    CElem eta = F.eta();
    CElem s6 = F.sqrt_rad(0), sm2 = F.sqrt_rad(1);
    // perfect squares recognized with exact witnesses
    CElem x = (eta + CElem(2)) * (s6 - eta * sm2 + CElem(1));
    CElem sq = x * x;
    auto r = F.sqrt(sq);
    REQUIRE(r.has_value());
    CHECK(((*r) * (*r)) == sq);
    // 5 is a square (sqrt5 in Q(eta)); 7 is not
    CHECK(F.is_square(F.from_rat(Rat(5))));
    CHECK(F.is_square(F.from_rat(Rat(30))));
    CHECK(F.is_square(F.from_rat(Rat(-2))));
    CHECK(F.is_square(F.from_rat(Rat(-3))));
    CHECK(F.is_square(F.from_rat(Rat(6))));
    CHECK(!F.is_square(F.from_rat(Rat(7))));
    CHECK(!F.is_square(F.from_rat(Rat(2))));
    CHECK(!F.is_square(eta));
    // zeta5 exists: x^2 = (eta5^2 - 4) with eta5 = eta^3 - 3eta
    CElem eta5 = eta * eta * eta - CElem(3) * eta;
    auto z = F.sqrt(eta5 * eta5 - CElem(4));
    REQUIRE(z.has_value());
    CElem zeta5 = (eta5 + *z) / CElem(2);
    CElem z5 = zeta5;
    for (int i = 0; i < 4; ++i) z5 = z5 * zeta5;
    CHECK(z5.is_one());
    CHECK(!zeta5.is_one());
}

TEST_CASE("bridge K_beta to a number field presentation") {
    auto F = make_Kbeta();
    CElem theta = F.eta() + F.sqrt_rad(0);
    auto B = F.bridge(theta);
    CHECK(B.nf->degree() == 8);
    CHECK(B.nf->cached_automorphisms.size() == 8);
    // coordinates round trip
    CElem x = F.eta() * F.sqrt_rad(0) + CElem(3) * F.eta() - CElem(1);
    auto xnf = B.nf->element(CompositeField::apply_matrix(B.to_nf, x.co));
    auto back = CompositeField::apply_matrix(B.from_nf, xnf.coords());
    CHECK(F.make(back) == x);
    // automorphisms act consistently: apply in both representations
    GalElem g{1, 1u};
    CElem gx = F.apply(g, x);
    // find matching automorphism image of theta
    CElem gtheta = F.apply(g, theta);
    auto gtheta_nf = B.nf->element(CompositeField::apply_matrix(B.to_nf, gtheta.co));
    AN gx_nf = B.nf->apply_automorphism(gtheta_nf, xnf);
    CHECK(F.make(CompositeField::apply_matrix(B.from_nf, gx_nf.coords())) == gx);
}
