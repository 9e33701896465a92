#include "doctest.h"
#include "dforge/ap4.hpp"
#include "dforge/qcurve.hpp"

using namespace dforge;

namespace {
struct QData {
    CompositeField Kdec = make_Kdec_field();
    CompositeField values = make_value_field();
    DegreeMap D;
    TwoCocycle cE;
    QData() {
        D = degree_map(Kdec, 2, {2, 1});
        cE = cocycle_table(Kdec, IsogenyCocycleData{30, -2, Rat(-1), Rat(-2), Rat(2)});
    }
};
}  // namespace

TEST_CASE("degree map and cocycle of the Frey Q-curves") {
    QData Q;
    auto& F = Q.Kdec;
    for (auto& g : F.galois_elements()) {
        int s30 = galois_sign_on_sqrt(F, g, 30);
        CHECK(Q.D.d.at(g) == (s30 == 1 ? 1 : 2));
    }
    // table spot values
    for (auto& s : F.galois_elements())
        for (auto& t : F.galois_elements()) {
            Rat v = Q.cE(s, t);
            if (galois_sign_on_sqrt(F, t, 30) == 1) {
                CHECK(v == Rat(1));
            } else {
                int s2 = galois_sign_on_sqrt(F, s, -2);
                int s30 = galois_sign_on_sqrt(F, s, 30);
                if (s2 == 1 && s30 == -1) CHECK(v == Rat(-2));
                if (s2 == -1 && s30 == -1) CHECK(v == Rat(2));
                if (s2 == -1 && s30 == 1) CHECK(v == Rat(-1));
                if (s2 == 1 && s30 == 1) CHECK(v == Rat(1));
            }
        }
    // |c|^2 equals the coboundary of d, and c^2 likewise (values are real)
    Q.cE.check_square_is_coboundary_of(Q.D);
    // normalized rows
    GalElem id{0, 0};
    for (auto& t : F.galois_elements()) CHECK(Q.cE(id, t) == Rat(1));
}

TEST_CASE("dual basis, sign component, splitting characters") {
    QData Q;
    auto B = dual_basis(Q.D);
    REQUIRE(B.pairs.size() == 1);
    CHECK(B.pairs[0].first == 30);
    CHECK(B.pairs[0].second == 2);
    auto ram = sign_component(B);
    REQUIRE(ram.size() == 2);
    CHECK(ram.count(Int(3)) == 1);
    CHECK(ram.count(Int(5)) == 1);
    // the (30,2) vs (-1,30) distinction at the place 5
    CHECK(hilbert_symbol(Rat(30), Rat(2), Int(5)) == -1);
    CHECK(hilbert_symbol(Rat(-1), Rat(30), Int(5)) == 1);
    // character search up to 120 includes both conductor-15 order-4 characters
    auto chars = splitting_character_search(B, 120);
    CharacterFilter f15;
    f15.order = 4;
    f15.conductor = 15;
    auto quartic = dirichlet_characters(15, f15);
    int found = 0;
    for (auto& chi : chars)
        for (auto& q : quartic)
            if (chi.modulus() == 15 && chi == q) ++found;
    CHECK(found == 2);
    // trivial dual basis admits the trivial character
    DualBasis triv;
    auto tchars = splitting_character_search(triv, 10);
    bool has_trivial = false;
    for (auto& chi : tchars)
        if (chi.order() == 1) has_trivial = true;
    CHECK(has_trivial);
}

TEST_CASE("splitting maps, K_beta and K_dec degrees") {
    QData Q;
    auto& F = Q.Kdec;
    auto cyc = CyclotomicAction::make(F);
    CharacterFilter f15;
    f15.order = 4;
    f15.conductor = 15;
    auto eps_list = dirichlet_characters(15, f15);
    for (auto& eps : eps_list) {
        auto B = splitting_map(F, cyc, eps, Q.D, Q.values);
        // beta^2 = eps*d holds pointwise and the ratio against c_E is a +-1 cocycle
        auto ratio = cocycle_ratio(B, Q.cE);
        // K_beta = fixed field of the kernel of beta mod Q*: degree 8 expected
        int rational_count = 0;
        for (auto& [g, v] : B.beta) {
            bool rat = true;
            for (size_t i = 1; i < v.co.size(); ++i)
                if (!v.co[i].is_zero()) rat = false;
            if (rat) ++rational_count;
        }
        CHECK(16 / rational_count == 8);
        // eps = beta^2 / d as a character (multiplicativity check built into beta^2 = eps d,
        // verified in splitting_maps); K_dec degree:
        CHECK(F.dim() == 16);
    }
}

TEST_CASE("twist solver, Hilbert 90, and the printed octic") {
    QData Q;
    auto& F = Q.Kdec;
    auto cyc = CyclotomicAction::make(F);
    CharacterFilter f15;
    f15.order = 4;
    f15.conductor = 15;
    auto eps_list = dirichlet_characters(15, f15);
    auto units = make_kdec_units(F);

    std::vector<CElem> gammas;
    for (auto& eps : eps_list) {
        auto B = splitting_map(F, cyc, eps, Q.D, Q.values);
        auto ratio = cocycle_ratio(B, Q.cE);
        auto alpha = twist_alpha_solver(F, ratio, units);
        // a-map = alpha^2 is a 1-cocycle; gamma from Hilbert 90
        std::map<GalElem, CElem> a2;
        for (auto& [g, v] : alpha) a2[g] = v * v;
        CElem gamma = hilbert90(F, a2);
        for (auto& g : F.galois_elements())
            CHECK(F.apply(g, gamma) == a2.at(g) * gamma);
        // twisted isogeny data: cocycle becomes the beta coboundary
        auto tw = twisted_isogeny_update(Q.D, Q.cE, B, alpha, gamma);
        CHECK(tw.d.d == Q.D.d);
        gammas.push_back(gamma);
    }
    // both characters must give equivalent twists
    CHECK(twist_equivalence(F, gammas[0], gammas[1]));

    // compare against a root of the printed degree-8 polynomial
    auto Kb = make_Kbeta_field();
    QPoly octic = qpoly_from_int({25, 200, -1950, 3600, -285, -1840, -550, -40, 1});
    auto roots = roots_in_real_composite(Kb, octic);
    REQUIRE(!roots.empty());
    // inject a K_beta root into K_dec (mask bit 0 = sqrt6 in both models)
    auto inject = [&](const CElem& x) {
        std::vector<Rat> v(F.dim(), Rat(0));
        for (unsigned m = 0; m < 2; ++m)
            for (int j = 0; j < 4; ++j) v[F.idx(m, j)] = x.co[Kb.idx(m, j)];
        return F.make(v);
    };
    bool equivalent = false;
    for (auto& r : roots) {
        if (twist_equivalence(F, gammas[0], inject(r))) {
            equivalent = true;
            break;
        }
    }
    CHECK(equivalent);
    // trivial-ratio sanity: alpha = 1 solves, gamma rational
    TwoCocycle triv;
    triv.F = &F;
    for (auto& s : F.galois_elements())
        for (auto& t : F.galois_elements()) triv.c[{s, t}] = Rat(1);
    auto alpha1 = twist_alpha_solver(F, triv, units);
    std::map<GalElem, CElem> a21;
    for (auto& [g, v] : alpha1) a21[g] = v * v;
    CElem g1 = hilbert90(F, a21);
    CHECK(!g1.is_zero());
}

TEST_CASE("decomposition into GL2-type factors") {
    QData Q;
    auto& F = Q.Kdec;
    auto cyc = CyclotomicAction::make(F);
    CharacterFilter f15;
    f15.order = 4;
    f15.conductor = 15;
    auto eps = dirichlet_characters(15, f15)[0];
    auto Bmap = splitting_map(F, cyc, eps, Q.D, Q.values);
    // normalized so beta = 1 on Gal(K_dec/K_beta): descends to Gal(K_beta/Q)
    GalElem aflip{0, 2u};
    REQUIRE(Bmap.beta.at(aflip) == Q.values.one());
    const SplittingMap* B0 = &Bmap;
    // quotient model: K_beta's own Galois group (order 8), lift = same (c, sqrt6 bit)
    auto Kb = make_Kbeta_field();
    auto lift = [&](const GalElem& g) { return GalElem{g.c, (g.flips & 1u) ? 2u * 0 + 1u : 0u}; };
    std::map<GalElem, CElem> base;
    for (auto& g : Kb.galois_elements()) base[g] = B0->beta.at(lift(g));
    // all splitting maps on the quotient: multiply by the 8 characters of Z2 x Z4
    std::vector<std::map<GalElem, CElem>> all;
    CElem iu = Q.values.sqrt_rad(0);
    for (int e6 = 0; e6 < 2; ++e6)
        for (int ec = 0; ec < 4; ++ec) {
            std::map<GalElem, CElem> m;
            for (auto& [g, v] : base) {
                CElem chi = Q.values.one();
                if (e6 && (g.flips & 1u)) chi = -chi;
                for (int t = 0; t < ec * g.c; ++t) chi = chi * iu;
                m[g] = v * chi;
            }
            all.push_back(std::move(m));
        }
    auto factors = decomposition(Kb, Q.values, all);
    REQUIRE(factors.size() == 2);
    int total_dim = 0;
    for (auto& f : factors) {
        CHECK(f.dimension == 4);
        CHECK(f.endo_field == "Q(zeta8)");
        CHECK(f.members.size() == 4);
        total_dim += f.dimension;
    }
    CHECK(total_dim == 8);  // = [K_beta : Q]
}
