#pragma once

#include <deque>
#include <set>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dforge/bipoly.hpp"
#include "dforge/tate.hpp"

// Frey curve families with polynomial coefficients in the parameters (a,b), and the
// congruence-class version of Tate's algorithm: the local context answers valuation
// and residue queries when they are constant on the current class and requests a
// refinement otherwise; the driver splits classes mod increasing powers of p.

namespace dforge {

using ParamPolynomial = BiPoly<AN>;

struct FamilyAssumptions {
    bool coprime = true;    // gcd(a,b) = 1
    bool a_odd = true;      // 2 does not divide a
    bool b_not_div3 = true; // 3 does not divide b

    // may the congruence class (a0, b0) mod p^m contain admissible pairs?
    bool admits(const Int& p, const Int& a0, const Int& b0, int m) const {
        if (m == 0) return true;
        if (coprime && a0.fmod(p).is_zero() && b0.fmod(p).is_zero()) return false;
        if (a_odd && p == Int(2) && a0.is_even()) return false;
        if (b_not_div3 && p == Int(3) && b0.fmod(Int(3)).is_zero()) return false;
        return true;
    }
    // gcd and parity only: formal specializations like (1,0) are allowed even though
    // 3 | b can hold for no actual solution
    bool admits_pair(const Int& a, const Int& b) const {
        if (coprime && Int::gcd(a, b) != Int(1)) return false;
        if (a_odd && a.is_even()) return false;
        return true;
    }
};

struct FreyFamily {
    NFPtr nf;                      // base field
    Weierstrass<ParamPolynomial> model;
    FamilyAssumptions assumptions;
    std::string name;
};

inline FreyFamily define_frey_family(NFPtr nf, Weierstrass<ParamPolynomial> model,
                                     FamilyAssumptions assume, std::string name = "") {
    for (const ParamPolynomial* c : {&model.a1, &model.a2, &model.a3, &model.a4, &model.a6})
        for (auto& [ij, coeff] : c->terms())
            if (!nf->is_integral(coeff))
                throw NonIntegralCoefficient("coefficient of " + name + " at a^" +
                                             std::to_string(ij.first) + " b^" +
                                             std::to_string(ij.second));
    return FreyFamily{std::move(nf), std::move(model), assume, std::move(name)};
}

inline Weierstrass<AN> specialize(const FreyFamily& fam, const Int& a, const Int& b) {
    if (!fam.assumptions.admits_pair(a, b)) throw AssumptionViolated("(a,b) violates the family assumptions");
    AN av{Rat(a)}, bv{Rat(b)};
    auto ev = [&](const ParamPolynomial& f) { return fam.nf->coerce(f.eval(av, bv)); };
    Weierstrass<AN> m;
    m.a1 = ev(fam.model.a1);
    m.a2 = ev(fam.model.a2);
    m.a3 = ev(fam.model.a3);
    m.a4 = ev(fam.model.a4);
    m.a6 = ev(fam.model.a6);
    return m;
}

// congruence class (a, b) = (a0, b0) mod p^m
struct CongruenceClass {
    Int p;
    Int a0, b0;
    int m = 0;

    Int modulus() const { return Int::pow(p, m); }
    bool contains(const Int& a, const Int& b) const {
        Int M = modulus();
        return (a - a0).divisible_by(M) && (b - b0).divisible_by(M);
    }
    std::string str() const {
        return "(a,b) = (" + a0.str() + "," + b0.str() + ") mod " + p.str() + "^" + std::to_string(m);
    }
};

// spec type: disjoint exhaustive list of (class, value)
template <class V>
struct ConditionalValue {
    std::vector<std::pair<CongruenceClass, V>> cases;

    const V& at(const Int& a, const Int& b) const {
        for (auto& [cls, v] : cases)
            if (cls.contains(a, b)) return v;
        throw Error("NoMatchingCase", "no congruence case covers the given pair");
    }
};

namespace freysym_detail {

struct SplitRequest {};

// element = polynomial in (A,B) where a = a0 + p^m A, b = b0 + p^m B on the class
struct SymElem {
    ParamPolynomial poly;
    SymElem() = default;
    SymElem(int v) : poly(AN(v)) {}
    SymElem(long v) : poly(AN(v)) {}
    SymElem(ParamPolynomial p) : poly(std::move(p)) {}
    bool is_zero() const { return poly.is_zero(); }
    friend SymElem operator+(const SymElem& x, const SymElem& y) { return {x.poly + y.poly}; }
    friend SymElem operator-(const SymElem& x, const SymElem& y) { return {x.poly - y.poly}; }
    friend SymElem operator*(const SymElem& x, const SymElem& y) { return {x.poly * y.poly}; }
    SymElem operator-() const { return {-poly}; }
};

class SymbolicContext {
public:
    using Elem = SymElem;

    SymbolicContext(PrimeIdeal P) : P_(std::move(P)) {
        pi_ = P_.uniformizer();
        pi_inv_ = AN(1) / pi_;
    }

    int val(const Elem& e) const {
        if (e.poly.is_zero()) return TATE_INF_VAL;
        const AN& c00 = e.poly.coeff(0, 0);
        int vrest = TATE_INF_VAL;
        for (auto& [ij, c] : e.poly.terms()) {
            if (ij.first == 0 && ij.second == 0) continue;
            vrest = std::min(vrest, P_.valuation(c));
        }
        if (c00.is_zero() || P_.nf->coerce(c00).is_zero()) {
            if (vrest >= TATE_INF_VAL) return TATE_INF_VAL;
            throw SplitRequest{};
        }
        int v0 = P_.valuation(c00);
        if (v0 < vrest) return v0;
        throw SplitRequest{};
    }
    // threshold query: decidable in many cases where the exact valuation is not
    bool val_ge(const Elem& e, int k) const {
        if (e.poly.is_zero()) return true;
        int v0 = TATE_INF_VAL, vrest = TATE_INF_VAL;
        for (auto& [ij, c] : e.poly.terms()) {
            int v = P_.valuation(c);
            if (ij.first == 0 && ij.second == 0)
                v0 = v;
            else
                vrest = std::min(vrest, v);
        }
        if (v0 >= k && vrest >= k) return true;
        if (v0 < k && v0 < vrest) return false;
        throw SplitRequest{};
    }
    FqElem red(const Elem& e) const {
        if (e.poly.is_zero()) return P_.residue_field->zero();
        for (auto& [ij, c] : e.poly.terms()) {
            if (ij.first == 0 && ij.second == 0) continue;
            if (P_.valuation(c) < 1) throw SplitRequest{};
        }
        const AN& c00 = e.poly.coeff(0, 0);
        if (c00.is_zero() || P_.nf->coerce(c00).is_zero()) return P_.residue_field->zero();
        if (P_.valuation(c00) < 0) throw NotIntegralAtP("symbolic residue of non-integral element");
        return P_.residue(c00);
    }
    Elem lift(const FqElem& r) const { return {ParamPolynomial(P_.lift(r))}; }
    Elem pi() const { return {ParamPolynomial(pi_)}; }
    Elem div_pi(const Elem& e, int k) const {
        AN f(1);
        for (int i = 0; i < k; ++i) f = f * pi_inv_;
        AN ff = f;
        return {e.poly.map_coeffs([&](const AN& c) { return ff * c; })};
    }
    const Fq& fq() const { return *P_.residue_field; }
    long p() const { return P_.p.to_long(); }

private:
    PrimeIdeal P_;
    AN pi_, pi_inv_;
};

}  // namespace freysym_detail

// Per-class Tate over a prime of the base field; case splitting by Hensel-style
// refinement mod growing powers of p.  depth_bound per the design notes (default 12).
inline ConditionalValue<TateResult> symbolic_tate(const FreyFamily& fam, const PrimeIdeal& P,
                                                  int depth_bound = 12) {
    using namespace freysym_detail;
    SymbolicContext ctx(P);
    ConditionalValue<TateResult> out;
    std::deque<CongruenceClass> work;
    work.push_back(CongruenceClass{P.p, Int(0), Int(0), 0});
    while (!work.empty()) {
        CongruenceClass cls = work.front();
        work.pop_front();
        if (!fam.assumptions.admits(P.p, cls.a0, cls.b0, cls.m)) continue;
        // shift the model onto the class: a = a0 + p^m A, b = b0 + p^m B
        AN a0{Rat(cls.a0)}, b0{Rat(cls.b0)}, s{Rat(cls.modulus())};
        Weierstrass<SymElem> E;
        auto sh = [&](const ParamPolynomial& f) { return SymElem{f.shift_scale(a0, b0, s)}; };
        E.a1 = sh(fam.model.a1);
        E.a2 = sh(fam.model.a2);
        E.a3 = sh(fam.model.a3);
        E.a4 = sh(fam.model.a4);
        E.a6 = sh(fam.model.a6);
        try {
            TateResult r = tate_algorithm(ctx, E);
            out.cases.emplace_back(cls, r);
        } catch (const SplitRequest&) {
            if (cls.m >= depth_bound)
                throw UnresolvedCase("depth bound " + std::to_string(depth_bound) +
                                     " exceeded at " + cls.str());
            Int M = cls.modulus();
            long pl = P.p.to_long();
            for (long da = 0; da < pl; ++da)
                for (long db = 0; db < pl; ++db)
                    work.push_back(CongruenceClass{P.p, cls.a0 + Int(da) * M, cls.b0 + Int(db) * M,
                                                   cls.m + 1});
        }
    }
    return out;
}

// ---------- conductor assembly ----------

struct ConductorFormula {
    // fixed local exponents at the named primes, by congruence case
    struct FixedPart {
        PrimeIdeal prime;
        ConditionalValue<int> exponent;
    };
    std::vector<FixedPart> fixed;
    std::string radical_tail;  // symbolic: "rad_30(...)" description, exponent 1 per prime
};

// conductor exponents at all primes above the given rational primes
inline ConductorFormula conductor_formula(const FreyFamily& fam,
                                          const std::vector<Int>& bad_primes,
                                          int depth_bound = 12) {
    ConductorFormula out;
    for (auto& p : bad_primes) {
        for (auto& P : fam.nf->factor_prime(p)) {
            ConductorFormula::FixedPart part;
            part.prime = P;
            auto cv = symbolic_tate(fam, P, depth_bound);
            for (auto& [cls, tr] : cv.cases) part.exponent.cases.emplace_back(cls, tr.f);
            out.fixed.push_back(std::move(part));
        }
    }
    out.radical_tail = "rad_30";  // primes dividing the parameter forms but not 30
    return out;
}

// j-invariant integrality certificate.  A rational prime p > 5 can divide both the
// numerator c4^3 and the denominator disc of j at a coprime parameter pair only if a
// prime above p divides both Res_a(c4, disc)(b) and Res_b(c4, disc)(a): since g1, g2
// reduce to a-powers (resp. b-powers) at such a prime, p cannot divide a or b.  The
// certificate is therefore the intersection of the two resultant supports, together
// with the support of the constant prefactors.
inline std::set<Int> j_denominator_certificate(const FreyFamily& fam) {
    auto I = invariants(fam.model);
    auto substitute_one = [&](const ParamPolynomial& f, bool in_a) {
        int d = in_a ? f.deg_a() : f.deg_b();
        std::vector<AN> c(d + 1, AN(0));
        for (auto& [ij, coeff] : f.terms()) {
            int k = in_a ? ij.first : ij.second;
            c[k] = c[k] + coeff;
        }
        return Poly<AN>(c);
    };
    auto support_of = [&](const AN& x) {
        std::set<Int> sup;
        Rat nm = fam.nf->norm(x);
        if (nm.is_zero()) throw ZeroPolynomial("resultant vanished in j-certificate");
        for (auto& [p, e] : factor(nm.num())) sup.insert(p);
        for (auto& [p, e] : factor(nm.den())) sup.insert(p);
        return sup;
    };
    Poly<AN> c4a = substitute_one(I.c4, true), da = substitute_one(I.disc, true);
    std::set<Int> A = support_of(Poly<AN>::resultant(c4a, da));
    Poly<AN> c4b = substitute_one(I.c4, false), db = substitute_one(I.disc, false);
    std::set<Int> out;
    if (c4b.degree() > 0 || db.degree() > 0) {
        std::set<Int> B = support_of(Poly<AN>::resultant(c4b, db));
        for (auto& p : A)
            if (B.count(p)) out.insert(p);
    } else {
        out = A;
    }
    // constant prefactors (contents) of numerator and denominator
    for (auto& [ij, c] : I.c4.terms()) {
        for (auto& p : support_of(c))
            if (p == Int(2) || p == Int(3) || p == Int(5)) out.insert(p);
        break;
    }
    return out;
}

}  // namespace dforge
