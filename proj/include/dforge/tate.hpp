#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dforge/ellmodel.hpp"
#include "dforge/numberfield.hpp"

// Tate's algorithm over an abstract local context.  The context supplies exact
// valuations, residue reduction, lifting and division by the uniformizer; the same
// engine runs both on specialized curves (number field elements at a prime) and on
// parametrized families (polynomials in (a,b) with congruence-class splitting, see
// freysym.hpp, where indeterminate queries throw and the driver refines classes).

namespace dforge {

struct TateResult {
    std::string kodaira;   // "I0", "In", "II", ..., "In*", ..., "II*"
    int n = 0;             // the n of In / In*
    int f = 0;             // conductor exponent
    int vdisc = 0;         // valuation of the minimal discriminant
    bool split = false;    // for In: split multiplicative?
    int u_scalings = 0;    // pi-scalings needed for minimality
};

static constexpr int TATE_INF_VAL = 1 << 28;

namespace tate_detail {

// all roots in F_q of a polynomial (low-to-high coeffs), with multiplicities
inline std::vector<std::pair<FqElem, int>> fq_roots(const Fq& F, std::vector<FqElem> c) {
    std::vector<std::pair<FqElem, int>> out;
    for (auto& x : F.all_elements()) {
        int mult = 0;
        std::vector<FqElem> cur = c;
        while (cur.size() > 1) {
            FqElem acc(0);
            for (int i = static_cast<int>(cur.size()) - 1; i >= 0; --i) acc = acc * x + cur[i];
            if (!acc.is_zero()) break;
            std::vector<FqElem> quot(cur.size() - 1, FqElem(0));
            FqElem b(0);
            for (int i = static_cast<int>(cur.size()) - 1; i >= 1; --i) {
                b = (static_cast<size_t>(i) == cur.size() - 1) ? cur[i] : cur[i] + b * x;
                quot[i - 1] = b;
            }
            cur = quot;
            ++mult;
        }
        if (mult > 0) out.emplace_back(x, mult);
    }
    return out;
}

// distinct roots over the closure for Y^2 + bY + c
inline bool quadratic_separable(const Fq& F, const FqElem& b, const FqElem& c) {
    if (F.p() == 2) return !b.is_zero();
    return !(b * b - FqElem(4) * c).is_zero();
}
// any F_q root of an inseparable quadratic (it is the double root; always exists)
inline FqElem quadratic_double_root(const Fq& F, const FqElem& b, const FqElem& c) {
    for (auto& y : F.all_elements())
        if ((y * y + b * y + c).is_zero()) return y;
    throw Error("InternalTate", "double root of quadratic not found");
}
inline bool quadratic_has_root(const Fq& F, const FqElem& b, const FqElem& c) {
    for (auto& y : F.all_elements())
        if ((y * y + b * y + c).is_zero()) return true;
    return false;
}

// universal cubic discriminant (char-safe)
inline FqElem cubic_disc(const FqElem& A, const FqElem& B, const FqElem& C) {
    return FqElem(18) * A * B * C - FqElem(4) * A * A * A * C + A * A * B * B -
           FqElem(4) * B * B * B - FqElem(27) * C * C;
}

}  // namespace tate_detail

// Ctx requirements:
//   using Elem;
//   int val(const Elem&);            // exact valuation; TATE_INF_VAL for zero
//   bool val_ge(const Elem&, int k); // threshold query (weaker than exact val)
//   FqElem red(const Elem&);         // residue (caller guarantees val >= 0)
//   Elem lift(const FqElem&);
//   Elem pi() const;
//   Elem div_pi(const Elem&, int k); // exact division by pi^k
//   const Fq& fq() const;
//   long p() const;
// Exact valuations are only taken of the discriminant; every other test is a
// threshold, which is what keeps the parametrized contexts decidable.
template <class Ctx>
TateResult tate_algorithm(Ctx& ctx, Weierstrass<typename Ctx::Elem> E,
                          Weierstrass<typename Ctx::Elem>* minimal_out = nullptr) {
    using T = typename Ctx::Elem;
    using namespace tate_detail;
    const Fq& F = ctx.fq();
    TateResult R;
    int scalings = 0;

    auto finish = [&](const char* type, int n, int f, int vD) {
        R.kodaira = type;
        R.n = n;
        R.f = f;
        R.vdisc = vD;
        R.u_scalings = scalings;
        if (minimal_out) *minimal_out = E;
        return R;
    };

    // move the (unique, F_q-rational) singular point of the reduction to (0,0)
    auto move_singular_to_origin = [&]() {
        Weierstrass<FqElem> W{ctx.red(E.a1), ctx.red(E.a2), ctx.red(E.a3), ctx.red(E.a4),
                              ctx.red(E.a6)};
        for (auto& x0 : F.all_elements())
            for (auto& y0 : F.all_elements()) {
                FqElem oncurve = y0 * y0 + W.a1 * x0 * y0 + W.a3 * y0 -
                                 (((x0 + W.a2) * x0 + W.a4) * x0 + W.a6);
                if (!oncurve.is_zero()) continue;
                FqElem dx = W.a1 * y0 - (FqElem(3) * x0 * x0 + FqElem(2) * W.a2 * x0 + W.a4);
                FqElem dy = FqElem(2) * y0 + W.a1 * x0 + W.a3;
                if (!dx.is_zero() || !dy.is_zero()) continue;
                E = translate(E, ctx.lift(x0), T(0), ctx.lift(y0));
                if (!ctx.val_ge(E.a3, 1) || !ctx.val_ge(E.a4, 1) || !ctx.val_ge(E.a6, 1))
                    throw Error("InternalTate", "singular translation inconsistent");
                return;
            }
        throw Error("InternalTate", "singular point not found");
    };

    while (true) {
        auto I = invariants(E);
        int vD = ctx.val(I.disc);
        if (vD >= TATE_INF_VAL) throw Singular("tate: singular curve");
        if (vD == 0) return finish("I0", 0, 0, 0);

        if (!ctx.val_ge(I.c4, 1)) {
            // multiplicative: nodal tangents from T^2 + a1 T - a2 after recentering
            move_singular_to_origin();
            R.split = quadratic_has_root(F, ctx.red(E.a1), ctx.red(-E.a2));
            return finish("In", vD, 1, vD);
        }
        move_singular_to_origin();
        // kill the (double) tangent slope: s = root of S^2 + a1 S - a2 mod pi
        {
            FqElem al = quadratic_double_root(F, ctx.red(E.a1), ctx.red(-E.a2));
            E = translate(E, T(0), ctx.lift(al), T(0));
            if (!ctx.val_ge(E.a1, 1) || !ctx.val_ge(E.a2, 1))
                throw Error("InternalTate", "tangent normalization failed");
        }
        if (!ctx.val_ge(E.a6, 2)) return finish("II", 0, vD, vD);
        {
            auto I2 = invariants(E);
            if (!ctx.val_ge(I2.b8, 3)) return finish("III", 0, vD - 1, vD);
            if (!ctx.val_ge(I2.b6, 3)) return finish("IV", 0, vD - 2, vD);
        }
        // raise to pi^2 | a3, a4 and pi^3 | a6 via the double root of Y^2 + a3,1 Y - a6,2
        {
            FqElem q3 = ctx.red(ctx.div_pi(E.a3, 1));
            FqElem q6 = ctx.red(ctx.div_pi(E.a6, 2));
            FqElem dr = quadratic_double_root(F, q3, -q6);
            E = translate(E, T(0), T(0), ctx.pi() * ctx.lift(dr));
        }
        if (!ctx.val_ge(E.a1, 1) || !ctx.val_ge(E.a2, 1) || !ctx.val_ge(E.a3, 2) ||
            !ctx.val_ge(E.a4, 2) || !ctx.val_ge(E.a6, 3))
            throw Error("InternalTate", "normalization failed before the cubic step");
        // cubic P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3
        FqElem A = ctx.red(ctx.div_pi(E.a2, 1));
        FqElem B = ctx.red(ctx.div_pi(E.a4, 2));
        FqElem C = ctx.red(ctx.div_pi(E.a6, 3));
        if (!cubic_disc(A, B, C).is_zero()) return finish("I0*", 0, vD - 4, vD);
        auto roots = fq_roots(F, {C, B, A, FqElem(1)});
        FqElem rep(0);
        int repmult = 0;
        for (auto& [r0, m0] : roots)
            if (m0 >= 2) {
                rep = r0;
                repmult = m0;
            }
        if (repmult == 0)
            throw Error("InternalTate", "vanishing cubic discriminant without rational repeated root");

        if (repmult == 2) {
            // I_n^*: double root to the origin, then the alternating subloop
            E = translate(E, ctx.pi() * ctx.lift(rep), T(0), T(0));
            if (!ctx.val_ge(E.a2, 1) || ctx.val_ge(E.a2, 2) || !ctx.val_ge(E.a4, 3) ||
                !ctx.val_ge(E.a6, 4))
                throw Error("InternalTate", "In* entry normalization failed");
            int n = 1, mx = 2, my = 2;
            while (true) {
                // quadratic in Y: Y^2 + (a3/pi^my) Y - a6/pi^(mx+my)
                FqElem b3 = ctx.red(ctx.div_pi(E.a3, my));
                FqElem b6 = ctx.red(ctx.div_pi(E.a6, mx + my));
                if (quadratic_separable(F, b3, -b6)) return finish("In*", n, vD - 4 - n, vD);
                {
                    FqElem dr = quadratic_double_root(F, b3, -b6);
                    T t = ctx.lift(dr);
                    for (int i = 0; i < my; ++i) t = t * ctx.pi();
                    E = translate(E, T(0), T(0), t);
                }
                ++my;
                ++n;
                // quadratic in X: (a2/pi) X^2 + (a4/pi^(mx+1)) X + a6/pi^(mx+my)
                FqElem c2 = ctx.red(ctx.div_pi(E.a2, 1));
                FqElem c4q = ctx.red(ctx.div_pi(E.a4, mx + 1));
                FqElem c6q = ctx.red(ctx.div_pi(E.a6, mx + my));
                bool sep = (F.p() == 2) ? !c4q.is_zero()
                                        : !(c4q * c4q - FqElem(4) * c2 * c6q).is_zero();
                if (sep) return finish("In*", n, vD - 4 - n, vD);
                {
                    FqElem r0(0);
                    bool found = false;
                    for (auto& x : F.all_elements())
                        if ((c2 * x * x + c4q * x + c6q).is_zero()) {
                            r0 = x;
                            found = true;
                            break;
                        }
                    if (!found) throw Error("InternalTate", "In* X-quadratic double root missing");
                    T r = ctx.lift(r0);
                    for (int i = 0; i < mx; ++i) r = r * ctx.pi();
                    E = translate(E, r, T(0), T(0));
                }
                ++mx;
                ++n;
                if (n > 1000) throw Error("InternalTate", "In* subloop did not terminate");
            }
        }
        // triple root to the origin
        E = translate(E, ctx.pi() * ctx.lift(rep), T(0), T(0));
        if (!ctx.val_ge(E.a2, 2) || !ctx.val_ge(E.a4, 3) || !ctx.val_ge(E.a6, 4))
            throw Error("InternalTate", "triple-root normalization failed");
        {
            FqElem t3 = ctx.red(ctx.div_pi(E.a3, 2));
            FqElem t6 = ctx.red(ctx.div_pi(E.a6, 4));
            if (quadratic_separable(F, t3, -t6)) return finish("IV*", 0, vD - 6, vD);
            FqElem dr = quadratic_double_root(F, t3, -t6);
            E = translate(E, T(0), T(0), ctx.pi() * ctx.pi() * ctx.lift(dr));
        }
        if (!ctx.val_ge(E.a3, 3) || !ctx.val_ge(E.a6, 5))
            throw Error("InternalTate", "IV* exit normalization failed");
        if (!ctx.val_ge(E.a4, 4)) return finish("III*", 0, vD - 7, vD);
        if (!ctx.val_ge(E.a6, 6)) return finish("II*", 0, vD - 8, vD);
        // non-minimal: scale by pi and restart (ctx division keeps ring elements exact)
        E.a1 = ctx.div_pi(E.a1, 1);
        E.a2 = ctx.div_pi(E.a2, 2);
        E.a3 = ctx.div_pi(E.a3, 3);
        E.a4 = ctx.div_pi(E.a4, 4);
        E.a6 = ctx.div_pi(E.a6, 6);
        ++scalings;
        if (scalings > 40) throw Error("InternalTate", "minimalization did not terminate");
    }
}

// ---- specialized context over a number field prime ----

class NFLocalContext {
public:
    using Elem = AN;

    explicit NFLocalContext(PrimeIdeal P) : P_(std::move(P)) {
        pi_ = P_.uniformizer();
        pi_inv_ = AN(1) / pi_;
    }
    int val(const AN& x) const {
        if (P_.nf->coerce(x).is_zero()) return TATE_INF_VAL;
        return P_.valuation(x);
    }
    bool val_ge(const AN& x, int k) const { return val(x) >= k; }
    FqElem red(const AN& x) const { return P_.residue(x); }
    AN lift(const FqElem& r) const { return P_.lift(r); }
    AN pi() const { return pi_; }
    AN div_pi(const AN& x, int k) const {
        AN y = x;
        for (int i = 0; i < k; ++i) y = y * pi_inv_;
        return y;
    }
    const Fq& fq() const { return *P_.residue_field; }
    long p() const { return P_.p.to_long(); }
    const PrimeIdeal& prime() const { return P_; }

private:
    PrimeIdeal P_;
    AN pi_, pi_inv_;
};

inline TateResult tate_at_prime(const PrimeIdeal& P, const Weierstrass<AN>& E,
                                Weierstrass<AN>* minimal_out = nullptr) {
    NFLocalContext ctx(P);
    return tate_algorithm(ctx, E, minimal_out);
}

// ---- reduction data (type + trace) at a prime ----

struct ReductionData {
    enum class Type { Good, SplitMult, NonsplitMult, Additive } type;
    Int trace;   // listed integer; 0 for additive
    Int norm_p;  // N(P)
};

inline ReductionData reduction_data(const PrimeIdeal& P, const Weierstrass<AN>& E,
                                    CountMethod method = CountMethod::BSGS) {
    NFLocalContext ctx(P);
    Weierstrass<AN> M;
    TateResult t = tate_algorithm(ctx, E, &M);
    ReductionData out;
    out.norm_p = P.norm();
    if (t.kodaira == "I0") {
        Weierstrass<FqElem> red{P.residue(M.a1), P.residue(M.a2), P.residue(M.a3), P.residue(M.a4),
                                P.residue(M.a6)};
        Int N = ec_point_count(*P.residue_field, red, method);
        out.type = ReductionData::Type::Good;
        out.trace = out.norm_p + Int(1) - N;
        return out;
    }
    if (t.kodaira == "In") {
        out.type = t.split ? ReductionData::Type::SplitMult : ReductionData::Type::NonsplitMult;
        out.trace = t.split ? out.norm_p + Int(1) : -(out.norm_p + Int(1));
        return out;
    }
    out.type = ReductionData::Type::Additive;
    out.trace = Int(0);
    return out;
}

}  // namespace dforge
