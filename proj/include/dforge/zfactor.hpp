#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "dforge/fq.hpp"
#include "dforge/int.hpp"
#include "dforge/poly.hpp"

// Factorization of univariate integer polynomials: squarefree split, Hensel lifting
// of a mod-p factorization, Zassenhaus recombination. Degrees here stay small
// (min polys up to 16, Trager norms up to 64), so subset recombination is fine.

namespace dforge {

// polynomial with Int coefficients, helpers kept local to this header
using ZVec = std::vector<Int>;

inline ZVec zvec_from_qpoly(const QPoly& f) {
    if (!qpoly_is_integral(f)) throw std::domain_error("zvec_from_qpoly: non-integral");
    ZVec v(f.degree() + 1, Int(0));
    for (int i = 0; i <= f.degree(); ++i) v[i] = f[i].num();
    return v;
}

inline QPoly qpoly_from_zvec(const ZVec& v) {
    std::vector<Rat> c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = Rat(v[i]);
    return QPoly(std::move(c));
}

namespace zf_detail {

inline int zdeg(const ZVec& a) {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d].is_zero()) --d;
    return d;
}

inline ZVec zmul(const ZVec& a, const ZVec& b, const Int& mod) {
    int da = zdeg(a), db = zdeg(b);
    if (da < 0 || db < 0) return {};
    ZVec v(da + db + 1, Int(0));
    for (int i = 0; i <= da; ++i)
        for (int j = 0; j <= db; ++j) v[i + j] = (v[i + j] + a[i] * b[j]).fmod(mod);
    return v;
}

inline ZVec zsub(const ZVec& a, const ZVec& b, const Int& mod) {
    ZVec v(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < v.size(); ++i) {
        Int av = i < a.size() ? a[i] : Int(0), bv = i < b.size() ? b[i] : Int(0);
        v[i] = (av - bv).fmod(mod);
    }
    return v;
}

// remainder of a by monic-mod b (lead of b invertible mod `mod`)
inline ZVec zrem(ZVec a, const ZVec& b, const Int& mod) {
    int db = zdeg(b);
    Int linv = Int::invmod(b[db].fmod(mod), mod);
    for (int i = zdeg(a); i >= db; i = zdeg(a)) {
        Int f = (a[i] * linv).fmod(mod);
        if (!f.is_zero())
            for (int j = 0; j <= db; ++j) a[i - db + j] = (a[i - db + j] - f * b[j]).fmod(mod);
        a[i] = Int(0);
    }
    a.resize(std::max(zdeg(a) + 1, 0));
    return a;
}

inline ZVec zdivexact(const ZVec& a, const ZVec& b, const Int& mod) {
    // a = q*b mod `mod`, b has invertible lead; returns q
    ZVec r = a, q;
    int db = zdeg(b);
    Int linv = Int::invmod(b[db].fmod(mod), mod);
    int dq = zdeg(r) - db;
    if (dq < 0) return {};
    q.assign(dq + 1, Int(0));
    for (int i = zdeg(r); i >= db; i = zdeg(r)) {
        Int f = (r[i] * linv).fmod(mod);
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) r[i - db + j] = (r[i - db + j] - f * b[j]).fmod(mod);
        r[i] = Int(0);
        if (zdeg(r) < db) break;
    }
    return q;
}

inline ZVec fp_to_zvec(const FpPoly& f) {
    ZVec v(f.deg() + 1, Int(0));
    for (int i = 0; i <= f.deg(); ++i) v[i] = Int(static_cast<long>(f.c[i]));
    return v;
}

}  // namespace zf_detail

// Lift a coprime two-factor split f = g*h (mod p) to f = G*H (mod p^N), f monic mod p.
// Linear Hensel; g monic. Returns lifted (G, H).
inline std::pair<ZVec, ZVec> hensel_lift_pair(const ZVec& f, FpPoly g, FpPoly h, const Int& p,
                                              int steps) {
    using namespace zf_detail;
    u64 pp = static_cast<u64>(p.to_long());
    // Bezout: s*g + t*h = 1 mod p
    FpPoly s, t;
    {
        // extended euclid over F_p
        FpPoly a = g, b = h;
        FpPoly sa = fp_make({1}, pp), sb = fp_make({}, pp);
        FpPoly ta = fp_make({}, pp), tb = fp_make({1}, pp);
        auto fpsub = [&](const FpPoly& x, const FpPoly& y) {
            std::vector<u64> v(std::max(x.c.size(), y.c.size()), 0);
            for (size_t i = 0; i < v.size(); ++i) {
                u64 xv = i < x.c.size() ? x.c[i] : 0, yv = i < y.c.size() ? y.c[i] : 0;
                v[i] = (xv + pp - yv % pp) % pp;
            }
            return fp_make(std::move(v), pp);
        };
        while (!b.is_zero()) {
            FpPoly q, r;
            fp_divmod(a, b, q, r);
            FpPoly s2 = fpsub(sa, fp_mul(q, sb));
            FpPoly t2 = fpsub(ta, fp_mul(q, tb));
            a = b;
            b = r;
            sa = sb;
            sb = s2;
            ta = tb;
            tb = t2;
        }
        // a = gcd (unit); normalize to 1
        u64 inv = invmod_u64(a.c[a.deg()], pp);
        for (auto& x : sa.c) x = mulmod_u64(x, inv, pp);
        for (auto& x : ta.c) x = mulmod_u64(x, inv, pp);
        s = sa;  // s*g + t*h = 1 (mod p)
        t = ta;
    }
    ZVec G = fp_to_zvec(g), H = fp_to_zvec(h);
    Int mod = p;
    for (int k = 1; k < steps; ++k) {
        Int newmod = mod * p;
        // error e = (f - G*H)/mod  (exact integer division)
        ZVec GH = [&] {
            int dG = zdeg(G), dH = zdeg(H);
            ZVec v(dG + dH + 1, Int(0));
            for (int i = 0; i <= dG; ++i)
                for (int j = 0; j <= dH; ++j) v[i + j] += G[i] * H[j];
            return v;
        }();
        ZVec e(std::max(f.size(), GH.size()), Int(0));
        for (size_t i = 0; i < e.size(); ++i) {
            Int fv = i < f.size() ? f[i] : Int(0), gv = i < GH.size() ? GH[i] : Int(0);
            e[i] = (fv - gv).divexact(mod).fmod(p);
        }
        // delta_g = (s*e mod g), delta_h = t*e + g-quotient part, over F_p
        FpPoly ep = fp_make(
            [&] {
                std::vector<u64> v(e.size());
                for (size_t i = 0; i < e.size(); ++i) v[i] = static_cast<u64>(e[i].fmod(p).to_long());
                return v;
            }(),
            pp);
        // solve dg*h + dh*g = e (mod p) with deg dg < deg g: from Bezout, dg = t*e mod g
        FpPoly te = fp_mul(t, ep);
        FpPoly q, dg;
        fp_divmod(te, g, q, dg);
        FpPoly dh;
        {
            // dh = (e - dg*h)/g, exact over F_p
            FpPoly dgh = fp_mul(dg, h);
            std::vector<u64> v(std::max(ep.c.size(), dgh.c.size()), 0);
            for (size_t i = 0; i < v.size(); ++i) {
                u64 a1 = i < ep.c.size() ? ep.c[i] : 0, b1 = i < dgh.c.size() ? dgh.c[i] : 0;
                v[i] = (a1 + pp - b1) % pp;
            }
            FpPoly num = fp_make(std::move(v), pp), rr;
            fp_divmod(num, g, dh, rr);
            if (!rr.is_zero()) throw std::logic_error("hensel: inexact correction division");
        }
        // G += mod*dg, H += mod*dh
        auto addscaled = [&](ZVec& A, const FpPoly& d) {
            if (static_cast<int>(A.size()) < d.deg() + 1) A.resize(d.deg() + 1, Int(0));
            for (int i = 0; i <= d.deg(); ++i)
                A[i] = (A[i] + mod * Int(static_cast<long>(d.c[i]))).fmod(newmod);
        };
        addscaled(G, dg);
        addscaled(H, dh);
        mod = newmod;
    }
    return {G, H};
}

// Lift the full list of pairwise-coprime mod-p factors of monic f to mod p^steps.
inline std::vector<ZVec> hensel_lift_multi(const ZVec& f, std::vector<FpPoly> factors, const Int& p,
                                           int steps) {
    using namespace zf_detail;
    if (factors.size() == 1) {
        // normalize f mod p^steps to monic rep
        Int mod = Int::pow(p, steps);
        ZVec g = f;
        for (auto& c : g) c = c.fmod(mod);
        return {g};
    }
    // split list in two halves, multiply each mod p, lift pair, recurse
    size_t half = factors.size() / 2;
    FpPoly gl = factors[0];
    for (size_t i = 1; i < half; ++i) gl = fp_mul(gl, factors[i]);
    FpPoly hr = factors[half];
    for (size_t i = half + 1; i < factors.size(); ++i) hr = fp_mul(hr, factors[i]);
    auto [G, H] = hensel_lift_pair(f, gl, hr, p, steps);
    std::vector<FpPoly> left(factors.begin(), factors.begin() + half);
    std::vector<FpPoly> right(factors.begin() + half, factors.end());
    auto lg = hensel_lift_multi(G, left, p, steps);
    auto rg = hensel_lift_multi(H, right, p, steps);
    lg.insert(lg.end(), rg.begin(), rg.end());
    return lg;
}

// Factor a primitive squarefree integer polynomial (monic or not) into irreducibles over Z.
std::vector<QPoly> zassenhaus_squarefree(const QPoly& f_in);

// Full factorization over Q: returns monic irreducible factors with multiplicity
// (content and leading coefficient dropped).
inline std::vector<std::pair<QPoly, int>> qpoly_factor(const QPoly& f_in) {
    std::vector<std::pair<QPoly, int>> out;
    if (f_in.degree() < 1) return out;
    // make integral primitive
    QPoly f = Rat(qpoly_common_den(f_in)) * f_in;
    Int cont = zpoly_content(f);
    f = Rat(Int(1), cont) * f;
    // squarefree decomposition over Q via repeated gcd
    QPoly g = QPoly::gcd(f, f.derivative());
    std::vector<std::pair<QPoly, int>> sqf;
    if (g.degree() < 1) {
        sqf.emplace_back(f, 1);
    } else {
        QPoly w = f / g;
        int i = 1;
        while (w.degree() > 0) {
            QPoly y = QPoly::gcd(w, g);
            QPoly fac = w / y;
            if (fac.degree() > 0) sqf.emplace_back(fac, i);
            g = g / y;
            w = y;
            ++i;
        }
        if (g.degree() > 0) {
            // residual factor (cannot happen in characteristic 0 unless f had content)
            sqf.emplace_back(g, i);
        }
    }
    for (auto& [sf, mult] : sqf) {
        QPoly intsf = Rat(qpoly_common_den(sf)) * sf;
        Int c2 = zpoly_content(intsf);
        intsf = Rat(Int(1), c2) * intsf;
        for (auto& irr : zassenhaus_squarefree(intsf)) out.emplace_back(irr.monic(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.first.degree() < b.first.degree();
    });
    return out;
}

inline bool qpoly_irreducible(const QPoly& f) {
    if (f.degree() < 1) return false;
    auto fac = qpoly_factor(f);
    return fac.size() == 1 && fac[0].second == 1;
}

inline std::vector<QPoly> zassenhaus_squarefree(const QPoly& f_in) {
    QPoly f = f_in;
    int n = f.degree();
    if (n == 1) return {f};
    Int lc = f.lead().num();
    // pick p: odd, not dividing lc, f squarefree mod p
    Int p(3);
    FpPoly fp;
    std::vector<std::pair<FpPoly, int>> modfac;
    while (true) {
        if (!lc.divisible_by(p)) {
            bool ok = true;
            try {
                fp = fp_from_qpoly(f, static_cast<u64>(p.to_long()));
            } catch (...) {
                ok = false;
            }
            if (ok && fp.deg() == n) {
                FpPoly d = fp_derivative(fp);
                if (!d.is_zero() && fp_gcd(fp, d).deg() == 0) {
                    modfac = fp_factor(fp);
                    break;
                }
            }
        }
        p = p.next_prime();
    }
    if (modfac.size() == 1) return {f};  // irreducible mod p
    // Mignotte-style bound on factor coefficients: 2^n * ||f||_2 * |lc|
    Rat norm2(0);
    for (auto& c : f.coeffs()) norm2 += c * c;
    Int bound = norm2.num().isqrt() + Int(1);
    bound = Int::pow(Int(2), n) * bound * lc.abs() * Int(4);
    int steps = 1;
    Int pk = p;
    while (pk <= bound * Int(2)) {
        pk *= p;
        ++steps;
    }
    // normalize f monic mod p^steps scaled by lc: work with f* = lc^(n-1) f(x/lc) monic trick
    // avoided; instead lift factors of monic (f/lc mod p) against f directly scaled.
    // Simpler: scale to monic over Z if lc != 1 by the classical substitution.
    if (lc != Int(1)) {
        // y = lc*x: g(y) = lc^(n-1) f(y/lc) is monic with g_i = f_i * lc^(n-1-i)
        std::vector<Rat> cc(n + 1);
        for (int i = 0; i < n; ++i) cc[i] = f[i] * Rat(Int::pow(lc, static_cast<unsigned long>(n - 1 - i)));
        cc[n] = Rat(1);
        QPoly g(cc);
        auto sub = zassenhaus_squarefree(g);
        // map factors back: h(y) -> primitive part of h(lc*x)
        std::vector<QPoly> out;
        for (auto& h : sub) {
            QPoly hx = h.scale_arg(Rat(lc));
            QPoly integral = Rat(qpoly_common_den(hx)) * hx;
            Int c3 = zpoly_content(integral);
            out.push_back(Rat(Int(1), c3) * integral);
        }
        return out;
    }
    // monic path
    ZVec fz = zvec_from_qpoly(f);
    std::vector<FpPoly> fps;
    for (auto& [g, e] : modfac) fps.push_back(g);
    auto lifted = hensel_lift_multi(fz, fps, p, steps);
    Int mod = Int::pow(p, steps);
    auto center = [&](const Int& v) {
        Int r = v.fmod(mod);
        if (r * Int(2) > mod) r -= mod;
        return r;
    };
    // subset recombination
    int m = static_cast<int>(lifted.size());
    std::vector<bool> used(m, false);
    std::vector<QPoly> out;
    QPoly rem = f;
    for (int size = 1; size <= m; ++size) {
        bool progress = true;
        while (progress) {
            progress = false;
            // enumerate subsets of available indices of this cardinality
            std::vector<int> avail;
            for (int i = 0; i < m; ++i)
                if (!used[i]) avail.push_back(i);
            if (static_cast<int>(avail.size()) < size) break;
            std::vector<int> idx(size);
            std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
                if (pos == size) {
                    // multiply subset mod p^steps, center, test division
                    ZVec prod{Int(1)};
                    for (int j = 0; j < size; ++j) prod = zf_detail::zmul(prod, lifted[avail[idx[j]]], mod);
                    std::vector<Rat> c(prod.size());
                    for (size_t i2 = 0; i2 < prod.size(); ++i2) c[i2] = Rat(center(prod[i2]));
                    QPoly cand{c};
                    if (cand.degree() < 1) return false;
                    QPoly q, r;
                    QPoly::divmod(rem, cand, q, r);
                    if (r.is_zero()) {
                        out.push_back(cand);
                        rem = q;
                        for (int j = 0; j < size; ++j) used[avail[idx[j]]] = true;
                        return true;
                    }
                    return false;
                }
                for (int s2 = start; s2 < static_cast<int>(avail.size()); ++s2) {
                    idx[pos] = s2;
                    if (rec(pos + 1, s2 + 1)) return true;
                }
                return false;
            };
            if (rec(0, 0)) progress = true;
            if (rem.degree() == 0) break;
        }
        if (rem.degree() == 0) break;
    }
    if (rem.degree() > 0) out.push_back(rem);
    return out;
}

}  // namespace dforge
