#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dforge/errors.hpp"
#include "dforge/fq.hpp"
#include "dforge/int.hpp"
#include "dforge/poly.hpp"
#include "dforge/zfactor.hpp"

// Number fields presented as Q[x]/(m) for a monic irreducible integer polynomial m.
// Elements are rational vectors in the power basis.  Rational primes are factored
// with Dedekind's criterion; each prime ideal carries Hensel-lifted local data
// (the p-adic factor of m) from which valuations and residue maps are computed.

namespace dforge {

class NumberField;
using NFPtr = std::shared_ptr<const NumberField>;

class AlgebraicNumber {
public:
    AlgebraicNumber() : co_{Rat(0)} {}
    AlgebraicNumber(long v) : co_{Rat(v)} {}
    AlgebraicNumber(int v) : co_{Rat(v)} {}
    AlgebraicNumber(Rat v) : co_{std::move(v)} {}
    AlgebraicNumber(NFPtr nf, std::vector<Rat> coords) : nf_(std::move(nf)), co_(std::move(coords)) {}

    const NFPtr& parent() const { return nf_; }
    bool is_rational_constant() const { return nf_ == nullptr; }
    const std::vector<Rat>& coords() const { return co_; }

    bool is_zero() const {
        for (auto& c : co_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_one() const;
    Rat rational_value() const {
        for (size_t i = 1; i < co_.size(); ++i)
            if (!co_[i].is_zero()) throw Error("NotRational", "element is not rational");
        return co_.empty() ? Rat(0) : co_[0];
    }

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
    AlgebraicNumber operator-() const {
        AlgebraicNumber r = *this;
        for (auto& c : r.co_) c = -c;
        return r;
    }
    AlgebraicNumber& operator+=(const AlgebraicNumber& o) { return *this = *this + o; }
    AlgebraicNumber& operator-=(const AlgebraicNumber& o) { return *this = *this - o; }
    AlgebraicNumber& operator*=(const AlgebraicNumber& o) { return *this = *this * o; }
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).is_zero(); }
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const AlgebraicNumber& a) { return os << a.str(); }

private:
    NFPtr nf_;              // null: rational constant (co_ has one entry)
    std::vector<Rat> co_;   // power-basis coordinates
};

using AN = AlgebraicNumber;

class PrimeIdeal;

class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    // Factory; verifies monicity and irreducibility.
    static NFPtr create(const QPoly& min_poly, std::string name = "");
    // Used by bridges whose construction already proves irreducibility (primitive element
    // of a field of the same dimension); skips the Zassenhaus check.
    static NFPtr create_trusted(const QPoly& min_poly, std::string name = "") {
        if (min_poly.degree() < 1) throw NotIrreducible("constant polynomial");
        if (!(min_poly.lead() == Rat(1)) || !qpoly_is_integral(min_poly)) throw NotMonic(min_poly.str());
        return NFPtr(new NumberField(min_poly, std::move(name)));
    }

    const QPoly& min_poly() const { return m_; }
    int degree() const { return n_; }
    const std::string& name() const { return name_; }
    bool is_rationals() const { return n_ == 1; }

    AN zero() const { return element(std::vector<Rat>(n_, Rat(0))); }
    AN one() const {
        std::vector<Rat> v(n_, Rat(0));
        v[0] = Rat(1);
        return element(v);
    }
    AN gen() const {
        std::vector<Rat> v(n_, Rat(0));
        if (n_ == 1)
            v[0] = Rat(0);
        else
            v[1] = Rat(1);
        return element(v);
    }
    AN element(std::vector<Rat> coords) const {
        coords.resize(n_, Rat(0));
        return AN(shared_from_this(), std::move(coords));
    }
    AN from_qpoly(const QPoly& f) const {
        QPoly r = f % m_;
        std::vector<Rat> v(n_, Rat(0));
        for (int i = 0; i <= r.degree(); ++i) v[i] = r[i];
        return element(std::move(v));
    }
    AN coerce(const AN& a) const {
        if (a.parent().get() == this) return a;
        if (a.is_rational_constant()) {
            std::vector<Rat> v(n_, Rat(0));
            v[0] = a.coords().empty() ? Rat(0) : a.coords()[0];
            return element(std::move(v));
        }
        throw Error("FieldMismatch", "element belongs to a different field");
    }

    AN add(const AN& A, const AN& B) const {
        AN a = coerce(A), b = coerce(B);
        std::vector<Rat> v(n_);
        for (int i = 0; i < n_; ++i) v[i] = a.coords()[i] + b.coords()[i];
        return element(std::move(v));
    }
    AN sub(const AN& A, const AN& B) const {
        AN a = coerce(A), b = coerce(B);
        std::vector<Rat> v(n_);
        for (int i = 0; i < n_; ++i) v[i] = a.coords()[i] - b.coords()[i];
        return element(std::move(v));
    }
    AN mul(const AN& A, const AN& B) const {
        AN a = coerce(A), b = coerce(B);
        QPoly pa(std::vector<Rat>(a.coords())), pb(std::vector<Rat>(b.coords()));
        return from_qpoly(pa * pb);
    }
    AN inv(const AN& A) const {
        AN a = coerce(A);
        if (a.is_zero()) throw ZeroElement("inverse of zero");
        // extended Euclid in Q[x] mod m
        QPoly r0 = m_, r1(std::vector<Rat>(a.coords()));
        QPoly s0, s1(Rat(1));
        while (!r1.is_zero() && r1.degree() > 0) {
            QPoly q, r;
            QPoly::divmod(r0, r1, q, r);
            QPoly s2 = s0 - q * s1;
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if (r1.is_zero()) throw Error("NotInvertible", "gcd with min_poly nontrivial");
        Rat c = r1[0];
        return from_qpoly(Rat(1) / c * s1);
    }

    QPoly to_qpoly(const AN& a) const { return QPoly(std::vector<Rat>(coerce(a).coords())); }

    Rat norm(const AN& A) const {
        AN a = coerce(A);
        QPoly pa = to_qpoly(a);
        if (pa.is_zero()) return Rat(0);
        Rat r = QPoly::resultant(m_, pa);
        return r;  // m monic: Res(m, a) = prod a(roots) = N(a)
    }
    Rat trace(const AN& A) const {
        AN a = coerce(A);
        // tr = sum over basis action; use Newton: tr(theta^k) precomputed
        ensure_power_traces();
        Rat t(0);
        for (int i = 0; i < n_; ++i) t += a.coords()[i] * power_traces_[i];
        return t;
    }
    // characteristic polynomial of multiplication by a (degree n, monic)
    QPoly char_poly(const AN& A) const;

    // All roots of min_poly living inside this field (== automorphisms by theta -> root).
    std::vector<AN> roots_of_min_poly_in_field() const;

    // the automorphism sending gen() to `image`, applied to a
    AN apply_automorphism(const AN& image, const AN& a) const {
        QPoly pa = to_qpoly(a);
        return pa.eval(coerce(image));
    }

    // Denominator structure: least N with N*a in Z[theta].
    Int denominator(const AN& a) const {
        AN ca = coerce(a);
        Int d(1);
        for (auto& c : ca.coords()) d = Int::lcm(d, c.den());
        return d;
    }
    // integral over Z (monic integer characteristic polynomial)
    bool is_integral(const AN& a) const { return integral_test(a); }

    // ---- prime ideals ----
    std::vector<PrimeIdeal> factor_prime(const Int& p) const;

    // Alternative monogenic presentations Q(theta') used when p divides [O : Z[theta]].
    // theta' is given in primary power-basis coordinates; its char poly must be irreducible.
    struct Presentation {
        QPoly min_poly;
        std::vector<std::vector<Rat>> from_primary;  // primary coords -> theta'-power coords
    };
    void add_presentation(const AN& theta_alt) const;
    const std::vector<Presentation>& presentations() const { return presentations_; }

    mutable std::vector<AN> cached_automorphisms;  // optionally provided by bridges

private:
    friend class PrimeIdeal;
    NumberField(QPoly m, std::string name) : m_(std::move(m)), name_(std::move(name)) {
        n_ = m_.degree();
    }
    bool integral_test(const AN& a) const {
        QPoly cp = char_poly(a);
        for (int i = 0; i < cp.degree(); ++i)
            if (!cp[i].is_integer()) return false;
        return true;
    }
    void ensure_power_traces() const {
        if (!power_traces_.empty()) return;
        // Newton's identities: t_k = tr(theta^k); p_k + e_1 p_{k-1} + ... = 0
        std::vector<Rat> e(n_ + 1, Rat(0));  // m = x^n + e_1 x^{n-1} + ...
        for (int i = 0; i < n_; ++i) e[n_ - i] = m_[i];
        std::vector<Rat> t(n_, Rat(0));
        t[0] = Rat(n_);
        for (int k = 1; k < n_; ++k) {
            Rat s = Rat(-k) * e[k];
            for (int i = 1; i < k; ++i) s -= e[i] * t[k - i];
            t[k] = s;
        }
        power_traces_ = t;
    }
    QPoly m_;
    int n_;
    std::string name_;
    mutable std::vector<Rat> power_traces_;
    mutable std::vector<Presentation> presentations_;
};

// Solve M x = b by Gaussian elimination over Q; M square nonsingular.
inline std::vector<std::vector<Rat>> rat_matrix_inverse(std::vector<std::vector<Rat>> M) {
    int n = static_cast<int>(M.size());
    std::vector<std::vector<Rat>> I(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) I[i][i] = Rat(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!M[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw Error("SingularMatrix", "rat_matrix_inverse");
        std::swap(M[piv], M[col]);
        std::swap(I[piv], I[col]);
        Rat d = M[col][col];
        for (int j = 0; j < n; ++j) {
            M[col][j] /= d;
            I[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || M[r][col].is_zero()) continue;
            Rat f = M[r][col];
            for (int j = 0; j < n; ++j) {
                M[r][j] -= f * M[col][j];
                I[r][j] -= f * I[col][j];
            }
        }
    }
    return I;
}

inline bool AlgebraicNumber::is_one() const {
    if (co_.empty()) return false;
    if (!(co_[0] == Rat(1))) return false;
    for (size_t i = 1; i < co_.size(); ++i)
        if (!co_[i].is_zero()) return false;
    return true;
}

inline AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    const NumberField* f = a.parent() ? a.parent().get() : b.parent().get();
    if (!f) return AlgebraicNumber(a.coords()[0] + b.coords()[0]);
    return f->add(a, b);
}
inline AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    const NumberField* f = a.parent() ? a.parent().get() : b.parent().get();
    if (!f) return AlgebraicNumber(a.coords()[0] - b.coords()[0]);
    return f->sub(a, b);
}
inline AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    const NumberField* f = a.parent() ? a.parent().get() : b.parent().get();
    if (!f) return AlgebraicNumber(a.coords()[0] * b.coords()[0]);
    return f->mul(a, b);
}
inline AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    const NumberField* f = a.parent() ? a.parent().get() : b.parent().get();
    if (!f) return AlgebraicNumber(a.coords()[0] / b.coords()[0]);
    return f->mul(a, f->inv(b));
}

inline std::string AlgebraicNumber::str() const {
    if (is_rational_constant()) return co_[0].str();
    std::string s = "(";
    for (size_t i = 0; i < co_.size(); ++i) s += (i ? "," : "") + co_[i].str();
    return s + ")";
}

inline QPoly NumberField::char_poly(const AN& A) const {
    AN a = coerce(A);
    QPoly pa = to_qpoly(a);
    // char poly = Res_x(m(x), y - a(x)) as poly in y; compute via resultant over Q(y):
    // use the multiplication-matrix determinant instead (Hessenberg would do; n small).
    // Build multiplication matrix M: columns = a*theta^j in power basis.
    std::vector<std::vector<Rat>> M(n_, std::vector<Rat>(n_, Rat(0)));
    AN cur = a;
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) M[i][j] = cur.coords()[i];
        cur = mul(cur, gen());
    }
    // char poly of M via Faddeev-LeVerrier (exact over Q, n <= 16 fine)
    std::vector<std::vector<Rat>> Mk = M;
    std::vector<Rat> c(n_ + 1, Rat(0));
    c[n_] = Rat(1);
    std::vector<std::vector<Rat>> I(n_, std::vector<Rat>(n_, Rat(0)));
    for (int i = 0; i < n_; ++i) I[i][i] = Rat(1);
    std::vector<std::vector<Rat>> Ak = M;
    for (int k = 1; k <= n_; ++k) {
        Rat tr(0);
        for (int i = 0; i < n_; ++i) tr += Ak[i][i];
        Rat ck = -(tr / Rat(k));
        c[n_ - k] = ck;
        if (k == n_) break;
        // Ak+1 = M*(Ak + ck*I)
        std::vector<std::vector<Rat>> B(n_, std::vector<Rat>(n_, Rat(0)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) B[i][j] = Ak[i][j] + (i == j ? ck : Rat(0));
        std::vector<std::vector<Rat>> C(n_, std::vector<Rat>(n_, Rat(0)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                Rat s(0);
                for (int l = 0; l < n_; ++l) s += M[i][l] * B[l][j];
                C[i][j] = s;
            }
        Ak = C;
    }
    return QPoly(std::vector<Rat>(c.begin(), c.end()));
}

inline NFPtr NumberField::create(const QPoly& min_poly, std::string name) {
    if (min_poly.degree() < 1) throw NotIrreducible("constant polynomial");
    if (!(min_poly.lead() == Rat(1))) throw NotMonic(min_poly.str());
    if (!qpoly_is_integral(min_poly)) throw NotMonic("non-integer coefficients");
    if (min_poly.degree() > 1 && !qpoly_irreducible(min_poly)) throw NotIrreducible(min_poly.str());
    return NFPtr(new NumberField(min_poly, std::move(name)));
}

// ---------------- prime ideals with Hensel-lifted local data ----------------

class PrimeIdeal {
public:
    NFPtr nf;
    Int p;         // residue characteristic
    int e = 1;     // ramification index
    int f = 1;     // residue degree
    QPoly gbar;    // irreducible factor of the presentation min poly mod p (coeffs in [0,p))
    std::shared_ptr<Fq> residue_field;
    // presentation actually used for the local data (0 = the field's own power basis)
    int presentation_index = 0;

    Int norm() const { return Int::pow(p, f); }
    std::string str() const {
        return "(" + p.str() + ", deg " + std::to_string(f) + ", e " + std::to_string(e) + ", g=" +
               gbar.str() + ")";
    }
    bool same_as(const PrimeIdeal& other) const {
        return nf == other.nf && p == other.p && e == other.e && f == other.f && gbar == other.gbar;
    }

    // valuation of a nonzero element (fractional sense)
    int valuation(const AN& a) const;
    // residue of a P-integral element in O/P
    FqElem residue(const AN& a) const;
    // lift of a residue-field element back to the field (polynomial lift)
    AN lift(const FqElem& r) const;
    // a uniformizer (valuation exactly 1)
    AN uniformizer() const;

private:
    friend class NumberField;
    // local factor of the presentation poly over Z_p to precision p^prec, plus CRT idempotent
    mutable ZVec local_factor_;       // G_i, monic, degree e*f
    mutable ZVec idempotent_poly_;    // E(x) with E=1 on this branch, 0 on the others
    mutable int prec_ = 0;
    mutable std::vector<std::pair<FpPoly, int>> all_factors_;  // pres poly mod p, with mult
    mutable int index_in_factors_ = 0;
    QPoly pres_min_;                                           // presentation min poly
    std::shared_ptr<std::vector<std::vector<Rat>>> from_primary_;  // null for primary
    std::shared_ptr<std::vector<std::vector<Rat>>> to_primary_;
    QPoly pres_poly(const AN& a) const {
        if (!from_primary_) return nf->to_qpoly(a);
        const auto& M = *from_primary_;
        int n = nf->degree();
        std::vector<Rat> v(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v[i] += M[i][j] * a.coords()[j];
        return QPoly(v);
    }
    AN from_pres_poly(const QPoly& y) const {
        if (!to_primary_) return nf->from_qpoly(y);
        const auto& M = *to_primary_;
        int n = nf->degree();
        std::vector<Rat> in(n, Rat(0));
        QPoly r = y % pres_min_;
        for (int i = 0; i <= r.degree(); ++i) in[i] = r[i];
        std::vector<Rat> v(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v[i] += M[i][j] * in[j];
        return nf->element(std::move(v));
    }
    void ensure_local(int need_prec) const;
    int local_valuation(const QPoly& a) const;
    FqElem reduce_mod_p(const QPoly& y) const {
        // y must have p-free denominators; image of theta is t in F_p[t]/(gbar)
        u64 pp = static_cast<u64>(p.to_long());
        FpPoly yp = fp_from_qpoly(y, pp);
        FpPoly gb = fp_from_qpoly(gbar, pp);
        FpPoly r = fp_mod(yp, gb);
        std::vector<u64> v(f, 0);
        for (int i = 0; i <= r.deg(); ++i) v[i] = r.c[i];
        return residue_field->from_vec(std::move(v));
    }
};

namespace nf_detail {

// Dedekind's criterion: does p divide [O_K : Z[theta]] for m = min poly of theta?
// Returns factor list of m mod p as (gbar_i, e_i); sets index_divisor flag.
inline std::vector<std::pair<FpPoly, int>> dedekind(const QPoly& m, const Int& p, bool& index_divisor) {
    u64 pp = static_cast<u64>(p.to_long());
    FpPoly mbar = fp_from_qpoly(m, pp);
    auto fac = fp_factor(mbar);
    // g* = prod gbar_i (lift), h* = prod gbar_i^{e_i - 1} (lift), F = (g*h* - m)/p
    ZVec gstar{Int(1)}, hstar{Int(1)};
    Int big = Int::pow(p, 40);  // plenty; exact arithmetic below uses true integers
    for (auto& [g, e] : fac) {
        ZVec gz = zf_detail::fp_to_zvec(g);
        gstar = zf_detail::zmul(gstar, gz, big);
        for (int i = 1; i < e; ++i) hstar = zf_detail::zmul(hstar, gz, big);
    }
    // F = (gstar*hstar - m)/p mod p
    ZVec gh = zf_detail::zmul(gstar, hstar, big);
    ZVec mz = zvec_from_qpoly(m);
    std::vector<u64> Fv(std::max(gh.size(), mz.size()), 0);
    for (size_t i = 0; i < Fv.size(); ++i) {
        Int a = i < gh.size() ? gh[i] : Int(0), b = i < mz.size() ? mz[i] : Int(0);
        Int d = (a - b).divexact(p).fmod(p);
        Fv[i] = static_cast<u64>(d.to_long());
    }
    FpPoly F = fp_make(std::move(Fv), pp);
    FpPoly gbarp = fp_from_qpoly(qpoly_from_zvec(gstar), pp);
    FpPoly hbarp = fp_from_qpoly(qpoly_from_zvec(hstar), pp);
    FpPoly d1 = fp_gcd(F, gbarp);
    FpPoly d2 = fp_gcd(d1, hbarp);
    index_divisor = d2.deg() > 0;
    return fac;
}

}  // namespace nf_detail

inline void NumberField::add_presentation(const AN& theta_alt) const {
    AN th = coerce(theta_alt);
    QPoly cp = char_poly(th);
    if (!qpoly_is_integral(cp)) throw Error("BadPresentation", "generator not integral");
    if (!qpoly_irreducible(cp)) throw Error("BadPresentation", "generator not primitive");
    // to_primary: columns are th^j in primary coords
    std::vector<std::vector<Rat>> T(n_, std::vector<Rat>(n_, Rat(0)));
    AN cur = one();
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) T[i][j] = cur.coords()[i];
        cur = mul(cur, th);
    }
    Presentation pr;
    pr.min_poly = cp;
    pr.from_primary = rat_matrix_inverse(T);
    presentations_.push_back(std::move(pr));
}

inline std::vector<PrimeIdeal> NumberField::factor_prime(const Int& p) const {
    if (!p.is_probab_prime()) throw Error("NotPrime", p.str());
    // try primary presentation, then registered alternates
    for (int pi = -1; pi < static_cast<int>(presentations_.size()); ++pi) {
        const QPoly& mp = pi < 0 ? m_ : presentations_[pi].min_poly;
        bool bad = false;
        auto fac = nf_detail::dedekind(mp, p, bad);
        if (bad) continue;
        std::vector<PrimeIdeal> out;
        int idx = 0;
        std::shared_ptr<std::vector<std::vector<Rat>>> fromp, top;
        if (pi >= 0) {
            fromp = std::make_shared<std::vector<std::vector<Rat>>>(presentations_[pi].from_primary);
            top = std::make_shared<std::vector<std::vector<Rat>>>(rat_matrix_inverse(presentations_[pi].from_primary));
        }
        for (auto& [g, e] : fac) {
            PrimeIdeal P;
            P.nf = shared_from_this();
            P.p = p;
            P.e = e;
            P.f = g.deg();
            P.presentation_index = pi + 1;
            P.pres_min_ = mp;
            P.from_primary_ = fromp;
            P.to_primary_ = top;
            std::vector<Rat> gc(g.deg() + 1);
            for (int i = 0; i <= g.deg(); ++i) gc[i] = Rat(Int(static_cast<long>(g.c[i])));
            P.gbar = QPoly(gc);
            std::vector<u64> modulus(g.c.begin(), g.c.end());
            if (P.f == 1)
                P.residue_field = std::make_shared<Fq>(static_cast<u64>(p.to_long()));
            else
                P.residue_field = std::make_shared<Fq>(static_cast<u64>(p.to_long()), modulus);
            P.all_factors_ = fac;
            P.index_in_factors_ = idx++;
            out.push_back(std::move(P));
        }
        return out;
    }
    throw IndexDivisor("p=" + p.str() + " divides the index of every presentation of " + name_);
}

inline void PrimeIdeal::ensure_local(int need_prec) const {
    if (prec_ >= need_prec) return;
    int steps = std::max(need_prec, 8);
    // group factors: this one (with multiplicity) vs the rest
    u64 pp = static_cast<u64>(p.to_long());
    FpPoly mine = fp_from_qpoly(gbar, pp);
    FpPoly self = mine;
    for (int i = 1; i < e; ++i) self = fp_mul(self, mine);
    FpPoly rest = fp_make({1}, pp);
    for (size_t i = 0; i < all_factors_.size(); ++i) {
        if (static_cast<int>(i) == index_in_factors_) continue;
        const auto& [g, mult] = all_factors_[i];
        FpPoly ge = g;
        for (int k = 1; k < mult; ++k) ge = fp_mul(ge, g);
        rest = fp_mul(rest, ge);
    }
    ZVec mz = zvec_from_qpoly(pres_min_);
    if (rest.deg() == 0) {
        Int mod = Int::pow(p, steps);
        ZVec G = mz;
        for (auto& c : G) c = c.fmod(mod);
        local_factor_ = G;
        idempotent_poly_ = ZVec{Int(1)};
        prec_ = steps;
        return;
    }
    auto [G, H] = hensel_lift_pair(mz, self, rest, p, steps);
    local_factor_ = G;
    // idempotent: E = t*H with s*G + t*H = 1 mod p^steps, computed by lifting Bezout:
    // easier: E = (t mod p)*H then refine by Newton: E <- E^2*(3-2E) mod (m, p^k)
    u64 ppu = pp;
    FpPoly Gp = fp_make(
        [&] {
            std::vector<u64> v(G.size());
            for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<u64>(G[i].fmod(p).to_long());
            return v;
        }(),
        ppu);
    FpPoly Hp = fp_make(
        [&] {
            std::vector<u64> v(H.size());
            for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<u64>(H[i].fmod(p).to_long());
            return v;
        }(),
        ppu);
    // Bezout over F_p
    FpPoly a = Gp, b = Hp, sa = fp_make({1}, ppu), sb = fp_make({}, ppu);
    auto fpsub2 = [&](const FpPoly& x, const FpPoly& y) {
        std::vector<u64> v(std::max(x.c.size(), y.c.size()), 0);
        for (size_t i = 0; i < v.size(); ++i) {
            u64 xv = i < x.c.size() ? x.c[i] : 0, yv = i < y.c.size() ? y.c[i] : 0;
            v[i] = (xv + ppu - yv % ppu) % ppu;
        }
        return fp_make(std::move(v), ppu);
    };
    while (!b.is_zero()) {
        FpPoly q, r;
        fp_divmod(a, b, q, r);
        FpPoly s2 = fpsub2(sa, fp_mul(q, sb));
        a = b;
        b = r;
        sa = sb;
        sb = s2;
    }
    u64 inv = invmod_u64(a.c[a.deg()], ppu);
    for (auto& x : sa.c) x = mulmod_u64(x, inv, ppu);
    // sa*G = 1 mod (H, p)  => E0 = sa*G is 1 mod H-branch... we want E = 1 on OUR branch:
    // our branch is G; an idempotent that is 1 mod G and 0 mod H is E = tb*H where tb*H=1 mod G.
    // sa satisfies sa*G + (something)*H = 1, i.e. sa*G = 1 mod H. So sa*G is the idempotent of
    // the H-branch; our E = 1 - sa*G mod (m, p^k), refined by Newton iteration.
    Int mod = Int::pow(p, steps);
    ZVec saz = zf_detail::fp_to_zvec(sa);
    ZVec E0 = zf_detail::zmul(saz, G, mod);
    // E = 1 - E0 mod m
    ZVec one{Int(1)};
    ZVec E = zf_detail::zsub(one, E0, mod);
    E = zf_detail::zrem(E, mz, mod);
    // Newton refinement: E <- 3E^2 - 2E^3 (idempotent lifting), few rounds
    for (int it = 0; it < steps; ++it) {
        ZVec E2 = zf_detail::zrem(zf_detail::zmul(E, E, mod), mz, mod);
        ZVec E3 = zf_detail::zrem(zf_detail::zmul(E2, E, mod), mz, mod);
        ZVec newE(std::max(E2.size(), E3.size()), Int(0));
        for (size_t i = 0; i < newE.size(); ++i) {
            Int a2 = i < E2.size() ? E2[i] : Int(0), a3 = i < E3.size() ? E3[i] : Int(0);
            newE[i] = (Int(3) * a2 - Int(2) * a3).fmod(mod);
        }
        if (newE == E) break;
        E = newE;
    }
    idempotent_poly_ = E;
    prec_ = steps;
}

inline int PrimeIdeal::local_valuation(const QPoly& a) const {
    // v_P via v_p(Res(G, y)) = f * v_P(y(theta)) for integral y, shifting off denominators.
    Int d = qpoly_common_den(a);
    QPoly y = Rat(d) * a;
    int vd = d.val(p);
    for (int attempt = 0; attempt < 10; ++attempt) {
        int pr = std::max(prec_, 16 << attempt);
        ensure_local(pr);
        QPoly G = qpoly_from_zvec(local_factor_);
        Rat res = QPoly::resultant(G, y);
        if (res.is_zero()) continue;  // accidental cancellation mod p^prec, retry deeper
        Int num = res.num();
        int v = num.val(p);
        if (v + 2 < prec_) {
            if (v % f != 0) throw Error("InternalValuation", "resultant valuation not divisible by f");
            return v / f - e * vd;
        }
    }
    throw Error("PrecisionExhausted", "valuation needs more p-adic precision");
}

inline int PrimeIdeal::valuation(const AN& a_in) const {
    AN a = nf->coerce(a_in);
    if (a.is_zero()) throw ZeroElement("valuation of zero");
    return local_valuation(pres_poly(a));
}

inline FqElem PrimeIdeal::residue(const AN& a_in) const {
    AN a = nf->coerce(a_in);
    if (a.is_zero()) return residue_field->zero();
    QPoly ap = pres_poly(a);
    Int den = qpoly_common_den(ap);
    int k = den.val(p);
    if (k == 0) return reduce_mod_p(ap);  // direct reduction mod (p, gbar)
    if (valuation(a) < 0) throw NotIntegralAtP("element has negative valuation");
    // P-integral but with p-denominators: project onto this branch with the CRT idempotent,
    // where the p-power divides out exactly (Z_p[theta] is maximal here by Dedekind).
    int need = 2 * k * e + 16;
    ensure_local(need);
    Int mod = Int::pow(p, prec_);
    Int dprime = den.remove(p);
    Int pk = Int::pow(p, k);
    QPoly ypoly = Rat(den) * ap;  // integer polynomial
    ZVec y = zvec_from_qpoly(ypoly);
    for (auto& c : y) c = c.fmod(mod);
    ZVec b = zf_detail::zrem(zf_detail::zmul(y, idempotent_poly_, mod), local_factor_, mod);
    // divide by p^k exactly, then by the p-free denominator
    Int modk = Int::pow(p, prec_ - k);
    Int dinv = Int::invmod(dprime, modk);
    std::vector<Rat> cr(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
        if (!b[i].divisible_by(pk)) throw Error("InternalResidue", "branch projection not divisible by p^k");
        cr[i] = Rat((b[i].divexact(pk) * dinv).fmod(modk));
    }
    return reduce_mod_p(QPoly(cr));
}

inline AN PrimeIdeal::lift(const FqElem& r) const {
    FqElem x = residue_field->coerce(r);
    std::vector<Rat> v(nf->degree(), Rat(0));
    for (size_t i = 0; i < x.rep().size() && i < v.size(); ++i) v[i] = Rat(Int(static_cast<long>(x.rep()[i])));
    return from_pres_poly(QPoly(v));
}

// Lagrange interpolation through integer sample points (exact).
inline QPoly qpoly_interpolate(const std::vector<long>& xs, const std::vector<Rat>& ys) {
    QPoly acc;
    for (size_t i = 0; i < xs.size(); ++i) {
        QPoly li(Rat(1));
        Rat denom(1);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            li = li * QPoly(std::vector<Rat>{Rat(-xs[j]), Rat(1)});
            denom *= Rat(xs[i] - xs[j]);
        }
        acc = acc + (ys[i] / denom) * li;
    }
    return acc;
}

inline std::vector<AN> NumberField::roots_of_min_poly_in_field() const {
    std::vector<AN> roots;
    if (n_ == 1) return {gen()};
    if (!cached_automorphisms.empty()) return cached_automorphisms;
    // Trager: norm N(y) = Res_x(m(x), m(y - s*x)) for a shift s making it squarefree.
    for (long s = 1; s < 12; ++s) {
        int N = n_ * n_;
        std::vector<long> xs;
        std::vector<Rat> ys;
        for (long t = 0; static_cast<int>(xs.size()) < N + 1; ++t) {
            QPoly my = m_.shift(Rat(t)).scale_arg(Rat(-s));  // m(t - s*x) as poly in x
            Rat r = QPoly::resultant(m_, my);
            xs.push_back(t);
            ys.push_back(r);
        }
        QPoly normpoly = qpoly_interpolate(xs, ys);
        if (normpoly.degree() != N) continue;
        if (QPoly::gcd(normpoly, normpoly.derivative()).degree() > 0) continue;  // not squarefree
        auto fac = qpoly_factor(normpoly);
        for (auto& [F, mult] : fac) {
            if (F.degree() > n_) continue;
            // candidate factor of m over the field: gcd(m(y), F(y + s*theta))
            using ANPoly = Poly<AN>;
            std::vector<AN> mc(n_ + 1);
            for (int i = 0; i <= n_; ++i) mc[i] = AN(m_[i]);
            ANPoly mF{std::vector<AN>(mc)};
            // F(y + s*theta)
            ANPoly Fy;
            {
                ANPoly ylin{std::vector<AN>{coerce(AN(Rat(s))) * gen(), one()}};
                ANPoly acc;
                for (int i = F.degree(); i >= 0; --i) acc = acc * ylin + ANPoly(coerce(AN(F[i])));
                Fy = acc;
            }
            ANPoly g = ANPoly::gcd(mF, Fy);
            if (g.degree() == 1) {
                AN root = -(g[0] / g[1]);
                roots.push_back(root);
            }
        }
        if (!roots.empty()) {
            cached_automorphisms = roots;
            return roots;
        }
    }
    cached_automorphisms = roots;
    return roots;
}

inline AN PrimeIdeal::uniformizer() const {
    // try g(theta'), then small shifts by p and theta'-multiples
    AN g = from_pres_poly(gbar);
    AN th = from_pres_poly(QPoly::x());
    if (!g.is_zero() && valuation(g) == 1) return g;
    AN gp = g + AN(Rat(p));
    if (valuation(gp) == 1) return gp;
    for (long t = 1; t < 50; ++t) {
        AN cand = g + AN(Rat(Int(t) * p));
        if (valuation(cand) == 1) return cand;
        cand = g * th + AN(Rat(p));
        if (!cand.is_zero() && valuation(cand) == 1) return cand;
    }
    throw Error("InternalUniformizer", "no uniformizer found");
}

}  // namespace dforge
