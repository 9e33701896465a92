#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "dforge/int.hpp"
#include "dforge/poly.hpp"

// Finite fields F_{p^d} as F_p[t]/(g), d >= 1, p an odd (or =2) machine-word prime.
// Elements carry a pointer to their field; a null field marks an integer constant
// that coerces on first use, which keeps generic Poly<FqElem> code working.

namespace dforge {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 invmod_u64(u64 a, u64 m) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("invmod_u64: not invertible");
    return static_cast<u64>(t < 0 ? t + static_cast<long long>(m) : t);
}

class Fq;

class FqElem {
public:
    FqElem() : f_(nullptr), cst_(0) {}
    FqElem(long v) : f_(nullptr), cst_(v) {}
    FqElem(int v) : FqElem(static_cast<long>(v)) {}
    FqElem(const Fq* f, std::vector<u64> c) : f_(f), rep_(std::move(c)) {}

    const Fq* field() const { return f_; }
    bool is_constant() const { return f_ == nullptr; }
    long constant_value() const { return cst_; }
    const std::vector<u64>& rep() const { return rep_; }

    bool is_zero() const;
    bool is_one() const;
    friend FqElem operator+(const FqElem& a, const FqElem& b);
    friend FqElem operator-(const FqElem& a, const FqElem& b);
    friend FqElem operator*(const FqElem& a, const FqElem& b);
    friend FqElem operator/(const FqElem& a, const FqElem& b);
    FqElem operator-() const;
    FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
    FqElem& operator-=(const FqElem& o) { return *this = *this - o; }
    FqElem& operator*=(const FqElem& o) { return *this = *this * o; }
    friend bool operator==(const FqElem& a, const FqElem& b) { return (a - b).is_zero(); }
    friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const FqElem& e);

private:
    const Fq* f_;
    long cst_ = 0;
    std::vector<u64> rep_;  // coefficients in t, size d when attached
    friend class Fq;
};

class Fq {
public:
    // F_p
    explicit Fq(u64 p) : p_(p), d_(1), mod_{1} {}
    // F_{p^d} with monic modulus given by coefficient vector (low to high, size d+1, lead 1)
    Fq(u64 p, std::vector<u64> modulus) : p_(p), mod_(std::move(modulus)) {
        d_ = static_cast<int>(mod_.size()) - 1;
        if (d_ < 1 || mod_.back() != 1) throw std::invalid_argument("Fq: bad modulus");
    }

    u64 p() const { return p_; }
    int degree() const { return d_; }
    Int order() const { return Int::pow(Int(static_cast<long>(p_)), d_); }
    const std::vector<u64>& modulus() const { return mod_; }

    FqElem zero() const { return make(std::vector<u64>(d_, 0)); }
    FqElem one() const {
        std::vector<u64> v(d_, 0);
        v[0] = 1 % p_;
        return make(v);
    }
    FqElem gen() const {
        std::vector<u64> v(d_, 0);
        if (d_ == 1)
            v[0] = 0;
        else
            v[1] = 1;
        return make(v);
    }
    FqElem from_int(const Int& n) const {
        Int r = n.fmod(Int(static_cast<long>(p_)));
        std::vector<u64> v(d_, 0);
        v[0] = static_cast<u64>(r.to_long());
        return make(v);
    }
    FqElem from_vec(std::vector<u64> v) const {
        v.resize(d_, 0);
        for (auto& x : v) x %= p_;
        return make(std::move(v));
    }

    FqElem coerce(const FqElem& e) const {
        if (e.field() == this) return e;
        if (e.is_constant()) {
            long c = e.constant_value();
            Int cc(c);
            return from_int(cc);
        }
        throw std::invalid_argument("Fq: mixing elements of different fields");
    }

    FqElem add(const FqElem& A, const FqElem& B) const {
        FqElem a = coerce(A), b = coerce(B);
        std::vector<u64> v(d_);
        for (int i = 0; i < d_; ++i) v[i] = (a.rep_[i] + b.rep_[i]) % p_;
        return make(std::move(v));
    }
    FqElem sub(const FqElem& A, const FqElem& B) const {
        FqElem a = coerce(A), b = coerce(B);
        std::vector<u64> v(d_);
        for (int i = 0; i < d_; ++i) v[i] = (a.rep_[i] + p_ - b.rep_[i]) % p_;
        return make(std::move(v));
    }
    FqElem neg(const FqElem& A) const {
        FqElem a = coerce(A);
        std::vector<u64> v(d_);
        for (int i = 0; i < d_; ++i) v[i] = a.rep_[i] ? p_ - a.rep_[i] : 0;
        return make(std::move(v));
    }
    FqElem mul(const FqElem& A, const FqElem& B) const {
        FqElem a = coerce(A), b = coerce(B);
        if (d_ == 1) return make({mulmod_u64(a.rep_[0], b.rep_[0], p_)});
        std::vector<u64> prod(2 * d_ - 1, 0);
        for (int i = 0; i < d_; ++i) {
            if (!a.rep_[i]) continue;
            for (int j = 0; j < d_; ++j)
                prod[i + j] = (prod[i + j] + (u128)a.rep_[i] * b.rep_[j]) % p_;
        }
        reduce(prod);
        prod.resize(d_);
        return make(std::move(prod));
    }
    FqElem inv(const FqElem& A) const {
        FqElem a = coerce(A);
        if (is_zero(a)) throw std::domain_error("Fq: inverse of zero");
        if (d_ == 1) return make({invmod_u64(a.rep_[0], p_)});
        // Fermat: a^(q-2)
        return pow(a, order() - Int(2));
    }
    FqElem pow(const FqElem& A, Int e) const {
        FqElem a = coerce(A);
        if (e.sgn() < 0) {
            a = inv(a);
            e = -e;
        }
        FqElem r = one();
        while (!e.is_zero()) {
            if (e.is_odd()) r = mul(r, a);
            a = mul(a, a);
            e = e / Int(2);
        }
        return r;
    }
    bool is_zero(const FqElem& A) const {
        FqElem a = coerce(A);
        for (auto x : a.rep_)
            if (x) return false;
        return true;
    }

    // Quadratic character: 0 if zero, +1 square, -1 non-square. Requires odd q.
    int chi(const FqElem& A) const {
        FqElem a = coerce(A);
        if (is_zero(a)) return 0;
        FqElem r = pow(a, (order() - Int(1)) / Int(2));
        return is_zero(sub(r, one())) ? 1 : -1;
    }
    // Square root via Tonelli-Shanks in F_q (odd q); returns nullopt for non-squares.
    std::optional<FqElem> sqrt(const FqElem& A) const {
        FqElem a = coerce(A);
        if (is_zero(a)) return zero();
        if (chi(a) != 1) return std::nullopt;
        Int q = order();
        Int s = q - Int(1);
        int e = 0;
        while (s.is_even()) {
            s = s / Int(2);
            ++e;
        }
        // find a non-square
        FqElem n = gen();
        std::mt19937_64 rng(12345);
        while (chi(n) != -1) {
            std::vector<u64> v(d_);
            for (auto& x : v) x = rng() % p_;
            n = from_vec(v);
            if (is_zero(n)) n = one();
        }
        FqElem x = pow(a, (s + Int(1)) / Int(2));
        FqElem b = pow(a, s);
        FqElem g = pow(n, s);
        int r = e;
        while (true) {
            FqElem t = b;
            int m = 0;
            while (!is_zero(sub(t, one())) && m < r) {
                t = mul(t, t);
                ++m;
            }
            if (m == 0) return x;
            if (m == r) return std::nullopt;
            FqElem gs = g;
            for (int i = 0; i < r - m - 1; ++i) gs = mul(gs, gs);
            g = mul(gs, gs);
            x = mul(x, gs);
            b = mul(b, g);
            r = m;
        }
    }

    // All q field elements in a fixed order (lexicographic in rep); q must be small.
    std::vector<FqElem> all_elements() const {
        std::vector<FqElem> out;
        std::vector<u64> v(d_, 0);
        Int q = order();
        if (q > Int(2000000)) throw std::domain_error("Fq::all_elements: field too large");
        long n = q.to_long();
        out.reserve(n);
        for (long k = 0; k < n; ++k) {
            out.push_back(make(v));
            int i = 0;
            while (i < d_ && ++v[i] == p_) v[i++] = 0;
        }
        return out;
    }

    std::string str(const FqElem& A) const {
        FqElem a = coerce(A);
        std::string s = "[";
        for (int i = 0; i < d_; ++i) s += (i ? "," : "") + std::to_string(a.rep_[i]);
        return s + "]";
    }

private:
    FqElem make(std::vector<u64> v) const { return FqElem(this, std::move(v)); }
    void reduce(std::vector<u64>& prod) const {
        for (int k = static_cast<int>(prod.size()) - 1; k >= d_; --k) {
            u64 c = prod[k];
            if (!c) continue;
            prod[k] = 0;
            for (int j = 0; j < d_; ++j) {
                u64 sub = mulmod_u64(c, mod_[j], p_);
                prod[k - d_ + j] = (prod[k - d_ + j] + p_ - sub) % p_;
            }
        }
    }
    u64 p_;
    int d_;
    std::vector<u64> mod_;
};

inline bool FqElem::is_zero() const {
    if (is_constant()) return cst_ == 0;
    return f_->is_zero(*this);
}
inline bool FqElem::is_one() const {
    if (is_constant()) return cst_ == 1;
    return f_->is_zero(f_->sub(*this, f_->one()));
}
inline const Fq* common_field(const FqElem& a, const FqElem& b) {
    if (a.field()) return a.field();
    return b.field();
}
inline FqElem operator+(const FqElem& a, const FqElem& b) {
    const Fq* f = common_field(a, b);
    if (!f) return FqElem(a.constant_value() + b.constant_value());
    return f->add(a, b);
}
inline FqElem operator-(const FqElem& a, const FqElem& b) {
    const Fq* f = common_field(a, b);
    if (!f) return FqElem(a.constant_value() - b.constant_value());
    return f->sub(a, b);
}
inline FqElem operator*(const FqElem& a, const FqElem& b) {
    const Fq* f = common_field(a, b);
    if (!f) return FqElem(a.constant_value() * b.constant_value());
    return f->mul(a, b);
}
inline FqElem operator/(const FqElem& a, const FqElem& b) {
    const Fq* f = common_field(a, b);
    if (!f) throw std::domain_error("FqElem: constant division");
    return f->mul(a, f->inv(b));
}
inline FqElem FqElem::operator-() const {
    if (is_constant()) return FqElem(-cst_);
    return f_->neg(*this);
}
inline std::ostream& operator<<(std::ostream& os, const FqElem& e) {
    if (e.is_constant()) return os << e.constant_value();
    return os << e.field()->str(e);
}

// ---------- polynomial factorization over F_p (p odd or 2, machine word) ----------
// Used by Dedekind factorization of rational primes and by the Zassenhaus lift.
// Polynomials are vectors of u64 coefficients, low to high, reduced mod p.

struct FpPoly {
    std::vector<u64> c;
    u64 p;

    int deg() const {
        int d = static_cast<int>(c.size()) - 1;
        while (d >= 0 && c[d] == 0) --d;
        return d;
    }
    void trim() { c.resize(deg() + 1); }
    bool is_zero() const { return deg() < 0; }
};

inline FpPoly fp_make(std::vector<u64> c, u64 p) {
    for (auto& x : c) x %= p;
    FpPoly f{std::move(c), p};
    f.trim();
    return f;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
    if (a.is_zero() || b.is_zero()) return FpPoly{{}, a.p};
    std::vector<u64> v(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); ++j) v[i + j] = (v[i + j] + (u128)a.c[i] * b.c[j]) % a.p;
    }
    FpPoly f{std::move(v), a.p};
    f.trim();
    return f;
}

inline void fp_divmod(const FpPoly& n, const FpPoly& d, FpPoly& q, FpPoly& r) {
    u64 p = n.p;
    if (d.is_zero()) throw std::domain_error("fp_divmod: zero divisor");
    r = n;
    r.trim();
    q = FpPoly{{}, p};
    int dd = d.deg();
    u64 inv = invmod_u64(d.c[dd], p);
    while (r.deg() >= dd) {
        int k = r.deg() - dd;
        u64 f = mulmod_u64(r.c[r.deg()], inv, p);
        if (static_cast<int>(q.c.size()) < k + 1) q.c.resize(k + 1, 0);
        q.c[k] = (q.c[k] + f) % p;
        for (int i = 0; i <= dd; ++i) {
            u64 sub = mulmod_u64(f, d.c[i], p);
            r.c[k + i] = (r.c[k + i] + p - sub) % p;
        }
        r.trim();
    }
    q.trim();
}

inline FpPoly fp_mod(const FpPoly& n, const FpPoly& d) {
    FpPoly q, r;
    fp_divmod(n, d, q, r);
    return r;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = fp_mod(a, b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        u64 inv = invmod_u64(a.c[a.deg()], a.p);
        for (auto& x : a.c) x = mulmod_u64(x, inv, a.p);
    }
    return a;
}

inline FpPoly fp_powmod(FpPoly a, Int e, const FpPoly& m) {
    FpPoly r = fp_make({1}, a.p);
    a = fp_mod(a, m);
    while (!e.is_zero()) {
        if (e.is_odd()) r = fp_mod(fp_mul(r, a), m);
        a = fp_mod(fp_mul(a, a), m);
        e = e / Int(2);
    }
    return r;
}

inline FpPoly fp_derivative(const FpPoly& f) {
    if (f.deg() < 1) return FpPoly{{}, f.p};
    std::vector<u64> v(f.deg());
    for (int i = 1; i <= f.deg(); ++i) v[i - 1] = mulmod_u64(f.c[i], i % f.p, f.p);
    FpPoly g{std::move(v), f.p};
    g.trim();
    return g;
}

// squarefree part factorization: returns (g_i, multiplicity) with f = prod g_i^{m_i}, g_i squarefree
std::vector<std::pair<FpPoly, int>> fp_squarefree(const FpPoly& f);

// distinct-degree + Cantor-Zassenhaus equal-degree splitting of a squarefree monic polynomial
std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f, u64 seed = 7);

// full monic factorization: list of (irreducible monic factor, multiplicity)
inline std::vector<std::pair<FpPoly, int>> fp_factor(const FpPoly& f_in, u64 seed = 7) {
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly f = f_in;
    f.trim();
    if (f.deg() < 1) return out;
    u64 inv = invmod_u64(f.c[f.deg()], f.p);
    for (auto& x : f.c) x = mulmod_u64(x, inv, f.p);
    for (auto& [g, m] : fp_squarefree(f))
        for (auto& irr : fp_factor_squarefree(g, seed)) out.emplace_back(irr, m);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        return a.first.c < b.first.c;
    });
    return out;
}

inline std::vector<std::pair<FpPoly, int>> fp_squarefree(const FpPoly& f) {
    u64 p = f.p;
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly one = fp_make({1}, p);
    std::function<void(const FpPoly&, int)> rec = [&](const FpPoly& g, int mult) {
        if (g.deg() < 1) return;
        FpPoly gp = fp_derivative(g);
        if (gp.is_zero()) {
            // g = h(x^p): take p-th root coefficientwise (F_p is perfect: c^(1/p) = c)
            std::vector<u64> h((g.deg() / p) + 1, 0);
            for (int i = 0; i <= g.deg(); i += static_cast<int>(p)) h[i / p] = g.c[i];
            rec(FpPoly{h, p}, mult * static_cast<int>(p));
            return;
        }
        FpPoly c = fp_gcd(g, gp);
        FpPoly w;
        {
            FpPoly q, r;
            fp_divmod(g, c, q, r);
            w = q;
        }
        int i = 1;
        while (w.deg() > 0) {
            FpPoly y = fp_gcd(w, c);
            FpPoly fac;
            {
                FpPoly q, r;
                fp_divmod(w, y, q, r);
                fac = q;
            }
            if (fac.deg() > 0) out.emplace_back(fac, mult * i);
            FpPoly q2, r2;
            fp_divmod(c, y, q2, r2);
            c = q2;
            w = y;
            ++i;
        }
        if (c.deg() > 0) rec(c, mult);
    };
    rec(f, 1);
    return out;
}

inline std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f, u64 seed) {
    u64 p = f.p;
    std::vector<FpPoly> out;
    if (f.deg() < 1) return out;
    if (f.deg() == 1) {
        out.push_back(f);
        return out;
    }
    // distinct degree
    struct Bucket {
        FpPoly poly;
        int d;
    };
    std::vector<Bucket> buckets;
    FpPoly x = fp_make({0, 1}, p);
    FpPoly h = x;
    FpPoly rem = f;
    for (int d = 1; 2 * d <= rem.deg(); ++d) {
        h = fp_powmod(h, Int(static_cast<long>(p)), rem);
        FpPoly diff = fp_make(h.c, p);
        // h - x
        if (diff.c.size() < 2) diff.c.resize(2, 0);
        diff.c[1] = (diff.c[1] + p - 1) % p;
        diff.trim();
        FpPoly g = fp_gcd(rem, diff);
        if (g.deg() > 0) {
            buckets.push_back({g, d});
            FpPoly q, r;
            fp_divmod(rem, g, q, r);
            rem = q;
            h = fp_mod(h, rem);
        }
    }
    if (rem.deg() > 0) buckets.push_back({rem, rem.deg()});
    // equal degree (Cantor-Zassenhaus); deterministic seeded RNG for reproducibility
    std::mt19937_64 rng(seed * 1000003u + p);
    std::function<void(const FpPoly&, int)> split = [&](const FpPoly& g, int d) {
        if (g.deg() == d) {
            out.push_back(g);
            return;
        }
        while (true) {
            std::vector<u64> rc(g.deg());
            for (auto& v : rc) v = rng() % p;
            FpPoly r = fp_make(std::move(rc), p);
            if (r.deg() < 1) continue;
            FpPoly gg = fp_gcd(g, r);
            if (gg.deg() > 0 && gg.deg() < g.deg()) {
                FpPoly q, rr;
                fp_divmod(g, gg, q, rr);
                split(gg, d);
                split(q, d);
                return;
            }
            FpPoly e;
            if (p == 2) {
                // trace map sum r^(2^i) over i < d
                FpPoly t = r, acc = r;
                for (int i = 1; i < d; ++i) {
                    t = fp_mod(fp_mul(t, t), g);
                    std::vector<u64> s(std::max(acc.c.size(), t.c.size()), 0);
                    for (size_t k = 0; k < s.size(); ++k) {
                        u64 av = k < acc.c.size() ? acc.c[k] : 0, tv = k < t.c.size() ? t.c[k] : 0;
                        s[k] = (av + tv) % 2;
                    }
                    acc = fp_make(std::move(s), p);
                }
                e = acc;
            } else {
                Int exp = (Int::pow(Int(static_cast<long>(p)), d) - Int(1)) / Int(2);
                e = fp_powmod(r, exp, g);
                // e - 1
                if (e.c.empty()) e.c.resize(1, 0);
                e.c[0] = (e.c[0] + p - 1) % p;
                e.trim();
            }
            FpPoly gg2 = fp_gcd(g, e);
            if (gg2.deg() > 0 && gg2.deg() < g.deg()) {
                FpPoly q, rr;
                fp_divmod(g, gg2, q, rr);
                split(gg2, d);
                split(q, d);
                return;
            }
        }
    };
    for (auto& b : buckets) split(b.poly, b.d);
    std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        return a.c < b.c;
    });
    return out;
}

inline FpPoly fp_from_qpoly(const QPoly& f, u64 p) {
    std::vector<u64> v(f.degree() + 1, 0);
    Int P(static_cast<long>(p));
    for (int i = 0; i <= f.degree(); ++i) {
        const Rat& c = f[i];
        if (c.den().divisible_by(P)) throw std::domain_error("fp_from_qpoly: denominator divisible by p");
        Int n = c.num().fmod(P), d = c.den().fmod(P);
        v[i] = mulmod_u64(static_cast<u64>(n.to_long()), invmod_u64(static_cast<u64>(d.to_long()), p), p);
    }
    return fp_make(std::move(v), p);
}

}  // namespace dforge
