#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dforge/errors.hpp"
#include "dforge/numberfield.hpp"

// Abelian fields of the shape Q(eta)(sqrt(d_1), ..., sqrt(d_k)) where eta generates a
// real cyclic field (here the degree-4 field Q(zeta_15 + zeta_15^{-1}), or nothing).
// Elements live on the basis eta^j * prod_{i in S} sqrt(d_i); the Galois group is
// Z/cyc x (Z/2)^k acting by eta -> sigma^c(eta) and sign flips on the radicals.
// A parallel quadratic-tower view of the same field supports exact square roots.

namespace dforge {

class CompositeField;

struct CElem {
    const CompositeField* F = nullptr;
    std::vector<Rat> co;

    CElem() : co{Rat(0)} {}
    CElem(long v) : co{Rat(v)} {}
    CElem(int v) : co{Rat(v)} {}
    CElem(Rat v) : co{std::move(v)} {}
    CElem(const CompositeField* f, std::vector<Rat> c) : F(f), co(std::move(c)) {}

    bool is_constant() const { return F == nullptr; }
    bool is_zero() const {
        for (auto& c : co)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_one() const;

    friend CElem operator+(const CElem& a, const CElem& b);
    friend CElem operator-(const CElem& a, const CElem& b);
    friend CElem operator*(const CElem& a, const CElem& b);
    friend CElem operator/(const CElem& a, const CElem& b);
    CElem operator-() const {
        CElem r = *this;
        for (auto& c : r.co) c = -c;
        return r;
    }
    CElem& operator+=(const CElem& o) { return *this = *this + o; }
    CElem& operator-=(const CElem& o) { return *this = *this - o; }
    CElem& operator*=(const CElem& o) { return *this = *this * o; }
    friend bool operator==(const CElem& a, const CElem& b) { return (a - b).is_zero(); }
    friend bool operator!=(const CElem& a, const CElem& b) { return !(a == b); }
    std::string str() const;
};

// Galois element: cyclic exponent c mod cyc_order, sign flips per radical.
struct GalElem {
    int c = 0;
    unsigned flips = 0;  // bit i set: sqrt(d_i) -> -sqrt(d_i)

    friend bool operator==(const GalElem& a, const GalElem& b) { return a.c == b.c && a.flips == b.flips; }
    friend bool operator<(const GalElem& a, const GalElem& b) {
        return a.c != b.c ? a.c < b.c : a.flips < b.flips;
    }
};

class CompositeField {
public:
    // eta_min: monic integral defining a totally real cyclic field with the automorphism
    // eta -> sigma_eta; pass eta_min = x for no cyclotomic part. rads: squarefree integers.
    CompositeField(const QPoly& eta_min, const QPoly& sigma_eta, std::vector<long> rads,
                   std::string name = "")
        : eta_min_(eta_min), rads_(std::move(rads)), name_(std::move(name)) {
        eta_deg_ = std::max(1, eta_min_.degree());
        k_ = static_cast<int>(rads_.size());
        dim_ = eta_deg_ << k_;
        cyc_ = eta_deg_;  // cyclic of degree = order
        sigma_pows_.resize(cyc_);
        sigma_pows_[0] = QPoly::x() % eta_min_;
        if (cyc_ > 1) {
            sigma_pows_[1] = sigma_eta % eta_min_;
            auto substitute = [&](const QPoly& f, const QPoly& g) {
                QPoly acc;
                for (int i = f.degree(); i >= 0; --i) acc = (acc * g) % eta_min_ + QPoly(f[i]);
                return acc % eta_min_;
            };
            for (int c = 2; c < cyc_; ++c)
                sigma_pows_[c] = substitute(sigma_pows_[c - 1], sigma_pows_[1]);
            QPoly id = substitute(sigma_pows_[cyc_ - 1], sigma_pows_[1]);
            if (!(id == (QPoly::x() % eta_min_)))
                throw Error("BadGaloisData", "sigma does not have the expected order");
        }
        build_tower();
    }

    int dim() const { return dim_; }
    int eta_deg() const { return eta_deg_; }
    int num_rads() const { return k_; }
    long rad(int i) const { return rads_[i]; }
    int cyc_order() const { return cyc_; }
    const std::string& name() const { return name_; }

    // ---- element constructors ----
    CElem zero() const { return make(std::vector<Rat>(dim_, Rat(0))); }
    CElem one() const {
        std::vector<Rat> v(dim_, Rat(0));
        v[0] = Rat(1);
        return make(v);
    }
    CElem from_rat(const Rat& r) const {
        std::vector<Rat> v(dim_, Rat(0));
        v[0] = r;
        return make(v);
    }
    CElem eta() const {
        std::vector<Rat> v(dim_, Rat(0));
        if (eta_deg_ < 2) throw Error("NoEta", "field has no cyclotomic part");
        v[idx(0u, 1)] = Rat(1);
        return make(v);
    }
    CElem sqrt_rad(int i) const {
        std::vector<Rat> v(dim_, Rat(0));
        v[idx(1u << i, 0)] = Rat(1);
        return make(v);
    }
    CElem coerce(const CElem& a) const {
        if (a.F == this) return a;
        if (a.is_constant()) {
            std::vector<Rat> v(dim_, Rat(0));
            v[0] = a.co.empty() ? Rat(0) : a.co[0];
            return make(v);
        }
        throw Error("FieldMismatch", "composite element from another field");
    }

    size_t idx(unsigned mask, int j) const { return static_cast<size_t>(mask) * eta_deg_ + j; }

    // ---- arithmetic ----
    CElem add(const CElem& A, const CElem& B) const {
        CElem a = coerce(A), b = coerce(B);
        std::vector<Rat> v(dim_);
        for (int i = 0; i < dim_; ++i) v[i] = a.co[i] + b.co[i];
        return make(std::move(v));
    }
    CElem sub(const CElem& A, const CElem& B) const {
        CElem a = coerce(A), b = coerce(B);
        std::vector<Rat> v(dim_);
        for (int i = 0; i < dim_; ++i) v[i] = a.co[i] - b.co[i];
        return make(std::move(v));
    }
    CElem mul(const CElem& A, const CElem& B) const {
        CElem a = coerce(A), b = coerce(B);
        std::vector<Rat> v(dim_, Rat(0));
        for (unsigned m1 = 0; m1 < (1u << k_); ++m1)
            for (int j1 = 0; j1 < eta_deg_; ++j1) {
                const Rat& x = a.co[idx(m1, j1)];
                if (x.is_zero()) continue;
                for (unsigned m2 = 0; m2 < (1u << k_); ++m2)
                    for (int j2 = 0; j2 < eta_deg_; ++j2) {
                        const Rat& y = b.co[idx(m2, j2)];
                        if (y.is_zero()) continue;
                        Rat coeff = x * y;
                        unsigned common = m1 & m2;
                        for (int i = 0; i < k_; ++i)
                            if (common & (1u << i)) coeff *= Rat(rads_[i]);
                        unsigned mask = m1 ^ m2;
                        // eta^{j1+j2} reduced mod eta_min
                        const QPoly& red = eta_power_red(j1 + j2);
                        for (int t = 0; t <= red.degree(); ++t)
                            v[idx(mask, t)] += coeff * red[t];
                    }
            }
        return make(std::move(v));
    }
    CElem inv(const CElem& A) const {
        CElem a = coerce(A);
        if (a.is_zero()) throw ZeroElement("composite inverse of zero");
        // successive conjugate products: multiply by all nontrivial Galois conjugates,
        // the result is rational (= norm), then divide.
        CElem prod = one();
        for (auto& g : galois_elements()) {
            if (g.c == 0 && g.flips == 0) continue;
            prod = mul(prod, apply(g, a));
        }
        CElem n = mul(a, prod);
        // n must be rational
        for (int i = 1; i < dim_; ++i)
            if (!n.co[i].is_zero()) throw Error("InternalCompositeInv", "norm not rational");
        Rat nr = n.co[0];
        std::vector<Rat> v(dim_);
        for (int i = 0; i < dim_; ++i) v[i] = prod.co[i] / nr;
        return make(std::move(v));
    }
    Rat norm(const CElem& A) const {
        CElem a = coerce(A);
        CElem prod = a;
        for (auto& g : galois_elements()) {
            if (g.c == 0 && g.flips == 0) continue;
            prod = mul(prod, apply(g, a));
        }
        for (int i = 1; i < dim_; ++i)
            if (!prod.co[i].is_zero()) throw Error("InternalCompositeNorm", "norm not rational");
        return prod.co[0];
    }

    // ---- Galois ----
    std::vector<GalElem> galois_elements() const {
        std::vector<GalElem> out;
        for (int c = 0; c < cyc_; ++c)
            for (unsigned fl = 0; fl < (1u << k_); ++fl) out.push_back({c, fl});
        return out;
    }
    GalElem compose(const GalElem& s, const GalElem& t) const {
        return {(s.c + t.c) % cyc_, s.flips ^ t.flips};
    }
    GalElem inverse(const GalElem& s) const { return {(cyc_ - s.c) % cyc_, s.flips}; }
    CElem apply(const GalElem& g, const CElem& A) const {
        CElem a = coerce(A);
        std::vector<Rat> v(dim_, Rat(0));
        // image of eta^j under sigma^c, as a polynomial in eta
        for (unsigned m = 0; m < (1u << k_); ++m) {
            int sign = 1;
            for (int i = 0; i < k_; ++i)
                if ((m & (1u << i)) && (g.flips & (1u << i))) sign = -sign;
            for (int j = 0; j < eta_deg_; ++j) {
                const Rat& x = a.co[idx(m, j)];
                if (x.is_zero()) continue;
                const QPoly& img = sigma_power_j(g.c, j);
                for (int t = 0; t <= img.degree(); ++t)
                    v[idx(m, t)] += (sign < 0 ? -x : x) * img[t];
            }
        }
        return make(std::move(v));
    }

    // ---- square roots via the quadratic-tower view ----
    std::optional<CElem> sqrt(const CElem& A) const;
    bool is_square(const CElem& a) const { return sqrt(a).has_value(); }

    // ---- bridge to a NumberField presentation ----
    struct Bridge {
        NFPtr nf;
        std::vector<std::vector<Rat>> to_nf;    // composite coords -> theta power coords
        std::vector<std::vector<Rat>> from_nf;  // inverse
    };
    // theta given as a composite element; requires theta primitive.
    Bridge bridge(const CElem& theta) const {
        std::vector<std::vector<Rat>> M(dim_, std::vector<Rat>(dim_, Rat(0)));
        CElem cur = one();
        for (int j = 0; j < dim_; ++j) {
            for (int i = 0; i < dim_; ++i) M[i][j] = cur.co[i];
            cur = mul(cur, theta);
        }
        // min poly: solve M * c = coords(theta^dim)
        std::vector<std::vector<Rat>> Minv = rat_matrix_inverse(M);  // throws if not primitive
        std::vector<Rat> rhs = cur.co;
        std::vector<Rat> c(dim_, Rat(0));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) c[i] += Minv[i][j] * rhs[j];
        std::vector<Rat> mp(dim_ + 1, Rat(0));
        mp[dim_] = Rat(1);
        for (int i = 0; i < dim_; ++i) mp[i] = -c[i];
        QPoly minpoly(mp);
        Bridge b;
        b.nf = NumberField::create_trusted(minpoly, name_ + ":theta");
        b.to_nf = Minv;
        b.from_nf = M;
        // provide the automorphisms to the bridged field
        for (auto& g : galois_elements()) {
            CElem img = apply(g, theta);
            b.nf->cached_automorphisms.push_back(b.nf->element(apply_matrix(Minv, img.co)));
        }
        return b;
    }

    CElem make(std::vector<Rat> v) const {
        v.resize(dim_, Rat(0));
        return CElem(this, std::move(v));
    }

private:
    const QPoly& eta_power_red(int j) const {
        while (static_cast<int>(eta_pow_cache_.size()) <= j) {
            if (eta_pow_cache_.empty()) eta_pow_cache_.push_back(QPoly(Rat(1)) % eta_min_);
            QPoly next = (eta_pow_cache_.back() * QPoly::x()) % eta_min_;
            eta_pow_cache_.push_back(next);
        }
        return eta_pow_cache_[j];
    }
    const QPoly& sigma_power_j(int c, int j) const {
        auto key = c * 64 + j;
        auto it = sigma_j_cache_.find(key);
        if (it != sigma_j_cache_.end()) return it->second;
        QPoly r(Rat(1));
        for (int t = 0; t < j; ++t) r = (r * sigma_pows_[c]) % eta_min_;
        return sigma_j_cache_.emplace(key, r).first->second;
    }

public:
    static std::vector<Rat> apply_matrix(const std::vector<std::vector<Rat>>& M,
                                         const std::vector<Rat>& v) {
        int n = static_cast<int>(M.size());
        std::vector<Rat> out(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!v[j].is_zero()) out[i] += M[i][j] * v[j];
        return out;
    }

private:
    // tower levels: level l adjoins sqrt(d_l) with d_l given in tower coords of level l
    struct TowerLevel {
        std::vector<Rat> d;
    };
    void build_tower();

    QPoly eta_min_;
    std::vector<long> rads_;
    std::string name_;
    int eta_deg_, k_, dim_, cyc_;
    std::vector<QPoly> sigma_pows_;
    mutable std::vector<QPoly> eta_pow_cache_;
    mutable std::map<int, QPoly> sigma_j_cache_;
    std::vector<TowerLevel> levels_;
    std::vector<std::vector<Rat>> tower_ds_;
    std::vector<std::vector<Rat>> T_, Tinv_;  // tower coords <-> composite coords

public:
    // exposed for tests
    const std::vector<std::vector<Rat>>& tower_to_composite() const { return T_; }

    // numeric complex embedding: eta goes to the conj_index-th Galois image of
    // 2cos(2pi/15), sqrt(d) to +-sqrt(d) (or +-i sqrt|d|) according to flip_mask
    std::complex<double> embed_complex(const CElem& A, int conj_index, unsigned flip_mask) const {
        CElem a = coerce(A);
        double pi = 3.14159265358979323846;
        // eta-images under sigma^k are 2cos(2pi*2^k/15)
        long kk = 1;
        for (int i = 0; i < conj_index; ++i) kk = kk * 2 % 15;
        double etav = 2.0 * std::cos(2.0 * pi * kk / 15.0);
        std::complex<double> out(0, 0);
        for (unsigned m = 0; m < (1u << k_); ++m) {
            std::complex<double> radv(1, 0);
            for (int i = 0; i < k_; ++i)
                if (m & (1u << i)) {
                    std::complex<double> rv = rads_[i] >= 0
                        ? std::complex<double>(std::sqrt((double)rads_[i]), 0)
                        : std::complex<double>(0, std::sqrt((double)-rads_[i]));
                    if (flip_mask & (1u << i)) rv = -rv;
                    radv *= rv;
                }
            double ev = 1;
            for (int j = 0; j < eta_deg_; ++j) {
                out += a.co[idx(m, j)].to_double() * ev * radv;
                ev *= etav;
            }
        }
        return out;
    }

    // numeric value of an element under the standard real embedding (eta -> 2cos(2pi/15),
    // sqrt(d) -> principal root); only valid when every radical is positive
    double embed_real(const CElem& A) const {
        CElem a = coerce(A);
        double etav = 2.0 * std::cos(2.0 * 3.14159265358979323846 / 15.0);
        double out = 0;
        for (unsigned m = 0; m < (1u << k_); ++m) {
            double radv = 1;
            for (int i = 0; i < k_; ++i)
                if (m & (1u << i)) {
                    if (rads_[i] < 0) throw Error("ComplexEmbedding", "negative radical");
                    radv *= std::sqrt(static_cast<double>(rads_[i]));
                }
            double ev = 1;
            for (int j = 0; j < eta_deg_; ++j) {
                out += a.co[idx(m, j)].to_double() * ev * radv;
                ev *= etav;
            }
        }
        return out;
    }
};

// Roots of a rational polynomial inside a totally real composite field, found by
// numeric root matching against the Galois orbit of the standard embedding and then
// verified exactly.  Root coordinates are assumed integral over the composite basis
// up to the given denominator bound.
inline std::vector<CElem> roots_in_real_composite(const CompositeField& F, const QPoly& f,
                                                  long den_bound = 6) {
    int n = F.dim();
    if (f.degree() != n) throw Error("RootSearch", "expects deg f = field degree");
    // numeric roots by Durand-Kerner
    int d = f.degree();
    std::vector<std::complex<double>> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = f[i].to_double();
    std::vector<std::complex<double>> r(d);
    for (int i = 0; i < d; ++i) r[i] = std::pow(std::complex<double>(0.4, 0.9), i);
    for (int iter = 0; iter < 500; ++iter) {
        for (int i = 0; i < d; ++i) {
            std::complex<double> num = c[d];
            for (int k = d - 1; k >= 0; --k) num = num * r[i] + c[k];
            std::complex<double> den = c[d];
            for (int j = 0; j < d; ++j)
                if (j != i) den *= (r[i] - r[j]);
            r[i] -= num / den;
        }
    }
    std::vector<double> real_roots;
    for (auto& z : r) {
        if (std::abs(z.imag()) > 1e-6) throw Error("RootSearch", "complex root of the polynomial");
        real_roots.push_back(z.real());
    }
    // embedding matrix: rows = Galois elements, columns = coordinates
    auto G = F.galois_elements();
    std::vector<std::vector<double>> E(n, std::vector<double>(n, 0));
    for (int gi = 0; gi < n; ++gi) {
        for (int j = 0; j < n; ++j) {
            std::vector<Rat> v(n, Rat(0));
            v[j] = Rat(1);
            E[gi][j] = F.embed_real(F.apply(G[gi], F.make(v)));
        }
    }
    // try assignments: root for embedding 0 is free; remaining follow by permutation scan
    std::vector<CElem> out;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    // invert E numerically (Gauss)
    std::vector<std::vector<double>> Inv(n, std::vector<double>(n, 0));
    {
        std::vector<std::vector<double>> M = E;
        for (int i = 0; i < n; ++i) Inv[i][i] = 1;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int i = col; i < n; ++i)
                if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
            std::swap(M[piv], M[col]);
            std::swap(Inv[piv], Inv[col]);
            double s = M[col][col];
            for (int j = 0; j < n; ++j) {
                M[col][j] /= s;
                Inv[col][j] /= s;
            }
            for (int i = 0; i < n; ++i) {
                if (i == col) continue;
                double f2 = M[i][col];
                for (int j = 0; j < n; ++j) {
                    M[i][j] -= f2 * M[col][j];
                    Inv[i][j] -= f2 * Inv[col][j];
                }
            }
        }
    }
    std::set<std::string> seen;
    do {
        std::vector<double> coords(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) coords[i] += Inv[i][j] * real_roots[perm[j]];
        // round to rationals with small denominators
        bool plausible = true;
        std::vector<Rat> cr(n);
        for (int i = 0; i < n && plausible; ++i) {
            double best = 1e9;
            for (long q = 1; q <= den_bound; ++q) {
                double scaled = coords[i] * q;
                double err = std::abs(scaled - std::round(scaled));
                if (err < 2e-5 * q) {
                    cr[i] = Rat(Int(static_cast<long>(std::llround(scaled))), Int(q));
                    best = err;
                    break;
                }
            }
            if (best > 1) plausible = false;
        }
        if (plausible) {
            CElem cand = F.make(cr);
            CElem val = F.zero();
            CElem pw = F.one();
            for (int i = 0; i <= f.degree(); ++i) {
                val += F.from_rat(f[i]) * pw;
                pw *= cand;
            }
            if (val.is_zero()) {
                std::string key = cand.str();
                if (!seen.count(key)) {
                    seen.insert(key);
                    out.push_back(cand);
                }
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// ---- quadratic tower internals ----

namespace tower_detail {

using RV = std::vector<Rat>;

inline RV tadd(const RV& a, const RV& b) {
    RV r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline RV tsub(const RV& a, const RV& b) {
    RV r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline bool tzero(const RV& a) {
    for (auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

// multiplication at level L (vector size 2^L); ds[l] is the adjsquared element at step l
inline RV tmul(const std::vector<RV>& ds, int L, const RV& a, const RV& b) {
    if (L == 0) return {a[0] * b[0]};
    size_t h = a.size() / 2;
    RV a0(a.begin(), a.begin() + h), a1(a.begin() + h, a.end());
    RV b0(b.begin(), b.begin() + h), b1(b.begin() + h, b.end());
    RV p00 = tmul(ds, L - 1, a0, b0);
    RV p11 = tmul(ds, L - 1, a1, b1);
    RV p01 = tmul(ds, L - 1, a0, b1);
    RV p10 = tmul(ds, L - 1, a1, b0);
    RV lo = tadd(p00, tmul(ds, L - 1, ds[L - 1], p11));
    RV hi = tadd(p01, p10);
    RV out(a.size());
    std::copy(lo.begin(), lo.end(), out.begin());
    std::copy(hi.begin(), hi.end(), out.begin() + h);
    return out;
}

inline RV tinv(const std::vector<RV>& ds, int L, const RV& a) {
    if (L == 0) {
        if (a[0].is_zero()) throw ZeroElement("tower inverse of zero");
        return {Rat(1) / a[0]};
    }
    size_t h = a.size() / 2;
    RV a0(a.begin(), a.begin() + h), a1(a.begin() + h, a.end());
    // 1/(a0 + a1 s) = (a0 - a1 s)/(a0^2 - d a1^2)
    RV n = tsub(tmul(ds, L - 1, a0, a0), tmul(ds, L - 1, ds[L - 1], tmul(ds, L - 1, a1, a1)));
    RV ninv = tinv(ds, L - 1, n);
    RV r0 = tmul(ds, L - 1, a0, ninv);
    RV r1 = tmul(ds, L - 1, a1, ninv);
    RV out(a.size());
    std::copy(r0.begin(), r0.end(), out.begin());
    for (size_t i = 0; i < h; ++i) out[h + i] = -r1[i];
    return out;
}

inline std::optional<RV> tsqrt(const std::vector<RV>& ds, int L, const RV& u) {
    if (tzero(u)) return RV(u.size(), Rat(0));
    if (L == 0) {
        Rat v = u[0];
        if (v.sgn() < 0) return std::nullopt;
        Int n = v.num(), d = v.den();
        if (!n.is_perfect_square() || !d.is_perfect_square()) return std::nullopt;
        return RV{Rat(n.isqrt(), d.isqrt())};
    }
    size_t h = u.size() / 2;
    RV x(u.begin(), u.begin() + h), y(u.begin() + h, u.end());
    auto pack = [&](const RV& lo, const RV& hi) {
        RV out(u.size());
        std::copy(lo.begin(), lo.end(), out.begin());
        std::copy(hi.begin(), hi.end(), out.begin() + h);
        return out;
    };
    if (tzero(y)) {
        // u = x: either sqrt(x) in lower field, or sqrt(x/d)*s
        if (auto r = tsqrt(ds, L - 1, x)) return pack(*r, RV(h, Rat(0)));
        RV xd = tmul(ds, L - 1, x, tinv(ds, L - 1, ds[L - 1]));
        if (auto r = tsqrt(ds, L - 1, xd)) return pack(RV(h, Rat(0)), *r);
        return std::nullopt;
    }
    // z = z0 + z1 s with z0^2 + d z1^2 = x, 2 z0 z1 = y: norm descent
    RV n = tsub(tmul(ds, L - 1, x, x), tmul(ds, L - 1, ds[L - 1], tmul(ds, L - 1, y, y)));
    auto s = tsqrt(ds, L - 1, n);
    if (!s) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        RV sval = *s;
        if (sign) for (auto& c : sval) c = -c;
        // z0^2 = (x + sval)/2
        RV t = tadd(x, sval);
        for (auto& c : t) c = c / Rat(2);
        auto z0 = tsqrt(ds, L - 1, t);
        if (!z0 || tzero(*z0)) continue;
        RV half = tinv(ds, L - 1, tadd(*z0, *z0));
        RV z1 = tmul(ds, L - 1, y, half);
        RV cand = pack(*z0, z1);
        RV sq = tmul(ds, L, cand, cand);
        if (tzero(tsub(sq, u))) return cand;
    }
    return std::nullopt;
}

}  // namespace tower_detail

inline void CompositeField::build_tower() {
    using namespace tower_detail;
    // tower levels for the eta part
    std::vector<CElem> gens;  // tower step generators as composite elements
    levels_.clear();
    if (eta_deg_ == 1) {
        // nothing
    } else {
        // only the real quartic field of conductor 15 is supported as cyclotomic part
        QPoly expected = qpoly_from_int({1, 4, -4, -1, 1});
        if (!(eta_min_ == expected))
            throw Error("UnsupportedEta", "tower decomposition known only for the zeta15-real quartic");
        // sqrt5 = 2 eta^3 - 6 eta + 1, sqrtdelta = -eta^3 + 5 eta - 1 with delta = (15-3sqrt5)/2
        CElem s5 = make([&] {
            std::vector<Rat> v(dim_, Rat(0));
            v[idx(0u, 3)] = Rat(2);
            v[idx(0u, 1)] = Rat(-6);
            v[idx(0u, 0)] = Rat(1);
            return v;
        }());
        if (!(mul(s5, s5) == from_rat(Rat(5)))) throw Error("InternalTower", "sqrt5 identity failed");
        CElem sdelta = make([&] {
            std::vector<Rat> v(dim_, Rat(0));
            v[idx(0u, 3)] = Rat(-1);
            v[idx(0u, 1)] = Rat(5);
            v[idx(0u, 0)] = Rat(-1);
            return v;
        }());
        // delta = (15 - 3 sqrt5)/2
        CElem delta = sub(from_rat(Rat(15, 2)), mul(from_rat(Rat(3, 2)), s5));
        if (!(mul(sdelta, sdelta) == delta)) throw Error("InternalTower", "sqrtdelta identity failed");
        levels_.push_back({RV{Rat(5)}});
        levels_.push_back({RV{Rat(15, 2), Rat(-3, 2)}});
        gens.push_back(s5);
        gens.push_back(sdelta);
    }
    for (int i = 0; i < k_; ++i) {
        RV d(static_cast<size_t>(1) << levels_.size(), Rat(0));
        d[0] = Rat(rads_[i]);
        levels_.push_back({d});
        gens.push_back(sqrt_rad(i));
    }
    // change of basis: tower basis products -> composite coordinates
    int L = static_cast<int>(levels_.size());
    if ((1 << L) != dim_) throw Error("InternalTower", "tower dimension mismatch");
    T_.assign(dim_, std::vector<Rat>(dim_, Rat(0)));
    for (int b = 0; b < dim_; ++b) {
        CElem prod = one();
        for (int l = 0; l < L; ++l)
            if (b & (1 << l)) prod = mul(prod, gens[l]);
        for (int i = 0; i < dim_; ++i) T_[i][b] = prod.co[i];
    }
    Tinv_ = rat_matrix_inverse(T_);
    // pack level d-vectors into full-size step data used by tower_sqrt
    tower_ds_.clear();
    for (auto& lv : levels_) tower_ds_.push_back(lv.d);
}

inline std::optional<CElem> CompositeField::sqrt(const CElem& A) const {
    CElem a = coerce(A);
    std::vector<Rat> tco = apply_matrix(Tinv_, a.co);
    int L = static_cast<int>(tower_ds_.size());
    auto r = tower_detail::tsqrt(tower_ds_, L, tco);
    if (!r) return std::nullopt;
    CElem out = make(apply_matrix(T_, *r));
    if (!(mul(out, out) == a)) throw Error("InternalTower", "sqrt verification failed");
    return out;
}

inline bool CElem::is_one() const {
    if (!F) return co.size() == 1 && co[0].is_one();
    if (!co[0].is_one()) return false;
    for (size_t i = 1; i < co.size(); ++i)
        if (!co[i].is_zero()) return false;
    return true;
}
inline CElem operator+(const CElem& a, const CElem& b) {
    const CompositeField* f = a.F ? a.F : b.F;
    if (!f) return CElem(a.co[0] + b.co[0]);
    return f->add(a, b);
}
inline CElem operator-(const CElem& a, const CElem& b) {
    const CompositeField* f = a.F ? a.F : b.F;
    if (!f) return CElem(a.co[0] - b.co[0]);
    return f->sub(a, b);
}
inline CElem operator*(const CElem& a, const CElem& b) {
    const CompositeField* f = a.F ? a.F : b.F;
    if (!f) return CElem(a.co[0] * b.co[0]);
    return f->mul(a, b);
}
inline CElem operator/(const CElem& a, const CElem& b) {
    const CompositeField* f = a.F ? a.F : b.F;
    if (!f) return CElem(a.co[0] / b.co[0]);
    return f->mul(a, f->inv(b));
}
inline std::string CElem::str() const {
    std::string s = "[";
    for (size_t i = 0; i < co.size(); ++i) s += (i ? "," : "") + co[i].str();
    return s + "]";
}

}  // namespace dforge
