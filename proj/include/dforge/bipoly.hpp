#pragma once

#include <vector>

#include "dforge/errors.hpp"
#include "dforge/int.hpp"

// Dense bivariate polynomials in the parameters (a, b) over a coefficient field C.
// Small degrees throughout (discriminants of the Frey families have degree 12).

namespace dforge {

template <class C>
class BiPoly {
public:
    BiPoly() : da_(-1), db_(-1) {}
    BiPoly(C cst) : da_(0), db_(0), c_{std::move(cst)} { trim(); }

    static BiPoly var_a() { return monomial(C(1), 1, 0); }
    static BiPoly var_b() { return monomial(C(1), 0, 1); }
    static BiPoly monomial(C coeff, int i, int j) {
        BiPoly f;
        f.da_ = i;
        f.db_ = j;
        f.c_.assign(static_cast<size_t>(i + 1) * (j + 1), C(0));
        f.at(i, j) = std::move(coeff);
        f.trim();
        return f;
    }

    bool is_zero() const { return da_ < 0; }
    int deg_a() const { return da_; }
    int deg_b() const { return db_; }
    const C& coeff(int i, int j) const {
        static const C zero{0};
        if (i < 0 || j < 0 || i > da_ || j > db_) return zero;
        return c_[static_cast<size_t>(i) * (db_ + 1) + j];
    }
    bool is_constant() const { return da_ <= 0 && db_ <= 0; }
    C constant() const { return is_zero() ? C(0) : coeff(0, 0); }

    friend BiPoly operator+(const BiPoly& f, const BiPoly& g) {
        BiPoly r;
        r.da_ = std::max(f.da_, g.da_);
        r.db_ = std::max(f.db_, g.db_);
        if (r.da_ < 0) return BiPoly();
        r.c_.assign(static_cast<size_t>(r.da_ + 1) * (r.db_ + 1), C(0));
        for (int i = 0; i <= r.da_; ++i)
            for (int j = 0; j <= r.db_; ++j) r.at(i, j) = f.coeff(i, j) + g.coeff(i, j);
        r.trim();
        return r;
    }
    friend BiPoly operator-(const BiPoly& f, const BiPoly& g) { return f + (-g); }
    BiPoly operator-() const {
        BiPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend BiPoly operator*(const BiPoly& f, const BiPoly& g) {
        if (f.is_zero() || g.is_zero()) return BiPoly();
        BiPoly r;
        r.da_ = f.da_ + g.da_;
        r.db_ = f.db_ + g.db_;
        r.c_.assign(static_cast<size_t>(r.da_ + 1) * (r.db_ + 1), C(0));
        for (int i = 0; i <= f.da_; ++i)
            for (int j = 0; j <= f.db_; ++j) {
                const C& x = f.coeff(i, j);
                if (x.is_zero()) continue;
                for (int k = 0; k <= g.da_; ++k)
                    for (int l = 0; l <= g.db_; ++l) {
                        const C& y = g.coeff(k, l);
                        if (y.is_zero()) continue;
                        r.at(i + k, j + l) += x * y;
                    }
            }
        r.trim();
        return r;
    }
    friend BiPoly operator*(const C& s, const BiPoly& f) {
        BiPoly r = f;
        for (auto& x : r.c_) x = s * x;
        r.trim();
        return r;
    }
    BiPoly& operator+=(const BiPoly& o) { return *this = *this + o; }
    BiPoly& operator-=(const BiPoly& o) { return *this = *this - o; }
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }
    friend bool operator==(const BiPoly& f, const BiPoly& g) { return (f - g).is_zero(); }
    friend bool operator!=(const BiPoly& f, const BiPoly& g) { return !(f == g); }

    C eval(const C& a, const C& b) const {
        C acc(0);
        for (int i = da_; i >= 0; --i) {
            C row(0);
            for (int j = db_; j >= 0; --j) row = row * b + coeff(i, j);
            acc = acc * a + row;
        }
        return acc;
    }

    // substitute a -> a0 + s*A, b -> b0 + s*B (an affine reparametrization)
    BiPoly shift_scale(const C& a0, const C& b0, const C& s) const {
        // Horner in a, then in b, over BiPoly arithmetic with linear substitutes
        BiPoly A = monomial(s, 1, 0) + BiPoly(a0);
        BiPoly B = monomial(s, 0, 1) + BiPoly(b0);
        BiPoly acc;
        for (int i = da_; i >= 0; --i) {
            BiPoly row;
            for (int j = db_; j >= 0; --j) row = row * B + BiPoly(coeff(i, j));
            acc = acc * A + row;
        }
        return acc;
    }

    template <class F>
    BiPoly<C> map_coeffs(F&& fn) const {
        BiPoly r = *this;
        for (auto& x : r.c_) x = fn(x);
        r.trim();
        return r;
    }

    std::vector<std::pair<std::pair<int, int>, C>> terms() const {
        std::vector<std::pair<std::pair<int, int>, C>> out;
        for (int i = 0; i <= da_; ++i)
            for (int j = 0; j <= db_; ++j)
                if (!coeff(i, j).is_zero()) out.push_back({{i, j}, coeff(i, j)});
        return out;
    }

private:
    C& at(int i, int j) { return c_[static_cast<size_t>(i) * (db_ + 1) + j]; }
    void trim() {
        // shrink degrees to the support
        int na = -1, nb = -1;
        for (int i = 0; i <= da_; ++i)
            for (int j = 0; j <= db_; ++j)
                if (!coeff(i, j).is_zero()) {
                    na = std::max(na, i);
                    nb = std::max(nb, j);
                }
        if (na < 0) {
            da_ = db_ = -1;
            c_.clear();
            return;
        }
        if (na == da_ && nb == db_) return;
        std::vector<C> nc(static_cast<size_t>(na + 1) * (nb + 1), C(0));
        for (int i = 0; i <= na; ++i)
            for (int j = 0; j <= nb; ++j) nc[static_cast<size_t>(i) * (nb + 1) + j] = coeff(i, j);
        da_ = na;
        db_ = nb;
        c_ = std::move(nc);
    }
    int da_, db_;
    std::vector<C> c_;
};

}  // namespace dforge
