#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dforge/int.hpp"

// Dense univariate polynomials over a coefficient ring R.
// R must provide +,-,*, is_zero(), and value-initialize to 0; division where used.

namespace dforge {

template <class R>
class Poly {
public:
    Poly() = default;
    Poly(R c) : c_{std::move(c)} { trim(); }
    explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly x() { return Poly(std::vector<R>{R(0), R(1)}); }
    static Poly monomial(const R& c, int deg) {
        std::vector<R> v(deg + 1, R(0));
        v[deg] = c;
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    bool is_zero() const { return c_.empty(); }
    const R& operator[](int i) const {
        static const R zero{0};
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : zero;
    }
    const std::vector<R>& coeffs() const { return c_; }
    R lead() const { return is_zero() ? R(0) : c_.back(); }

    void set_coeff(int i, const R& v) {
        if (i >= static_cast<int>(c_.size())) c_.resize(i + 1, R(0));
        c_[i] = v;
        trim();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<R> v(std::max(a.c_.size(), b.c_.size()), R(0));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<R> v(std::max(a.c_.size(), b.c_.size()), R(0));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
        return Poly(std::move(v));
    }
    Poly operator-() const {
        std::vector<R> v(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) v[i] = -c_[i];
        return Poly(std::move(v));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<R> v(a.c_.size() + b.c_.size() - 1, R(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(v));
    }
    friend Poly operator*(const R& s, const Poly& a) {
        std::vector<R> v(a.c_.size());
        for (size_t i = 0; i < a.c_.size(); ++i) v[i] = s * a.c_[i];
        return Poly(std::move(v));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] - b.c_[i]).is_zero()) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Division with remainder; requires invertible leading coefficient of d (field coefficients).
    static void divmod(const Poly& n, const Poly& d, Poly& q, Poly& r) {
        if (d.is_zero()) throw std::domain_error("Poly: division by zero");
        q = Poly();
        r = n;
        R dl = d.lead();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            R f = r.lead() / dl;
            int k = r.degree() - d.degree();
            Poly t = monomial(f, k);
            q += t;
            r -= t * d;
        }
    }
    friend Poly operator/(const Poly& n, const Poly& d) {
        Poly q, r;
        divmod(n, d, q, r);
        return q;
    }
    friend Poly operator%(const Poly& n, const Poly& d) {
        Poly q, r;
        divmod(n, d, q, r);
        return r;
    }

    template <class S>
    S eval(const S& x) const {
        S acc(0);
        for (int i = degree(); i >= 0; --i) acc = acc * x + S(c_[i]);
        return acc;
    }
    R eval(const R& x) const {
        R acc(0);
        for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (degree() < 1) return Poly();
        std::vector<R> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = R(static_cast<long>(i)) * c_[i];
        return Poly(std::move(v));
    }

    // p(x) -> p(x + a)
    Poly shift(const R& a) const {
        Poly res;
        Poly lin(std::vector<R>{a, R(1)});
        for (int i = degree(); i >= 0; --i) res = res * lin + Poly(c_[i]);
        return res;
    }
    // p(x) -> p(s*x)
    Poly scale_arg(const R& s) const {
        std::vector<R> v = c_;
        R f(1);
        for (size_t i = 1; i < v.size(); ++i) {
            f = f * s;
            v[i] = v[i] * f;
        }
        return Poly(std::move(v));
    }
    Poly reversed() const {
        std::vector<R> v(c_.rbegin(), c_.rend());
        return Poly(std::move(v));
    }
    Poly monic() const {
        if (is_zero()) return *this;
        R inv = R(1) / lead();
        return inv * *this;
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = a % b;
            a = b;
            b = r;
        }
        return a.is_zero() ? a : a.monic();
    }

    static Poly powmod(Poly a, Int e, const Poly& m) {
        Poly r(R(1));
        a = a % m;
        while (!e.is_zero()) {
            if (e.is_odd()) r = (r * a) % m;
            a = (a * a) % m;
            e = e / Int(2);
        }
        return r;
    }

    // Sylvester-matrix resultant via fraction-free Gaussian elimination over the generic ring is
    // overkill here; coefficients are fields in all call sites, so triangularize directly.
    static R resultant(const Poly& f, const Poly& g) {
        if (f.is_zero() || g.is_zero()) return R(0);
        Poly a = f, b = g;
        R acc(1);
        int sign = 1;
        while (b.degree() > 0) {
            Poly r = a % b;
            int da = a.degree(), db = b.degree(), dr = r.is_zero() ? -1 : r.degree();
            if (da % 2 == 1 && db % 2 == 1) sign = -sign;
            R lb = b.lead();
            R p(1);
            for (int i = 0; i < da - (dr < 0 ? 0 : dr); ++i) p = p * lb;
            acc = acc * p;
            if (r.is_zero()) return R(0);
            a = b;
            b = r;
        }
        // b is a nonzero constant
        R lb = b.lead();
        R p(1);
        for (int i = 0; i < a.degree(); ++i) p = p * lb;
        acc = acc * p;
        return sign < 0 ? -acc : acc;
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            if ((*this)[i].is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << c_[i] << ")";
            if (i > 0) os << "*" << var;
            if (i > 1) os << "^" << i;
            first = false;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<R> c_;
};

using QPoly = Poly<Rat>;

// ---- integer-polynomial helpers (content, discriminant, primitive part) ----

inline QPoly qpoly_from_int(const std::vector<long>& v) {
    std::vector<Rat> c;
    c.reserve(v.size());
    for (long x : v) c.emplace_back(x);
    return QPoly(std::move(c));
}

inline Int qpoly_common_den(const QPoly& f) {
    Int d(1);
    for (const auto& c : f.coeffs()) d = Int::lcm(d, c.den());
    return d;
}

inline bool qpoly_is_integral(const QPoly& f) {
    for (const auto& c : f.coeffs())
        if (!c.is_integer()) return false;
    return true;
}

// content of an integer polynomial (gcd of coefficients), zero poly -> 0
inline Int zpoly_content(const QPoly& f) {
    Int g(0);
    for (const auto& c : f.coeffs()) g = Int::gcd(g, c.num());
    return g;
}

inline Rat qpoly_disc(const QPoly& f) {
    if (f.degree() < 1) throw std::domain_error("disc of constant");
    Rat res = QPoly::resultant(f, f.derivative());
    Rat lc = f.lead();
    int n = f.degree();
    long s = (static_cast<long>(n) * (n - 1) / 2) % 2;
    Rat d = res / lc;
    return s ? -d : d;
}

}  // namespace dforge
