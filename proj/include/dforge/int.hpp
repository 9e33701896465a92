#pragma once

#include <gmp.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Arbitrary-precision integers and rationals, value semantics over GMP.
// All higher layers use these two types; no raw mpz handling elsewhere.

namespace dforge {

class Int {
public:
    Int() { mpz_init(z_); }
    Int(long v) { mpz_init_set_si(z_, v); }
    Int(int v) : Int(static_cast<long>(v)) {}
    explicit Int(unsigned long v) { mpz_init_set_ui(z_, v); }
    explicit Int(std::string_view s) {
        if (mpz_init_set_str(z_, std::string(s).c_str(), 10) != 0) {
            mpz_clear(z_);
            throw std::invalid_argument("Int: bad decimal literal");
        }
    }
    Int(const Int& o) { mpz_init_set(z_, o.z_); }
    Int(Int&& o) noexcept {
        mpz_init(z_);
        mpz_swap(z_, o.z_);
    }
    Int& operator=(const Int& o) {
        if (this != &o) mpz_set(z_, o.z_);
        return *this;
    }
    Int& operator=(Int&& o) noexcept {
        mpz_swap(z_, o.z_);
        return *this;
    }
    ~Int() { mpz_clear(z_); }

    friend Int operator+(const Int& a, const Int& b) { Int r; mpz_add(r.z_, a.z_, b.z_); return r; }
    friend Int operator-(const Int& a, const Int& b) { Int r; mpz_sub(r.z_, a.z_, b.z_); return r; }
    friend Int operator*(const Int& a, const Int& b) { Int r; mpz_mul(r.z_, a.z_, b.z_); return r; }
    Int operator-() const { Int r; mpz_neg(r.z_, z_); return r; }
    Int& operator+=(const Int& o) { mpz_add(z_, z_, o.z_); return *this; }
    Int& operator-=(const Int& o) { mpz_sub(z_, z_, o.z_); return *this; }
    Int& operator*=(const Int& o) { mpz_mul(z_, z_, o.z_); return *this; }

    // Truncated division (C semantics), plus floor and exact variants.
    friend Int operator/(const Int& a, const Int& b) { Int r; mpz_tdiv_q(r.z_, a.z_, b.z_); return r; }
    friend Int operator%(const Int& a, const Int& b) { Int r; mpz_tdiv_r(r.z_, a.z_, b.z_); return r; }
    Int fdiv(const Int& b) const { Int r; mpz_fdiv_q(r.z_, z_, b.z_); return r; }
    Int fmod(const Int& b) const { Int r; mpz_fdiv_r(r.z_, z_, b.z_); return r; }
    Int divexact(const Int& b) const { Int r; mpz_divexact(r.z_, z_, b.z_); return r; }
    bool divisible_by(const Int& b) const { return mpz_divisible_p(z_, b.z_) != 0; }

    friend bool operator==(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) == 0; }
    friend bool operator!=(const Int& a, const Int& b) { return !(a == b); }
    friend bool operator<(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) < 0; }
    friend bool operator<=(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) <= 0; }
    friend bool operator>(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) > 0; }
    friend bool operator>=(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) >= 0; }

    bool is_zero() const { return mpz_sgn(z_) == 0; }
    bool is_one() const { return mpz_cmp_si(z_, 1) == 0; }
    int sgn() const { return mpz_sgn(z_); }
    bool is_odd() const { return mpz_odd_p(z_) != 0; }
    bool is_even() const { return mpz_even_p(z_) != 0; }
    Int abs() const { Int r; mpz_abs(r.z_, z_); return r; }

    bool fits_long() const { return mpz_fits_slong_p(z_) != 0; }
    long to_long() const {
        if (!fits_long()) throw std::overflow_error("Int::to_long");
        return mpz_get_si(z_);
    }
    double to_double() const { return mpz_get_d(z_); }

    static Int gcd(const Int& a, const Int& b) { Int r; mpz_gcd(r.z_, a.z_, b.z_); return r; }
    static Int lcm(const Int& a, const Int& b) { Int r; mpz_lcm(r.z_, a.z_, b.z_); return r; }
    // g = gcd(a,b) = s*a + t*b
    static Int gcdext(const Int& a, const Int& b, Int& s, Int& t) {
        Int g;
        mpz_gcdext(g.z_, s.z_, t.z_, a.z_, b.z_);
        return g;
    }
    static Int pow(const Int& a, unsigned long e) { Int r; mpz_pow_ui(r.z_, a.z_, e); return r; }
    static Int powmod(const Int& a, const Int& e, const Int& m) {
        Int r;
        mpz_powm(r.z_, a.z_, e.z_, m.z_);
        return r;
    }
    // Inverse mod m; throws if not invertible.
    static Int invmod(const Int& a, const Int& m) {
        Int r;
        if (mpz_invert(r.z_, a.z_, m.z_) == 0) throw std::domain_error("Int::invmod: not invertible");
        return r;
    }

    bool is_perfect_square() const { return mpz_perfect_square_p(z_) != 0; }
    Int isqrt() const { Int r; mpz_sqrt(r.z_, z_); return r; }
    // Largest e with p^e | *this (*this != 0).
    int val(const Int& p) const {
        if (is_zero()) throw std::domain_error("Int::val of zero");
        Int r;
        return static_cast<int>(mpz_remove(r.z_, z_, p.z_));
    }
    Int remove(const Int& p) const { Int r; mpz_remove(r.z_, z_, p.z_); return r; }

    bool is_probab_prime() const { return mpz_probab_prime_p(z_, 30) != 0; }
    Int next_prime() const { Int r; mpz_nextprime(r.z_, z_); return r; }

    // Legendre/Jacobi symbol (n odd positive).
    int jacobi(const Int& n) const { return mpz_jacobi(z_, n.z_); }

    size_t bits() const { return mpz_sizeinbase(z_, 2); }
    std::string str() const {
        char* s = mpz_get_str(nullptr, 10, z_);
        std::string out(s);
        std::free(s);
        return out;
    }
    size_t hash() const { return mpz_get_ui(z_) * 1315423911u + static_cast<size_t>(mpz_sgn(z_)); }

    friend std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

    mpz_srcptr raw() const { return z_; }
    mpz_ptr raw() { return z_; }

private:
    mpz_t z_;
};

inline Int operator*(long a, const Int& b) { return Int(a) * b; }
inline Int operator+(long a, const Int& b) { return Int(a) + b; }
inline Int operator-(long a, const Int& b) { return Int(a) - b; }

// Trial division by primes below `bound`; returns (prime, exponent) pairs and leftover cofactor.
inline std::vector<std::pair<Int, int>> trial_factor(Int n, long bound, Int* leftover = nullptr) {
    std::vector<std::pair<Int, int>> out;
    if (n.is_zero()) throw std::domain_error("trial_factor(0)");
    if (n.sgn() < 0) n = -n;
    for (Int p(2); p <= Int(bound) && Int(1) < n; p = p.next_prime()) {
        if (p * p > n) break;
        if (n.divisible_by(p)) {
            int e = n.val(p);
            n = n.remove(p);
            out.emplace_back(p, e);
        }
    }
    if (n > Int(1) && n <= Int(bound) * Int(bound) && n.is_probab_prime()) {
        out.emplace_back(n, 1);
        n = Int(1);
    }
    if (leftover) *leftover = n;
    return out;
}

// Full factorization via trial division + Pollard rho (adequate for the integer sizes here).
std::vector<std::pair<Int, int>> factor(const Int& n_in);

namespace detail {
inline Int pollard_rho(const Int& n) {
    // Brent's variant with deterministic parameter sweep.
    for (long c = 1; c < 100; ++c) {
        Int x(2), y(2), d(1);
        Int cc(c);
        auto f = [&](const Int& v) { return (v * v + cc) % n; };
        long limit = 1 << 22;
        for (long i = 0; i < limit && d.is_one(); ++i) {
            x = f(x);
            y = f(f(y));
            d = Int::gcd((x - y).abs(), n);
        }
        if (!d.is_one() && d != n) return d;
    }
    throw std::runtime_error("pollard_rho failed");
}
}  // namespace detail

inline std::vector<std::pair<Int, int>> factor(const Int& n_in) {
    Int left;
    auto out = trial_factor(n_in, 100000, &left);
    std::vector<Int> stack;
    if (left > Int(1)) stack.push_back(left);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m.is_probab_prime()) {
            out.emplace_back(m, 1);
            continue;
        }
        if (m.is_perfect_square()) {
            Int r = m.isqrt();
            stack.push_back(r);
            stack.push_back(r);
            continue;
        }
        Int d = detail::pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m.divexact(d));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Int, int>> merged;
    for (auto& pe : out) {
        if (!merged.empty() && merged.back().first == pe.first)
            merged.back().second += pe.second;
        else
            merged.push_back(pe);
    }
    return merged;
}

// Odd part of |n| with all factors of 2,3,5 removed; used for rad_30-style bookkeeping.
inline Int strip_2_3_5(Int n) {
    n = n.abs();
    if (n.is_zero()) return n;
    for (long p : {2L, 3L, 5L}) n = n.remove(Int(p));
    return n;
}

class Rat {
public:
    Rat() { mpq_init(q_); }
    Rat(long v) {
        mpq_init(q_);
        mpq_set_si(q_, v, 1);
    }
    Rat(int v) : Rat(static_cast<long>(v)) {}
    Rat(const Int& num) {
        mpq_init(q_);
        mpz_set(mpq_numref(q_), num.raw());
    }
    Rat(const Int& num, const Int& den) : Rat(num) {
        if (den.is_zero()) throw std::domain_error("Rat: zero denominator");
        mpz_set(mpq_denref(q_), den.raw());
        mpq_canonicalize(q_);
    }
    Rat(long num, long den) : Rat(Int(num), Int(den)) {}
    explicit Rat(std::string_view s) {
        mpq_init(q_);
        if (mpq_set_str(q_, std::string(s).c_str(), 10) != 0) {
            mpq_clear(q_);
            throw std::invalid_argument("Rat: bad literal");
        }
        mpq_canonicalize(q_);
    }
    Rat(const Rat& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    Rat(Rat&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    Rat& operator=(const Rat& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rat& operator=(Rat&& o) noexcept {
        mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rat() { mpq_clear(q_); }

    friend Rat operator+(const Rat& a, const Rat& b) { Rat r; mpq_add(r.q_, a.q_, b.q_); return r; }
    friend Rat operator-(const Rat& a, const Rat& b) { Rat r; mpq_sub(r.q_, a.q_, b.q_); return r; }
    friend Rat operator*(const Rat& a, const Rat& b) { Rat r; mpq_mul(r.q_, a.q_, b.q_); return r; }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw std::domain_error("Rat: division by zero");
        Rat r;
        mpq_div(r.q_, a.q_, b.q_);
        return r;
    }
    Rat operator-() const { Rat r; mpq_neg(r.q_, q_); return r; }
    Rat& operator+=(const Rat& o) { mpq_add(q_, q_, o.q_); return *this; }
    Rat& operator-=(const Rat& o) { mpq_sub(q_, q_, o.q_); return *this; }
    Rat& operator*=(const Rat& o) { mpq_mul(q_, q_, o.q_); return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
    int sgn() const { return mpq_sgn(q_); }
    Rat abs() const { Rat r; mpq_abs(r.q_, q_); return r; }
    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat::inv of zero");
        Rat r;
        mpq_inv(r.q_, q_);
        return r;
    }

    Int num() const { return from_mpz(mpq_numref(q_)); }
    Int den() const { return from_mpz(mpq_denref(q_)); }
    bool is_integer() const { return mpz_cmp_si(mpq_denref(q_), 1) == 0; }
    double to_double() const { return mpq_get_d(q_); }

    static Rat pow(const Rat& a, long e) {
        if (e < 0) return pow(a.inv(), -e);
        Rat r(1), base = a;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    // p-adic valuation of a nonzero rational.
    int val(const Int& p) const {
        if (is_zero()) throw std::domain_error("Rat::val of zero");
        return num().val(p) - den().val(p);
    }

    std::string str() const {
        char* s = mpq_get_str(nullptr, 10, q_);
        std::string out(s);
        std::free(s);
        return out;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& v) { return os << v.str(); }

private:
    static Int from_mpz(mpz_srcptr m) {
        Int r;
        mpz_set(r.raw(), m);
        return r;
    }
    mpq_t q_;
};

inline Rat operator*(long a, const Rat& b) { return Rat(a) * b; }

}  // namespace dforge
