#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dforge/errors.hpp"
#include "dforge/int.hpp"

// Dirichlet characters mod N as exponent vectors on a fixed generator system of (Z/N)*.
// Generators per CRT factor: smallest primitive root for odd prime powers; for 2^k the
// pair (2^k - 1, 5) with k >= 3, the single generator 3 for k = 2.  Characters are
// ordered lexicographically by exponent vector; the "modulus.index" label follows that.

namespace dforge {

struct UnitGroupModN {
    long modulus = 1;
    std::vector<long> gens;        // generators of (Z/N)*
    std::vector<long> gen_orders;  // orders of the generators (direct product decomposition)

    static UnitGroupModN make(long N) {
        UnitGroupModN G;
        G.modulus = N;
        if (N <= 2) return G;  // trivial group
        auto fac = factor(Int(N));
        for (auto& [pI, e] : fac) {
            long p = pI.to_long();
            long pk = 1;
            for (int i = 0; i < e; ++i) pk *= p;
            if (p == 2) {
                if (e == 1) continue;
                if (e == 2) {
                    G.gens.push_back(crt_lift(3, 4, N));
                    G.gen_orders.push_back(2);
                } else {
                    G.gens.push_back(crt_lift(pk - 1, pk, N));
                    G.gen_orders.push_back(2);
                    G.gens.push_back(crt_lift(5, pk, N));
                    G.gen_orders.push_back(pk / 4);
                }
            } else {
                long phi = pk / p * (p - 1);
                long g = smallest_primitive_root(p, pk, phi);
                G.gens.push_back(crt_lift(g, pk, N));
                G.gen_orders.push_back(phi);
            }
        }
        return G;
    }

    // discrete log of n (coprime to modulus) as exponent vector on gens; brute force
    std::vector<long> dlog(long n) const {
        n %= modulus;
        if (n < 0) n += modulus;
        std::vector<long> exps(gens.size(), 0);
        // enumerate the direct product (moduli here are small)
        std::vector<long> cur(gens.size(), 0);
        long total = 1;
        for (long o : gen_orders) total *= o;
        long val = 1 % modulus;
        for (long cnt = 0;; ++cnt) {
            if (val == n) return cur;
            if (cnt >= total) break;
            // increment odometer, updating val incrementally
            size_t i = 0;
            while (i < cur.size()) {
                cur[i]++;
                val = static_cast<long>((__int128)val * gens[i] % modulus);
                if (cur[i] < gen_orders[i]) break;
                // wrapped: multiply by g^{-order} == identity, so val is already correct
                cur[i] = 0;
                ++i;
            }
            if (i == cur.size()) break;
        }
        throw Error("NotCoprime", "dlog of element not in (Z/N)*");
    }

private:
    static long crt_lift(long r, long pk, long N) {
        // element of (Z/N)* that is r mod pk and 1 mod N/pk
        Int m1(pk), m2(N / pk);
        Int s, t;
        Int::gcdext(m1, m2, s, t);
        // x = r * (t*m2) + 1 * (s*m1) mod N
        Int x = (Int(r) * t * m2 + s * m1).fmod(Int(N));
        return x.to_long();
    }
    static long smallest_primitive_root(long p, long pk, long phi) {
        auto fac = factor(Int(phi));
        for (long g = 2; g < pk; ++g) {
            if (std::gcd(g, pk) != 1) continue;
            bool prim = true;
            for (auto& [q, e] : fac) {
                if (Int::powmod(Int(g), Int(phi) / q, Int(pk)).is_one()) {
                    prim = false;
                    break;
                }
            }
            if (prim) return g;
        }
        throw Error("InternalPrimRoot", "no primitive root found");
    }
};

// value of a character: exp(2*pi*i * num / den), stored reduced with den | group exponent
struct RootOfUnity {
    long num = 0;
    long den = 1;
    void reduce() {
        num %= den;
        if (num < 0) num += den;
        long g = std::gcd(num == 0 ? den : num, den);
        num /= g;
        den /= g;
    }
    bool is_one() const { return num == 0; }
    bool is_minus_one() const { return den == 2 && num == 1; }
    long order() const { return den; }
    friend RootOfUnity operator*(RootOfUnity a, RootOfUnity b) {
        long d = std::lcm(a.den, b.den);
        RootOfUnity r{a.num * (d / a.den) + b.num * (d / b.den), d};
        r.reduce();
        return r;
    }
    friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
        return a.num == b.num && a.den == b.den;
    }
};

class DirichletCharacter {
public:
    DirichletCharacter() = default;
    DirichletCharacter(std::shared_ptr<const UnitGroupModN> G, std::vector<long> exps)
        : G_(std::move(G)), e_(std::move(exps)) {
        normalize();
    }
    static DirichletCharacter trivial(long N) {
        auto G = group_for(N);
        return DirichletCharacter(G, std::vector<long>(G->gens.size(), 0));
    }

    long modulus() const { return G_ ? G_->modulus : 1; }
    const std::vector<long>& exponents() const { return e_; }

    RootOfUnity operator()(long n) const {
        if (!G_ || G_->gens.empty()) {
            if (std::gcd(n, static_cast<long>(modulus())) != 1) return {0, 0};  // zero marker
            return {0, 1};
        }
        long m = modulus();
        long r = n % m;
        if (r < 0) r += m;
        if (std::gcd(r, m) != 1) return {0, 0};  // zero value: denominator 0 marks it
        auto dl = G_->dlog(r);
        RootOfUnity acc{0, 1};
        for (size_t i = 0; i < dl.size(); ++i) {
            RootOfUnity v{dl[i] * e_[i], G_->gen_orders[i]};
            v.reduce();
            acc = acc * v;
        }
        return acc;
    }
    bool is_zero_at(long n) const { return std::gcd(((n % modulus()) + modulus()) % modulus(), modulus()) != 1; }

    long order() const {
        long o = 1;
        for (size_t i = 0; i < e_.size(); ++i) {
            long d = std::gcd(e_[i], G_->gen_orders[i]);
            o = std::lcm(o, G_->gen_orders[i] / d);
        }
        return o;
    }
    bool is_even() const { return (*this)(-1).is_one(); }
    bool is_odd() const { return !is_even(); }

    long conductor() const {
        long N = modulus();
        std::vector<long> divs;
        for (long d = 1; d * d <= N; ++d)
            if (N % d == 0) {
                divs.push_back(d);
                if (d != N / d) divs.push_back(N / d);
            }
        std::sort(divs.begin(), divs.end());
        for (long M : divs) {
            bool ok = true;
            for (long n = 1; n < N && ok; ++n) {
                if (std::gcd(n, N) != 1) continue;
                if (n % M == 1 % M && !(*this)(n).is_one()) ok = false;
            }
            if (ok) return M;
        }
        return N;
    }

    // restriction to a new modulus M (the character of modulus M inducing/induced), valid
    // when conductor() | M; also used to lift to multiples of the modulus.
    DirichletCharacter change_modulus(long M) const;

    friend DirichletCharacter operator*(const DirichletCharacter& A, const DirichletCharacter& B) {
        long M = std::lcm(A.modulus(), B.modulus());
        DirichletCharacter a = A.change_modulus(M), b = B.change_modulus(M);
        std::vector<long> e(a.e_.size());
        for (size_t i = 0; i < e.size(); ++i)
            e[i] = (a.e_[i] + b.e_[i]) % a.G_->gen_orders[i];
        return DirichletCharacter(a.G_, e);
    }
    DirichletCharacter inverse() const {
        std::vector<long> e(e_.size());
        for (size_t i = 0; i < e_.size(); ++i) e[i] = (G_->gen_orders[i] - e_[i]) % G_->gen_orders[i];
        return DirichletCharacter(G_, e);
    }
    // Galois conjugate by zeta -> zeta^a (a coprime to the order)
    DirichletCharacter galois_conjugate(long a) const {
        std::vector<long> e(e_.size());
        for (size_t i = 0; i < e_.size(); ++i) e[i] = (e_[i] * a) % G_->gen_orders[i];
        return DirichletCharacter(G_, e);
    }

    friend bool operator==(const DirichletCharacter& A, const DirichletCharacter& B) {
        return A.modulus() == B.modulus() && A.e_ == B.e_;
    }
    bool operator<(const DirichletCharacter& o) const { return e_ < o.e_; }

    std::string label() const;  // "modulus.index" per the deterministic ordering

    static std::shared_ptr<const UnitGroupModN> group_for(long N) {
        static std::map<long, std::shared_ptr<const UnitGroupModN>> cache;
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
        auto G = std::make_shared<UnitGroupModN>(UnitGroupModN::make(N));
        cache[N] = G;
        return G;
    }

private:
    void normalize() {
        for (size_t i = 0; i < e_.size(); ++i) {
            e_[i] %= G_->gen_orders[i];
            if (e_[i] < 0) e_[i] += G_->gen_orders[i];
        }
    }
    std::shared_ptr<const UnitGroupModN> G_;
    std::vector<long> e_;
};

struct CharacterFilter {
    std::optional<long> order;
    std::optional<long> conductor;
    std::optional<int> parity;  // +1 even, -1 odd
};

// complete filtered enumeration in lexicographic exponent order
inline std::vector<DirichletCharacter> dirichlet_characters(long modulus,
                                                            CharacterFilter filter = {}) {
    auto G = DirichletCharacter::group_for(modulus);
    std::vector<DirichletCharacter> out;
    std::vector<long> e(G->gens.size(), 0);
    while (true) {
        DirichletCharacter chi(G, e);
        bool ok = true;
        if (filter.order && chi.order() != *filter.order) ok = false;
        if (ok && filter.conductor && chi.conductor() != *filter.conductor) ok = false;
        if (ok && filter.parity && (chi.is_even() ? 1 : -1) != *filter.parity) ok = false;
        if (ok) out.push_back(chi);
        // odometer in lexicographic order (last index fastest)
        int i = static_cast<int>(e.size()) - 1;
        while (i >= 0) {
            if (++e[i] < G->gen_orders[i]) break;
            e[i] = 0;
            --i;
        }
        if (i < 0) break;
        if (G->gens.empty()) break;
    }
    return out;
}

inline DirichletCharacter DirichletCharacter::change_modulus(long M) const {
    auto GM = group_for(M);
    // exponents on new generators: chi'(g) = chi(g mod old modulus); requires cond | gcd(M, N)
    std::vector<long> e(GM->gens.size(), 0);
    for (size_t i = 0; i < GM->gens.size(); ++i) {
        long g = GM->gens[i];
        // adjust g by multiples of M to make it coprime to the old modulus
        long N = modulus();
        long cand = g;
        int guard = 0;
        while (std::gcd(cand, N) != 1) {
            cand += M;
            if (++guard > 10000) throw Error("InternalCharacter", "no coprime lift");
        }
        RootOfUnity v = (*this)(cand);
        if (v.den == 0) throw Error("InternalCharacter", "zero at lifted generator");
        // need v = zeta_{ord}^k with ord | gen_orders[i]
        long ord = GM->gen_orders[i];
        if (ord % v.den != 0) throw Error("InternalCharacter", "character does not descend to modulus " + std::to_string(M));
        e[i] = v.num * (ord / v.den);
    }
    DirichletCharacter chi(GM, e);
    return chi;
}

inline std::string DirichletCharacter::label() const {
    auto all = dirichlet_characters(modulus());
    for (size_t i = 0; i < all.size(); ++i)
        if (all[i] == *this) return std::to_string(modulus()) + "." + std::to_string(i);
    throw Error("InternalCharacter", "label not found");
}

inline DirichletCharacter character_from_label(const std::string& label) {
    auto dot = label.find('.');
    if (dot == std::string::npos) throw Error("FormatError", "bad character label " + label);
    long N = std::stol(label.substr(0, dot));
    size_t idx = static_cast<size_t>(std::stol(label.substr(dot + 1)));
    auto all = dirichlet_characters(N);
    if (idx >= all.size()) throw Error("FormatError", "character index out of range in " + label);
    return all[idx];
}

}  // namespace dforge
