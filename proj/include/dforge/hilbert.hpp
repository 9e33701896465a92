#pragma once

#include <vector>

#include "dforge/errors.hpp"
#include "dforge/int.hpp"

// Rational Hilbert symbols (a,b)_v over Q_p and R, by the classical closed formulas.

namespace dforge {

// place: p > 0 a prime, or 0 for the real place
inline int hilbert_symbol(const Rat& a_in, const Rat& b_in, const Int& place) {
    if (a_in.is_zero() || b_in.is_zero()) throw Error("ZeroArgument", "hilbert symbol needs nonzero arguments");
    // symbols only depend on square classes; clear denominators
    Int a = a_in.num() * a_in.den();
    Int b = b_in.num() * b_in.den();
    if (place.is_zero()) return (a.sgn() < 0 && b.sgn() < 0) ? -1 : +1;
    Int p = place;
    if (p == Int(2)) {
        int alpha = a.val(p), beta = b.val(p);
        Int u = a.remove(p), w = b.remove(p);
        auto eps = [](const Int& n) { return ((n - Int(1)) / Int(2)).fmod(Int(2)) == Int(1); };
        auto om = [](const Int& n) { return ((n * n - Int(1)) / Int(8)).fmod(Int(2)) == Int(1); };
        bool minus = (eps(u) && eps(w));
        if (alpha % 2 != 0 && om(w)) minus = !minus;
        if (beta % 2 != 0 && om(u)) minus = !minus;
        return minus ? -1 : +1;
    }
    int alpha = a.val(p), beta = b.val(p);
    Int u = a.remove(p), w = b.remove(p);
    bool minus = false;
    if (alpha % 2 != 0 && beta % 2 != 0 && ((p - Int(1)) / Int(2)).is_odd()) minus = !minus;
    if (beta % 2 != 0 && u.fmod(p).jacobi(p) == -1) minus = !minus;
    if (alpha % 2 != 0 && w.fmod(p).jacobi(p) == -1) minus = !minus;
    return minus ? -1 : +1;
}

inline int hilbert_symbol(long a, long b, long place) {
    return hilbert_symbol(Rat(a), Rat(b), Int(place));
}

// places where the quaternion algebra (a,b) ramifies: finite primes and possibly 0 = infinity
inline std::vector<Int> quaternion_ramified_places(const Rat& a, const Rat& b) {
    std::vector<Int> out;
    if (hilbert_symbol(a, b, Int(0)) == -1) out.push_back(Int(0));
    Int prod = a.num() * a.den() * b.num() * b.den() * Int(2);
    auto fac = factor(prod.abs());
    for (auto& [p, e] : fac)
        if (hilbert_symbol(a, b, p) == -1) out.push_back(p);
    return out;
}

}  // namespace dforge
