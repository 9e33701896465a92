#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dforge/dirichlet.hpp"
#include "dforge/int.hpp"

// Level arithmetic: the restriction-of-scalars conductor relation, Atkin-Li twist-level
// bounds, per-factor level resolution, level lowering, and predicted Hilbert levels.

namespace dforge {

// N_E as "fixed integer generator" times the rad_30 tail to the first power
struct IdealConductorFormula {
    Int fixed;          // the ideal is (fixed * rad_30 c) in the base field
    bool has_rad_tail;  // almost always true for the Frey families
};

struct ConductorData {
    Int field_disc;              // discriminant of the base field F
    int field_degree;
    IdealConductorFormula n_e;   // conductor of E over F
};

// integer-with-symbolic-radical-power values: fixed * (rad_30 c)^{rad_exp}
struct RadValue {
    Int fixed{1};
    int rad_exp = 0;

    friend RadValue operator*(const RadValue& a, const RadValue& b) {
        return {a.fixed * b.fixed, a.rad_exp + b.rad_exp};
    }
    bool operator==(const RadValue& o) const { return fixed == o.fixed && rad_exp == o.rad_exp; }
    std::string str() const {
        std::string s = fixed.str();
        if (rad_exp == 1) s += " * rad30(c)";
        if (rad_exp > 1) s += " * rad30(c)^" + std::to_string(rad_exp);
        return s;
    }
};

// N_B = disc(F)^2 * Norm(N_E); the rad tail norms to rad^deg for a principal ideal
// generated by a rational integer
inline RadValue restriction_conductor(const ConductorData& cd) {
    RadValue out;
    out.fixed = cd.field_disc * cd.field_disc *
                Int::pow(cd.n_e.fixed, static_cast<unsigned long>(cd.field_degree));
    out.rad_exp = cd.n_e.has_rad_tail ? cd.field_degree : 0;
    return out;
}

// Atkin-Li: twist of a newform of level N, weight k, character eps by a character chi
// of prime-power conductor p^beta
struct TwistLevelResult {
    Int level;                   // level of the twist as a cusp form
    DirichletCharacter character;  // eps * chi^2
    int minimality_case = 0;     // 1..3 when newform-level minimality is guaranteed
};

inline TwistLevelResult atkin_li_twist(const Int& N, int weight, const DirichletCharacter& eps,
                                       const DirichletCharacter& chi) {
    (void)weight;
    TwistLevelResult out;
    out.level = N;
    out.character = eps * chi * chi;
    DirichletCharacter epschi = eps * chi;
    out.minimality_case = 3;  // meet of the per-prime cases; degrades to 0 when unknown
    for (auto& [p, beta] : factor(Int(chi.conductor()))) {
        int alpha = Int(eps.conductor()).val(p);
        int gamma = Int(epschi.conductor()).val(p);
        int delta = N.val(p);
        int deltap = std::max({delta, beta + 1, beta + gamma});
        out.level = out.level * Int::pow(p, static_cast<unsigned long>(deltap - delta));
        int c;
        if (delta > std::max(beta + 1, beta + gamma))
            c = 1;
        else if (delta < std::max(beta + 1, beta + gamma) && gamma >= 2)
            c = 2;
        else if (alpha == 1 && beta == 1 && gamma == 1 && delta == 1)
            c = 3;
        else
            c = 0;
        if (c == 0 || out.minimality_case == 0)
            out.minimality_case = 0;
        else
            out.minimality_case = std::min(out.minimality_case, c);
    }
    return out;
}

// per-factor level candidate
struct LevelCandidate {
    std::map<Int, int> exponents;  // prime -> exponent (fixed part)
    int rad_exp = 1;               // radical tail exponent (1 per factor)
    DirichletCharacter character;

    Int fixed() const {
        Int v(1);
        for (auto& [p, e] : exponents) v *= Int::pow(p, e);
        return v;
    }
};

// Split N_B = prod N_i^{dim_i} into per-factor levels for two factors that are twists
// of each other by chi (and chi^{-1}).  For each prime: enumerate the admissible
// exponent pairs under the Atkin-Li constraints; unique answers are required per prime
// unless `emit_all`, in which case the full candidate set is returned.
struct LevelSplit {
    std::vector<std::pair<LevelCandidate, LevelCandidate>> candidates;
};

inline LevelSplit resolve_level_split(const RadValue& NB, int dim1, int dim2,
                                      const DirichletCharacter& eps,
                                      const DirichletCharacter& chi) {
    if (NB.rad_exp != dim1 + dim2)
        throw NoAdmissibleSplit("radical tail exponent does not match factor dimensions");
    auto fac = factor(NB.fixed);
    // per-prime admissible pairs
    std::vector<std::pair<Int, std::vector<std::pair<int, int>>>> per_prime;
    for (auto& [p, T] : fac) {
        std::vector<std::pair<int, int>> pairs;
        int amin = Int(eps.conductor()).val(p) > 0 ? 1 : 0;
        int beta = Int(chi.conductor()).val(p);
        DirichletCharacter epschi2 = eps * chi * chi;
        for (int x1 = amin; dim1 * x1 <= T; ++x1) {
            if ((T - dim1 * x1) % dim2 != 0) continue;
            int x2 = (T - dim1 * x1) / dim2;
            if (x2 < amin) continue;
            if (beta == 0) {
                // twisting cannot change this prime's exponent at all
                if (x1 != x2) continue;
            } else {
                // f2 = f1 twisted by chi: ord_p(level of twist) = max{x1, beta+1, beta+gamma}
                // as an upper bound for the newform level; the character of f2 forces
                // ord_p >= v_p(cond(eps chi^2)). And symmetrically for the inverse twist.
                int gamma = Int(epschi2.conductor()).val(p);
                int up2 = std::max({x1, beta + 1, beta + gamma});
                int lo2 = Int(epschi2.conductor()).val(p);
                (void)lo2;
                int charmin2 = Int((eps * chi * chi).conductor()).val(p);
                if (x2 > up2 || x2 < charmin2) continue;
                DirichletCharacter epsinv = eps;  // character of f2 is eps (same Galois class)
                int up1 = std::max({x2, beta + 1, beta + Int(epsinv.conductor()).val(p)});
                if (x1 > up1) continue;
            }
            pairs.emplace_back(x1, x2);
        }
        if (pairs.empty()) throw NoAdmissibleSplit("no exponent split at p=" + p.str());
        per_prime.emplace_back(p, pairs);
    }
    // cartesian product of per-prime choices
    LevelSplit out;
    std::vector<size_t> idx(per_prime.size(), 0);
    while (true) {
        LevelCandidate c1, c2;
        c1.character = eps;
        c2.character = eps;
        for (size_t i = 0; i < per_prime.size(); ++i) {
            c1.exponents[per_prime[i].first] = per_prime[i].second[idx[i]].first;
            c2.exponents[per_prime[i].first] = per_prime[i].second[idx[i]].second;
        }
        out.candidates.emplace_back(c1, c2);
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == per_prime[k].second.size()) idx[k++] = 0;
        if (k == idx.size()) break;
        if (per_prime.empty()) break;
    }
    // deterministic order: smaller 5-part (or lexicographic fixed value) first
    std::sort(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
        return a.first.fixed() < b.first.fixed();
    });
    return out;
}

// level lowering: remove the radical tail and all powers of l
inline Int level_lower(const LevelCandidate& cand, const Int& l) {
    if (l <= Int(5)) throw Error("BadLoweringPrime", "level lowering needs l > 5");
    Int out(1);
    for (auto& [p, e] : cand.exponents)
        if (p != l) out *= Int::pow(p, e);
    // sanity: character conductor divides the lowered level
    Int cond(cand.character.conductor());
    if (!out.divisible_by(cond))
        throw Error("InternalLevel", "character conductor does not divide the lowered level");
    return out;
}

// predicted Hilbert levels over the base field: strip the radical tail from the
// conductor formula, keeping the per-prime fixed exponents
struct HilbertLevel {
    std::map<std::string, int> prime_exponents;  // by prime label, e.g. "p2"
    std::string str() const {
        std::string s;
        for (auto& [p, e] : prime_exponents) {
            if (e == 0) continue;
            if (!s.empty()) s += " * ";
            s += p;
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s.empty() ? "(1)" : s;
    }
};

}  // namespace dforge
