#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dforge/composite.hpp"

// Unit groups of composite fields presented by certificates: a torsion generator and a
// list of units, with the Galois action expressed inside the group.  Everything the
// certificate claims is re-verified by direct multiplication; downstream consumers
// additionally verify their own outputs, so nothing here is trusted.
//
// The coboundary equation for the twisting map is solved as integer linear algebra on
// the exponent vectors (free part over Z, torsion part mod the root-of-unity order).

namespace dforge {

struct UnitGroupCert {
    const CompositeField* F = nullptr;
    CElem zeta;                      // root of unity
    long zeta_order = 2;
    std::vector<CElem> gens;         // infinite-order units (possibly redundant rank-wise)

    // Galois action on generators: sigma(gens[j]) = zeta^{t[j]} * prod gens[k]^{M[k][j]}
    struct Action {
        std::vector<long> t;
        std::vector<std::vector<long>> M;  // column j describes sigma(gens[j])
    };
    std::map<GalElem, long> zeta_action;   // sigma(zeta) = zeta^{zeta_action[sigma]}
    std::map<GalElem, Action> actions;

    CElem value(long y, const std::vector<Int>& x) const {
        CElem v = F->one();
        long yy = ((y % zeta_order) + zeta_order) % zeta_order;
        CElem zp = F->one();
        for (long i = 0; i < yy; ++i) zp = zp * zeta;
        v = zp;
        for (size_t k = 0; k < gens.size(); ++k) {
            Int e = x[k];
            if (e.is_zero()) continue;
            CElem base = gens[k];
            if (e.sgn() < 0) {
                base = F->one() / base;
                e = -e;
            }
            CElem acc = F->one();
            Int n = e;
            CElem b = base;
            while (!n.is_zero()) {
                if (n.is_odd()) acc = acc * b;
                b = b * b;
                n = n / Int(2);
            }
            v = v * acc;
        }
        return v;
    }

    // verify: zeta has the stated order, gens are units (norm +-1), the action tables
    // reproduce sigma(u) exactly
    void verify() const {
        CElem zp = zeta;
        for (long i = 1; i < zeta_order; ++i) {
            if (zp.is_one()) throw UnverifiableCertificate("zeta order too small");
            zp = zp * zeta;
        }
        if (!zp.is_one()) throw UnverifiableCertificate("zeta order wrong");
        for (auto& u : gens) {
            Rat n = F->norm(u);
            if (!(n == Rat(1) || n == Rat(-1))) throw NotAUnit("generator has norm != +-1");
            // integrality: characteristic polynomial of multiplication by u over the
            // composite basis must have integer coefficients
            int dim = F->dim();
            std::vector<std::vector<Rat>> M(dim, std::vector<Rat>(dim, Rat(0)));
            for (int j = 0; j < dim; ++j) {
                std::vector<Rat> e(dim, Rat(0));
                e[j] = Rat(1);
                CElem col = u * F->make(e);
                for (int i = 0; i < dim; ++i) M[i][j] = col.co[i];
            }
            // Faddeev-LeVerrier
            std::vector<std::vector<Rat>> Ak = M;
            for (int k = 1; k <= dim; ++k) {
                Rat tr(0);
                for (int i = 0; i < dim; ++i) tr += Ak[i][i];
                Rat ck = -(tr / Rat(k));
                if (!ck.is_integer()) throw NotAUnit("generator is not an algebraic integer");
                if (k == dim) break;
                std::vector<std::vector<Rat>> B(dim, std::vector<Rat>(dim, Rat(0)));
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) B[i][j] = Ak[i][j] + (i == j ? ck : Rat(0));
                std::vector<std::vector<Rat>> C(dim, std::vector<Rat>(dim, Rat(0)));
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        Rat acc(0);
                        for (int l = 0; l < dim; ++l) acc += M[i][l] * B[l][j];
                        C[i][j] = acc;
                    }
                Ak = C;
            }
        }
        for (auto& [g, act] : actions) {
            for (size_t j = 0; j < gens.size(); ++j) {
                std::vector<Int> x(gens.size(), Int(0));
                for (size_t k = 0; k < gens.size(); ++k) x[k] = Int(act.M[k][j]);
                CElem rhs = value(act.t[j], x);
                if (!(F->apply(g, gens[j]) == rhs))
                    throw UnverifiableCertificate("Galois action table wrong for a generator");
            }
            auto it = zeta_action.find(g);
            if (it == zeta_action.end()) throw UnverifiableCertificate("missing zeta action");
            std::vector<Int> none(gens.size(), Int(0));
            if (!(F->apply(g, zeta) == value(it->second, none)))
                throw UnverifiableCertificate("zeta action wrong");
        }
    }
};

// ---- integer linear algebra: solve A x = b over Z with some congruence rows ----
// Rows can be exact (mod 0) or modular (mod m); solved by lifting modular rows with
// auxiliary unknowns and running a Hermite-style elimination.

struct ZLinearSystem {
    // each row: coefficients over the unknowns, rhs, modulus (0 = exact equation)
    std::vector<std::vector<Int>> rows;
    std::vector<Int> rhs;
    std::vector<Int> mod;
    int ncols = 0;

    void add_row(std::vector<Int> r, Int b, Int m) {
        ncols = std::max(ncols, static_cast<int>(r.size()));
        rows.push_back(std::move(r));
        rhs.push_back(std::move(b));
        mod.push_back(std::move(m));
    }

    // any integer solution, or nullopt; complete (column-HNF style elimination with
    // a unimodular transform, processing equations sequentially)
    std::optional<std::vector<Int>> solve() const {
        int n = ncols;
        int aux = 0;
        for (size_t i = 0; i < rows.size(); ++i)
            if (!mod[i].is_zero()) ++aux;
        int total = n + aux;
        int m = static_cast<int>(rows.size());
        std::vector<std::vector<Int>> TA(m, std::vector<Int>(total, Int(0)));
        std::vector<Int> B = rhs;
        int ai = 0;
        for (int i = 0; i < m; ++i) {
            for (size_t j = 0; j < rows[i].size(); ++j) TA[i][j] = rows[i][j];
            if (!mod[i].is_zero()) TA[i][n + ai++] = mod[i];
        }
        // U: transformed unknowns y with x = U y
        std::vector<std::vector<Int>> U(total, std::vector<Int>(total, Int(0)));
        for (int j = 0; j < total; ++j) U[j][j] = Int(1);
        std::vector<bool> pinned(total, false);
        std::vector<Int> yval(total, Int(0));
        auto colop = [&](int dst, int src, const Int& q) {
            // col_dst -= q * col_src
            for (int i = 0; i < m; ++i) TA[i][dst] -= q * TA[i][src];
            for (int k = 0; k < total; ++k) U[k][dst] -= q * U[k][src];
        };
        for (int i = 0; i < m; ++i) {
            Int b = B[i];
            for (int j = 0; j < total; ++j)
                if (pinned[j]) b -= TA[i][j] * yval[j];
            // gcd-reduce the free columns of row i into a single pivot
            while (true) {
                int j1 = -1, j2 = -1;
                for (int j = 0; j < total; ++j) {
                    if (pinned[j] || TA[i][j].is_zero()) continue;
                    if (j1 < 0)
                        j1 = j;
                    else {
                        j2 = j;
                        break;
                    }
                }
                if (j2 < 0) {
                    if (j1 < 0) {
                        if (!b.is_zero()) return std::nullopt;
                    } else {
                        if (!b.divisible_by(TA[i][j1])) return std::nullopt;
                        yval[j1] = b.divexact(TA[i][j1]);
                        pinned[j1] = true;
                    }
                    break;
                }
                // make |TA[i][j1]| >= |TA[i][j2]| then reduce
                if (TA[i][j1].abs() < TA[i][j2].abs()) std::swap(j1, j2);
                Int q = TA[i][j1] / TA[i][j2];  // truncated division
                colop(j1, j2, q);
            }
        }
        // x = U * y (free variables zero)
        std::vector<Int> out(n, Int(0));
        for (int k = 0; k < n; ++k) {
            Int acc(0);
            for (int j = 0; j < total; ++j)
                if (pinned[j] && !U[k][j].is_zero()) acc += U[k][j] * yval[j];
            out[k] = acc;
        }
        return out;
    }
};

}  // namespace dforge
