// Graded commutative F2-algebras given by generators and relations, with
// dimensions per tridegree computed by brute force: enumerate monomials of
// the tridegree and subtract the rank of the relation ideal there. Shares no
// code with the library.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct Gen {
    std::string name;
    int s, f, w;
};

using Exps = std::vector<int>;
using Poly = std::vector<Exps>;  // sum of monomials

class Presentation {
public:
    std::vector<Gen> gens;
    std::vector<Poly> relations;

    int index(const std::string& n) const {
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name == n) return static_cast<int>(i);
        throw std::runtime_error("unknown generator " + n);
    }
    // Monomial from a product like {"h0","h0","b"}.
    Exps mono(const std::vector<std::string>& factors) const {
        Exps e(gens.size(), 0);
        for (const auto& n : factors) ++e[static_cast<std::size_t>(index(n))];
        return e;
    }
    void relate(const std::vector<std::vector<std::string>>& terms) {
        Poly p;
        for (const auto& t : terms) p.push_back(mono(t));
        relations.push_back(p);
    }

    std::array<int, 3> degree(const Exps& e) const {
        std::array<int, 3> d{0, 0, 0};
        for (std::size_t i = 0; i < e.size(); ++i) {
            d[0] += e[i] * gens[i].s;
            d[1] += e[i] * gens[i].f;
            d[2] += e[i] * gens[i].w;
        }
        return d;
    }

    // Generators of positive filtration are enumerated under the filtration
    // budget. The filtration-zero generators are enumerated except the last
    // two, which are solved for from the remaining stem and weight.
    std::vector<Exps> monomials(int s, int f, int w) const {
        std::vector<std::size_t> pos, zero;
        for (std::size_t i = 0; i < gens.size(); ++i) (gens[i].f > 0 ? pos : zero).push_back(i);
        if (zero.size() < 2) throw std::runtime_error("need two filtration-zero generators");
        std::vector<Exps> out;
        Exps e(gens.size(), 0);
        enum_pos(pos, 0, zero, e, {s, f, w}, out);
        return out;
    }

    int dim(int s, int f, int w) const {
        auto basis = monomials(s, f, w);
        if (basis.empty()) return 0;
        std::map<Exps, std::size_t> idx;
        for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = i;
        std::vector<std::vector<std::uint64_t>> rows;
        const std::size_t words = (basis.size() + 63) / 64;
        for (const auto& r : relations) {
            auto dr = degree(r.front());
            for (const auto& m : monomials(s - dr[0], f - dr[1], w - dr[2])) {
                std::vector<std::uint64_t> row(words, 0);
                for (const auto& t : r) {
                    Exps p = m;
                    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t[i];
                    auto it = idx.find(p);
                    if (it == idx.end()) throw std::runtime_error("relation leaves its degree");
                    row[it->second / 64] ^= std::uint64_t{1} << (it->second % 64);
                }
                rows.push_back(std::move(row));
            }
        }
        return static_cast<int>(basis.size()) - rank(rows, basis.size());
    }

private:
    void enum_pos(const std::vector<std::size_t>& pos, std::size_t k, const std::vector<std::size_t>& zero, Exps& e,
                  std::array<int, 3> rem, std::vector<Exps>& out) const {
        if (k == pos.size()) {
            if (rem[1] == 0) enum_zero(zero, 0, e, rem[0], rem[2], out);
            return;
        }
        const Gen& g = gens[pos[k]];
        for (int n = 0; n * g.f <= rem[1]; ++n) {
            e[pos[k]] = n;
            enum_pos(pos, k + 1, zero, e, {rem[0] - n * g.s, rem[1] - n * g.f, rem[2] - n * g.w}, out);
        }
        e[pos[k]] = 0;
    }

    void enum_zero(const std::vector<std::size_t>& zero, std::size_t k, Exps& e, int rs, int rw,
                   std::vector<Exps>& out) const {
        if (k + 2 == zero.size()) {
            const Gen& a = gens[zero[k]];
            const Gen& b = gens[zero[k + 1]];
            const long det = static_cast<long>(a.s) * b.w - static_cast<long>(a.w) * b.s;
            if (det == 0) throw std::runtime_error("degenerate generator pair");
            const long ni = static_cast<long>(rs) * b.w - static_cast<long>(rw) * b.s;
            const long nj = static_cast<long>(a.s) * rw - static_cast<long>(a.w) * rs;
            if (ni % det || nj % det || ni / det < 0 || nj / det < 0) return;
            e[zero[k]] = static_cast<int>(ni / det);
            e[zero[k + 1]] = static_cast<int>(nj / det);
            out.push_back(e);
            e[zero[k]] = e[zero[k + 1]] = 0;
            return;
        }
        // All filtration-zero generators have nonpositive stem and negative
        // weight, so the remaining weight bounds the exponent.
        const Gen& g = gens[zero[k]];
        for (int n = 0; n * -g.w <= -rw && n * -g.s <= -rs; ++n) {
            e[zero[k]] = n;
            enum_zero(zero, k + 1, e, rs - n * g.s, rw - n * g.w, out);
        }
        e[zero[k]] = 0;
    }

    static int rank(std::vector<std::vector<std::uint64_t>>& rows, std::size_t ncols) {
        int r = 0;
        for (std::size_t c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
            const std::uint64_t bit = std::uint64_t{1} << (c % 64);
            std::size_t piv = static_cast<std::size_t>(r);
            while (piv < rows.size() && !(rows[piv][c / 64] & bit)) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[piv], rows[static_cast<std::size_t>(r)]);
            for (std::size_t k = 0; k < rows.size(); ++k)
                if (k != static_cast<std::size_t>(r) && (rows[k][c / 64] & bit))
                    for (std::size_t j = 0; j < rows[k].size(); ++j) rows[k][j] ^= rows[static_cast<std::size_t>(r)][j];
            ++r;
        }
        return r;
    }
};

// Ext over A(0) and A(1) as printed for the two finite-field classes.
inline Presentation ext_a0(bool q3) {
    Presentation P;
    if (!q3) {
        P.gens = {{"u", -1, 0, -1}, {"tau", 0, 0, -1}, {"h0", 0, 1, 0}};
        P.relate({{"u", "u"}});
    } else {
        P.gens = {{"rho", -1, 0, -1}, {"tau2", 0, 0, -2}, {"h0", 0, 1, 0}, {"rhotau", -1, 0, -2}};
        P.relate({{"rho", "rho"}});
        P.relate({{"rho", "h0"}});
        P.relate({{"rho", "rhotau"}});
        P.relate({{"rhotau", "rhotau"}});
    }
    return P;
}

inline Presentation ext_a1(bool q3) {
    Presentation P;
    if (!q3) {
        P.gens = {{"u", -1, 0, -1}, {"tau", 0, 0, -1}, {"h0", 0, 1, 0},
                  {"h1", 1, 1, 1},  {"a", 4, 3, 2},    {"b", 8, 4, 4}};
        P.relate({{"u", "u"}});
        P.relate({{"h0", "h1"}});
        P.relate({{"tau", "h1", "h1", "h1"}});
        P.relate({{"h1", "a"}});
        P.relate({{"a", "a"}, {"h0", "h0", "b"}});
    } else {
        P.gens = {{"rho", -1, 0, -1}, {"h0", 0, 1, 0},      {"h1", 1, 1, 1},   {"b", 8, 4, 4},
                  {"rhotau", -1, 0, -2}, {"tauh1", 1, 1, 0}, {"tau2", 0, 0, -2}, {"a", 4, 3, 2}};
        P.relate({{"rho", "h0"}});
        P.relate({{"h0", "h1"}});
        P.relate({{"rho", "rho"}});
        P.relate({{"a", "a"}, {"h0", "h0", "b"}});
        P.relate({{"h0", "tauh1"}, {"rho", "h1", "tauh1"}});
        P.relate({{"h1", "h1", "tauh1"}});
        P.relate({{"rhotau", "h1", "h1", "h1"}});
        P.relate({{"rho", "tauh1"}, {"h1", "rhotau"}});
        P.relate({{"rho", "rhotau"}});
        P.relate({{"tau2", "h1", "h1", "h1"}, {"rho", "a"}});
        P.relate({{"h1", "a"}});
        P.relate({{"tauh1", "tauh1"}, {"tau2", "h1", "h1"}});
        P.relate({{"rhotau", "rhotau"}});
        P.relate({{"tauh1", "rhotau"}, {"rho", "tau2", "h1"}});
        P.relate({{"tauh1", "a"}});
    }
    return P;
}

}  // namespace oracle
