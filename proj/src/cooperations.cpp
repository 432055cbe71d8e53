#include "motivic/cooperations.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mot {

std::map<std::string, TriDegree> ring_generator_degrees(const BaseField& F) {
    static const std::map<std::string, TriDegree> all = {
        {"u", {-1, 0, -1}},  {"rho", {-1, 0, -1}},   {"tau", {0, 0, -1}}, {"tau2", {0, 0, -2}},
        {"rhotau", {-1, 0, -2}}, {"h0", {0, 1, 0}}, {"h1", {1, 1, 1}},   {"tauh1", {1, 1, 0}},
        {"a", {4, 3, 2}},    {"b", {8, 4, 4}}};
    std::map<std::string, TriDegree> out;
    for (const auto& n : ring_generator_names(FragmentKind::A1Dual, F)) out[n] = all.at(n);
    return out;
}

namespace {

f2::BitVec unit(std::size_t n, std::size_t i) {
    f2::BitVec e(n);
    e.set(i);
    return e;
}

// Keeps the classes selected by `keep`, projecting products onto them.
ExtChart select(const ExtChart& E, const std::function<bool(TriDegree, std::size_t)>& keep) {
    ExtChart out = E;
    out.classes.clear();
    out.tags.clear();
    out.products.clear();
    std::map<TriDegree, std::vector<long>> index;  // old index -> new index or -1
    for (const auto& [d, labels] : E.classes) {
        auto& idx = index[d];
        long next = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (keep(d, i)) {
                idx.push_back(next++);
                out.classes[d].push_back(labels[i]);
                auto t = E.tags.find(d);
                if (t != E.tags.end()) out.tags[d].push_back(t->second[i]);
            } else {
                idx.push_back(-1);
            }
        }
        if (!next) out.classes.erase(d);
    }
    for (const auto& [g, table] : E.products) {
        auto& dst = out.products[g];
        for (const auto& [d, rows] : table) {
            if (!out.classes.count(d)) continue;
            const TriDegree t = d + E.ring_gens.at(g);
            const std::size_t tn = static_cast<std::size_t>(out.dim(t));
            const auto& tidx = index.count(t) ? index.at(t) : std::vector<long>{};
            auto& v = dst[d];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (index.at(d)[i] < 0) continue;
                f2::BitVec r(tn);
                for (auto j : rows[i].ones())
                    if (tidx[j] >= 0) r.set(static_cast<std::size_t>(tidx[j]));
                v.push_back(r);
            }
        }
    }
    return out;
}

}  // namespace

ExtChart shift_chart(const ExtChart& E, int ds, int dw) {
    ExtChart out = E;
    const TriDegree sh{ds, 0, dw};
    out.window = {E.window.smin + ds, E.window.smax + ds, E.window.fmax, E.window.wmin + dw, E.window.wmax + dw};
    out.classes.clear();
    out.tags.clear();
    out.products.clear();
    for (const auto& [d, l] : E.classes) out.classes[d + sh] = l;
    for (const auto& [d, l] : E.tags) out.tags[d + sh] = l;
    for (const auto& [g, table] : E.products)
        for (const auto& [d, rows] : table) out.products[g][d + sh] = rows;
    if (ds || dw) out.name = "S^{" + std::to_string(ds) + "," + std::to_string(dw) + "}" + E.name;
    return out;
}

ExtChart adams_cover(const ExtChart& base, int m) {
    if (m < 0) throw std::invalid_argument("adams_cover: negative index");
    if (m > base.window.fmax) throw std::invalid_argument("adams_cover: index beyond the chart's filtration range");
    ExtChart out = base;
    out.window.fmax = base.window.fmax - m;
    out.name = base.name + "<" + std::to_string(m) + ">";
    out.classes.clear();
    out.tags.clear();
    out.products.clear();
    const TriDegree sh{0, -m, 0};
    for (const auto& [d, l] : base.classes)
        if (d.f >= m) out.classes[d + sh] = l;
    for (const auto& [d, l] : base.tags)
        if (d.f >= m) out.tags[d + sh] = l;
    for (const auto& [g, table] : base.products)
        for (const auto& [d, rows] : table)
            if (d.f >= m) out.products[g][d + sh] = rows;
    return out;
}

namespace {

// Stem of a class with its coefficient factor (rho, rho tau or u) taken
// off, read from the basis label. Truncations compare this stem, so a
// coefficient multiple survives exactly when the class it multiplies does.
int coefficient_blind_stem(TriDegree d, const std::string& label) {
    std::istringstream in(label);
    std::string tok;
    int lift = 0;
    while (in >> tok)
        if (tok == "rho" || tok == "rhotau" || tok == "u") ++lift;
    return d.s + lift;
}

}  // namespace

ExtChart truncate_stem(const ExtChart& E, int n) {
    ExtChart out = select(E, [&](TriDegree d, std::size_t i) {
        return coefficient_blind_stem(d, E.classes.at(d)[i]) >= n;
    });
    out.name = "t>=" + std::to_string(n) + "(" + E.name + ")";
    return out;
}

namespace {

// tau^{h1}_{>=n} of the m-th Adams cover of E. Components under h1 are formed
// in E itself, so a family counts as cut when the cover or the truncation
// removes one of its members.
ExtChart cover_h1_truncate(const ExtChart& E, int m, int n) {
    if (!E.has_product("h1")) return truncate_stem(adams_cover(E, m), n);
    std::map<TriDegree, std::size_t> base;
    std::size_t N = 0;
    for (const auto& [d, l] : E.classes) {
        base[d] = N;
        N += l.size();
    }
    std::vector<std::size_t> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<char> kept(N, 0), h0_linked(N, 0), at_edge(N, 0);
    const TriDegree h1 = E.ring_gens.at("h1");
    const bool has_h0 = E.has_product("h0");
    for (const auto& [d, l] : E.classes) {
        for (std::size_t i = 0; i < l.size(); ++i) {
            const std::size_t node = base[d] + i;
            kept[node] = d.f >= m && coefficient_blind_stem(d, l[i]) >= n;
            const f2::BitVec e = unit(l.size(), i);
            if (auto r = E.multiply("h1", d, e)) {
                for (auto j : r->ones()) parent[root(node)] = root(base[d + h1] + j);
            } else {
                at_edge[node] = 1;
            }
            if (has_h0) {
                if (auto r = E.multiply("h0", d, e); r && r->any()) {
                    h0_linked[node] = 1;
                    const std::size_t tb = base[d + E.ring_gens.at("h0")];
                    for (auto j : r->ones()) h0_linked[tb + j] = 1;
                }
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t x = 0; x < N; ++x) comps[root(x)].push_back(x);
    std::vector<char> drop(N, 0);
    for (const auto& [r, members] : comps) {
        int survivors = 0;
        bool isolated = true, edge = false, cut = false;
        for (auto x : members) {
            if (!kept[x]) {
                cut = true;
                continue;
            }
            ++survivors;
            isolated = isolated && !h0_linked[x];
            edge = edge || at_edge[x];
        }
        if (cut && survivors >= 2 && isolated && edge)
            for (auto x : members) drop[x] = 1;
    }
    ExtChart out =
        adams_cover(select(E, [&](TriDegree d, std::size_t i) { return kept[base.at(d) + i] && !drop[base.at(d) + i]; }), m);
    out.name = "t^h1>=" + std::to_string(n) + "(" + E.name + (m ? "<" + std::to_string(m) + ">" : "") + ")";
    return out;
}

}  // namespace

ExtChart h1_truncate(const ExtChart& E, int n) { return cover_h1_truncate(E, 0, n); }


ExtChart direct_sum(const std::string& name, const std::vector<ExtChart>& parts, const ExtWindow& W,
                    const std::map<std::string, TriDegree>& ring_gens) {
    ExtChart out;
    out.name = name;
    out.window = W;
    out.ring_gens = ring_gens;
    out.provenance = "sum";
    if (!parts.empty()) {
        out.field = parts.front().field;
        out.over = FragmentKind::A1Dual;
    }
    // Offsets of each part inside every tridegree.
    std::map<TriDegree, std::vector<std::size_t>> offset;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        for (const auto& [d, l] : parts[p].classes) {
            if (!W.contains(d)) continue;
            auto& off = offset[d];
            off.resize(parts.size() + 1, 0);
        }
    }
    for (auto& [d, off] : offset) {
        std::size_t acc = 0;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            off[p] = acc;
            const int n = parts[p].dim(d);
            acc += static_cast<std::size_t>(n);
            auto pl = parts[p].classes.find(d);
            if (pl == parts[p].classes.end()) continue;
            auto pt = parts[p].tags.find(d);
            for (std::size_t i = 0; i < pl->second.size(); ++i) {
                out.classes[d].push_back(pl->second[i]);
                out.tags[d].push_back(pt != parts[p].tags.end() ? pt->second[i] : parts[p].name);
            }
        }
        off[parts.size()] = acc;
    }
    for (const auto& [g, gd] : ring_gens) {
        auto& table = out.products[g];
        for (const auto& [d, off] : offset) {
            const TriDegree t = d + gd;
            if (!W.contains(t)) continue;
            const std::size_t tn = static_cast<std::size_t>(out.dim(t));
            auto toff = offset.find(t);
            auto& rows = table[d];
            for (std::size_t p = 0; p < parts.size(); ++p) {
                const int n = parts[p].dim(d);
                const bool knows = parts[p].ring_gens.count(g) > 0;
                for (int i = 0; i < n; ++i) {
                    f2::BitVec r(tn);
                    if (knows) {
                        auto v = parts[p].multiply(g, d, unit(static_cast<std::size_t>(n), static_cast<std::size_t>(i)));
                        if (!v)
                            throw std::logic_error("direct_sum: part " + parts[p].name + " lacks " + g +
                                                   " products at " + d.str());
                        for (auto j : v->ones()) r.set(toff->second[p] + j);
                    }
                    rows.push_back(r);
                }
            }
        }
    }
    return out;
}

ExtChart formal_chart(const std::string& name, const BaseField& F, TriDegree origin, const std::vector<FormalGen>& gens,
                      const ExtWindow& W) {
    const auto degs = ring_generator_degrees(F);
    ExtChart out;
    out.name = name;
    out.field = F;
    out.over = FragmentKind::A1Dual;
    out.window = W;
    out.provenance = "formal";
    out.ring_gens = degs;
    // Weight raised by the capped or filtration-bounded generators, so that
    // weight-lowering generators can compensate for it.
    int boost = 0;
    for (const auto& g : gens) {
        const TriDegree d = degs.at(g.name);
        if (d.w <= 0) continue;
        boost += d.w * (g.cap >= 0 ? g.cap : std::max(0, (W.fmax - origin.f) / std::max(1, d.f)));
    }
    std::vector<int> emax;
    for (const auto& g : gens) {
        const TriDegree d = degs.at(g.name);
        int m = g.cap;
        if (m < 0) {
            if (d.f > 0)
                m = std::max(0, (W.fmax - origin.f) / d.f);
            else if (d.w < 0)
                m = std::max(0, (origin.w + boost - W.wmin) / -d.w);
            else
                throw std::invalid_argument("formal_chart: generator " + g.name + " needs a cap");
        }
        emax.push_back(m);
    }
    std::map<std::vector<int>, std::pair<TriDegree, std::size_t>> where;
    std::vector<int> e(gens.size(), 0);
    std::function<void(std::size_t, TriDegree)> rec = [&](std::size_t k, TriDegree at) {
        if (k == gens.size()) {
            if (!W.contains(at)) return;
            std::string label;
            for (std::size_t j = 0; j < gens.size(); ++j) {
                if (!e[j]) continue;
                if (!label.empty()) label += ' ';
                label += gens[j].name + (e[j] > 1 ? "^" + std::to_string(e[j]) : "");
            }
            auto& l = out.classes[at];
            where[e] = {at, l.size()};
            l.push_back(label.empty() ? "1" : label);
            out.tags[at].push_back(name);
            return;
        }
        for (int x = 0; x <= emax[k]; ++x) {
            e[k] = x;
            rec(k + 1, at + TriDegree{degs.at(gens[k].name).s * x, degs.at(gens[k].name).f * x,
                                      degs.at(gens[k].name).w * x});
        }
        e[k] = 0;
    };
    rec(0, origin);
    for (const auto& [g, gd] : degs) {
        std::size_t gi = gens.size();
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (gens[j].name == g) gi = j;
        auto& table = out.products[g];
        for (const auto& [d, l] : out.classes) {
            const TriDegree t = d + gd;
            if (!W.contains(t)) continue;
            table[d].assign(l.size(), f2::BitVec(static_cast<std::size_t>(out.dim(t))));
        }
        if (gi == gens.size()) continue;
        for (const auto& [ex, pos] : where) {
            const TriDegree t = pos.first + gd;
            if (!W.contains(t)) continue;
            auto nx = ex;
            ++nx[gi];
            if (gens[gi].cap >= 0 && nx[gi] > gens[gi].cap) continue;
            auto it = where.find(nx);
            if (it == where.end()) throw std::logic_error("formal_chart: product left the enumeration");
            table[pos.first][pos.second].set(it->second.second);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Ext over F(q = 1 mod 4) of a chart computed over C: the chart tensored
// with F2[u]/(u^2). The u-copy sits at (s-1, f, w-1).
ExtChart tensor_m2(const ExtChart& C, const BaseField& F, const ExtWindow& W) {
    ExtChart lower = shift_chart(C, -1, -1);
    for (auto& [d, l] : lower.classes)
        for (auto& x : l) x = x == "1" ? "u" : "u " + x;
    ExtChart upper = C;
    for (auto* ch : {&upper, &lower}) {
        ch->field = F;
        if (ch->tags.empty())
            for (const auto& [d, l] : ch->classes) ch->tags[d].assign(l.size(), C.name);
    }
    auto gens = ring_generator_degrees(F);
    ExtChart out = direct_sum(C.name, {upper, lower}, W, gens);
    auto& table = out.products["u"];
    for (auto& [d, rows] : table) {
        const TriDegree t = d + gens.at("u");
        const int nu = upper.dim(d);
        const std::size_t tn = static_cast<std::size_t>(out.dim(t));
        const std::size_t lower_off = static_cast<std::size_t>(upper.dim(t));
        for (int i = 0; i < nu; ++i) {
            f2::BitVec r(tn);
            r.set(lower_off + static_cast<std::size_t>(i));
            rows[static_cast<std::size_t>(i)] = r;
        }
    }
    return out;
}

bool q1_via_complex(const BaseField& F) { return F.kind == FieldKind::QOne; }

ExtWindow grow(const ExtWindow& W, int ds_lo, int ds_hi, int df, int dw_lo, int dw_hi) {
    return {W.smin - ds_lo, W.smax + ds_hi, W.fmax + df, W.wmin - dw_lo, W.wmax + dw_hi};
}

}  // namespace

BaseCharts base_charts(const BaseField& F, const ExtWindow& W, int cover_room, const std::string& cache_dir) {
    BaseCharts B;
    B.field = F;
    B.window = W;
    B.cover_room = cover_room;
    const BaseField G = q1_via_complex(F) ? BaseField::complex_like() : F;
    // Room for the suspensions used by the decompositions and for the
    // u-copy of the q = 1 mod 4 construction.
    const ExtWindow Wb = grow(W, 16, 1, cover_room, 8, 1);
    ChartOptions opt;
    opt.cache_dir = cache_dir;
    B.kq = ext_minimal(unit_comodule(FragmentKind::A1Dual, G), Wb, opt);
    B.ksp = ext_minimal(brown_gitler(0, 1, G), Wb, opt);
    B.hz = ext_minimal(unit_comodule(FragmentKind::A0Dual, G), grow(W, 16, 1, 0, 8, 1), opt);
    return B;
}

int binary_digit_sum(int k) { return std::popcount(static_cast<unsigned>(k)); }

namespace {

// Z_i over the construction field of B (C for q = 1 mod 4), on window W.
ZModule z_module_raw(int i, const BaseCharts& B, const ExtWindow& W) {
    if (i < 0) throw std::invalid_argument("z_module: negative index");
    const BaseField G = q1_via_complex(B.field) ? BaseField::complex_like() : B.field;
    ZModule Z;
    Z.i = i;
    std::vector<ExtChart> parts;
    const bool even = i % 2 == 0;
    const int m = even ? i : i - 1;
    if (m > B.cover_room) throw std::invalid_argument("z_module: base charts lack filtration room");
    ExtChart top = cover_h1_truncate(even ? B.kq : B.ksp, m, even ? 2 * i : 2 * i - 2);
    Z.summands.push_back(std::string("t^h1_{>=") + std::to_string(even ? 2 * i : 2 * i - 2) + "}Ext(" +
                         (even ? "kq" : "ksp") + "<" + std::to_string(m) + ">)");
    top.tags.clear();
    parts.push_back(top);
    const int jn = even ? i / 2 : (i - 1) / 2;
    const bool c = G.kind == FieldKind::ComplexLike;
    for (int j = 0; j < jn; ++j) {
        const std::string nm = "S^{" + std::to_string(4 * j) + "," + std::to_string(2 * j) + "}Ext_A(0)";
        ExtChart h;
        if (c) {
            h = shift_chart(B.hz, 4 * j, 2 * j);
            h.tags.clear();
        } else {
            // Over q = 3 mod 4 the rho multiples are b-torsion, leaving the towers.
            h = formal_chart(nm, G, {4 * j, 0, 2 * j}, {{"tau2", -1}, {"h0", -1}, {"rhotau", 1}}, W);
        }
        h.name = nm;
        Z.summands.push_back(nm);
        parts.push_back(h);
    }
    const std::string t = c ? "tau" : "tau2";
    if (i % 4 == 2) {
        // The bottom class is the stem 2i-2 cell, whose weight is i-1. It
        // spans a full copy of the coefficients, as Ext^0 of a free summand.
        const TriDegree o{2 * i - 2, 0, i - 1};
        const std::string nm = "S^{" + std::to_string(o.s) + "," + std::to_string(o.w) + "}" + (c ? "F2[tau]" : "M2");
        if (c) {
            parts.push_back(formal_chart(nm, G, o, {{t, -1}}, W));
        } else {
            for (const TriDegree b : {o, o + TriDegree{0, 0, -1}})
                parts.push_back(formal_chart(nm, G, b, {{t, -1}, {"rhotau", 1}}, W));
            parts.push_back(formal_chart(nm, G, o + TriDegree{-1, 0, -1}, {}, W));
        }
        Z.summands.push_back(nm);
    } else if (i % 4 == 3) {
        std::string nm = "S^{" + std::to_string(2 * i - 3) + "," + std::to_string(i - 2) + "}F2[" + t + ",h1]/(h1^2)";
        parts.push_back(formal_chart(nm, G, {2 * i - 3, 0, i - 2}, {{t, -1}, {"h1", 1}}, W));
        Z.summands.push_back(nm);
    }
    Z.chart = direct_sum("Z_" + std::to_string(i), parts, W, ring_generator_degrees(G));
    return Z;
}

ExtChart to_target(const ExtChart& raw, const BaseField& F, const ExtWindow& W) {
    return q1_via_complex(F) ? tensor_m2(raw, F, W) : raw;
}

ExtWindow wider_for_u(const ExtWindow& W) { return grow(W, 0, 1, 0, 0, 1); }

}  // namespace

ZModule z_module(int i, const BaseCharts& B) {
    ZModule Z = z_module_raw(i, B, wider_for_u(B.window));
    Z.chart = to_target(Z.chart, B.field, B.window);
    Z.chart.name = "Z_" + std::to_string(i);
    return Z;
}

// ---------------------------------------------------------------------------

namespace {

// Compares dims of the b-torsion-free quotient of `lhs` with the dims of
// `rhs` over W. Tridegrees where the quotient is undetermined are skipped on
// both sides.
CheckRow compare_mod_b(const std::string& name, const ExtChart& lhs, const ExtChart& rhs, const ExtWindow& W) {
    CheckRow row;
    row.name = name;
    const V1Quotient Q = v1_quotient(lhs, W);
    int compared = 0, skipped = 0;
    for (int s = W.smin; s <= W.smax; ++s)
        for (int f = 0; f <= W.fmax; ++f)
            for (int w = W.wmin; w <= W.wmax; ++w) {
                const TriDegree d{s, f, w};
                auto st = Q.status.find(d);
                if (st != Q.status.end() &&
                    std::count(st->second.begin(), st->second.end(), BTorsion::Undetermined)) {
                    ++skipped;
                    continue;
                }
                const int l = Q.quotient_dims.count(d) ? Q.quotient_dims.at(d) : 0;
                const int r = rhs.dim(d);
                if (l || r) ++compared;
                if (l != r && !row.first_mismatch) {
                    row.first_mismatch = d;
                    row.detail = "lhs " + std::to_string(l) + " rhs " + std::to_string(r) + "; ";
                }
            }
    const double frac = Q.total ? static_cast<double>(Q.undetermined) / Q.total : 0.0;
    row.pass = !row.first_mismatch && frac <= 0.05;
    char buf[96];
    std::snprintf(buf, sizeof buf, "compared %d tridegrees, undetermined %d/%d classes", compared, Q.undetermined,
                  Q.total);
    row.detail += buf;
    if (frac > 0.05) row.detail += " (over 5%)";
    return row;
}

// b-torsion needs two steps of b = (8,4,4) above every reported class.
ExtWindow torsion_window(const ExtWindow& W) { return grow(W, 0, 16, 8, 0, 8); }

Comodule b01_power(int i, const BaseField& F) {
    return i == 0 ? unit_comodule(FragmentKind::A1Dual, F) : tensor_power(brown_gitler(0, 1, F), i);
}

}  // namespace

CheckReport verify_b01_powers(int i_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir,
                              const Caps& caps) {
    if (i_max > caps.i_max) throw std::invalid_argument("verify_b01_powers: i above the cap");
    if (W.smax > caps.stem_max) throw std::invalid_argument("verify_b01_powers: stems above the cap");
    CheckReport rep;
    const BaseCharts B = base_charts(F, W, i_max, cache_dir);
    ChartOptions opt;
    opt.cache_dir = cache_dir;
    for (int i = 0; i <= i_max; ++i) {
        const ExtChart lhs = ext_minimal(b01_power(i, F), torsion_window(W), opt);
        const ZModule Z = z_module(i, B);
        rep.add(compare_mod_b("b01_power i=" + std::to_string(i) + " " + F.tag(), lhs, Z.chart, W));
    }
    return rep;
}

CheckReport ext_b0k_decomposition(int k_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir,
                                  const Caps& caps) {
    if (k_max > caps.k_max) throw std::invalid_argument("ext_b0k_decomposition: k above the cap");
    if (W.smax > caps.stem_max) throw std::invalid_argument("ext_b0k_decomposition: stems above the cap");
    CheckReport rep;
    int amax = 0;
    for (int k = 1; k <= k_max; ++k) amax = std::max(amax, binary_digit_sum(k));
    const BaseCharts B = base_charts(F, W, amax, cache_dir);
    const BaseField G = q1_via_complex(F) ? BaseField::complex_like() : F;
    const ExtWindow Wu = wider_for_u(W);
    ChartOptions opt;
    opt.cache_dir = cache_dir;
    for (int k = 1; k <= k_max; ++k) {
        const ExtChart lhs = ext_minimal(brown_gitler(0, k, F), torsion_window(W), opt);
        const int a = binary_digit_sum(k);
        // Sigma^{4k-4a, 2k-2a}; for a = 1 this is the familiar Sigma^{4k-4, 2k-2}.
        const int ds = 4 * k - 4 * a, dw = 2 * k - 2 * a;
        const ExtWindow Wz{Wu.smin - ds, Wu.smax - ds, Wu.fmax, Wu.wmin - dw, Wu.wmax - dw};
        ExtChart z = shift_chart(z_module_raw(a, B, Wz).chart, ds, dw);
        // The h0-tower summands: suspended by (4j, 2j) over q = 3 mod 4; the
        // q = 1 mod 4 display writes them unsuspended, which is checked too.
        auto towers = [&](bool suspended) {
            std::vector<ExtChart> parts{z};
            for (int j = 0; j < k - a; ++j) {
                const TriDegree o = suspended ? TriDegree{4 * j, 0, 2 * j} : TriDegree{0, 0, 0};
                const std::string nm = "S^{" + std::to_string(o.s) + "," + std::to_string(o.w) + "}HZ";
                if (G.kind == FieldKind::QThree)
                    parts.push_back(formal_chart(nm, G, o, {{"tau2", -1}, {"h0", -1}, {"rhotau", 1}}, Wu));
                else
                    parts.push_back(formal_chart(nm, G, o, {{"tau", -1}, {"h0", -1}}, Wu));
            }
            return to_target(direct_sum("B0(" + std::to_string(k) + ") rhs", parts, Wu, ring_generator_degrees(G)),
                             F, W);
        };
        CheckRow row = compare_mod_b("b0k k=" + std::to_string(k) + " alpha=" + std::to_string(a) + " " + F.tag(), lhs,
                                     towers(true), W);
        if (k >= 2) {
            CheckRow alt = compare_mod_b("", lhs, towers(false), W);
            row.detail += alt.first_mismatch ? "; unsuspended towers first differ at " + alt.first_mismatch->str()
                                             : "; unsuspended towers also agree";
        }
        rep.add(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------

ExtChart cooperations_e2(int k_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir,
                         const Caps& caps) {
    if (k_max > caps.k_max) throw std::invalid_argument("cooperations_e2: k above the cap");
    if (W.smax > caps.stem_max) throw std::invalid_argument("cooperations_e2: stems above the cap");
    ChartOptions opt;
    opt.cache_dir = cache_dir;
    std::vector<ExtChart> parts;
    for (int k = 0; k <= k_max && 4 * k <= W.smax; ++k) {
        const ExtWindow Wk{W.smin - 4 * k, W.smax - 4 * k, W.fmax, W.wmin - 2 * k, W.wmax - 2 * k};
        const Comodule M = k == 0 ? unit_comodule(FragmentKind::A1Dual, F) : brown_gitler(0, k, F);
        ExtChart part = shift_chart(ext_minimal(M, Wk, opt), 4 * k, 2 * k);
        part.name = "k=" + std::to_string(k);
        parts.push_back(part);
    }
    ExtChart out = direct_sum("kq(x)kq", parts, W, ring_generator_degrees(F));
    out.field = F;
    return out;
}

ExtChart cooperations_oracle(int k_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir) {
    ExtChart out;
    out.name = "weight-split (A//A(1))";
    out.field = F;
    out.window = W;
    out.provenance = "weight pieces";
    ChartOptions opt;
    opt.products = false;
    opt.cache_dir = cache_dir;
    for (int k = 0; k <= k_max && 4 * k <= W.smax; ++k) {
        std::vector<MilnorMonomial> piece;
        for (const auto& m : quotient_monomials(1, 4 * k))
            if (m.weight() == 4 * k) piece.push_back(m);
        const Comodule P = quotient_span(1, piece, FragmentKind::A1Dual, F, "wt" + std::to_string(4 * k));
        const ExtChart E = ext_minimal(P, W, opt);
        for (const auto& [d, l] : E.classes)
            for (std::size_t i = 0; i < l.size(); ++i) {
                out.classes[d].push_back("x" + d.str() + "#" + std::to_string(out.dim(d)));
                out.tags[d].push_back("k=" + std::to_string(k));
            }
    }
    return out;
}

ExtChart n_line_e2(int n, const BaseField& F, const ExtWindow& W, const std::string& cache_dir, const Caps& caps) {
    if (n < 0 || n > caps.n_max) throw std::invalid_argument("n_line_e2: n outside 0..n_max");
    if (W.smax > caps.stem_max) throw std::invalid_argument("n_line_e2: stems above the cap");
    ChartOptions opt;
    opt.cache_dir = cache_dir;
    std::vector<std::vector<int>> Ks;
    std::vector<int> K;
    std::function<void(int)> rec = [&](int left) {
        if (static_cast<int>(K.size()) == n) {
            Ks.push_back(K);
            return;
        }
        for (int k = 1; k <= std::min(left, caps.k_max); ++k) {
            K.push_back(k);
            rec(left - k);
            K.pop_back();
        }
    };
    rec(W.smax / 4);
    std::vector<ExtChart> parts;
    for (const auto& k : Ks) {
        const int total = std::accumulate(k.begin(), k.end(), 0);
        Comodule M = unit_comodule(FragmentKind::A1Dual, F);
        std::string tag = "K=(";
        for (std::size_t j = 0; j < k.size(); ++j) {
            M = tensor(M, brown_gitler(0, k[j], F));
            tag += (j ? "," : "") + std::to_string(k[j]);
        }
        tag += ")";
        const ExtWindow Wk{W.smin - 4 * total, W.smax - 4 * total, W.fmax, W.wmin - 2 * total, W.wmax - 2 * total};
        ExtChart part = shift_chart(ext_minimal(M, Wk, opt), 4 * total, 2 * total);
        part.name = tag;
        part.tags.clear();
        parts.push_back(part);
    }
    ExtChart out = direct_sum(std::to_string(n) + "-line", parts, W, ring_generator_degrees(F));
    out.field = F;
    return out;
}

std::vector<Differential> h1_divisible_sources(const SSPage& P) {
    std::vector<Differential> out;
    const ExtChart& E = P.e2;
    if (!E.has_product("h1")) return out;
    const TriDegree h1 = E.ring_gens.at("h1");
    for (const auto& d : P.differentials) {
        const std::size_t n = static_cast<std::size_t>(E.dim(d.source));
        f2::BitVec v(n);
        std::size_t pos = 0;
        while (pos <= d.source_label.size()) {
            std::size_t next = d.source_label.find(" + ", pos);
            if (next == std::string::npos) next = d.source_label.size();
            const int idx = E.find(d.source, d.source_label.substr(pos, next - pos));
            if (idx < 0) throw std::logic_error("unknown class label " + d.source_label);
            v.flip(static_cast<std::size_t>(idx));
            pos = next + 3;
        }
        const TriDegree src{d.source.s - h1.s, d.source.f - h1.f, d.source.w - h1.w};
        f2::Echelon img(n);
        const int m = E.dim(src);
        for (int i = 0; i < m; ++i)
            if (auto r = E.multiply("h1", src, unit(static_cast<std::size_t>(m), static_cast<std::size_t>(i))))
                img.insert(*r);
        if (img.rank() && img.contains(v)) out.push_back(d);
    }
    return out;
}

}  // namespace mot
