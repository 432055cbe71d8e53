#include "motivic/spectralsequence.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <stdexcept>

#include "motivic/cobar.hpp"

namespace mot {

// ---------------------------------------------------------------------------
// Patterns

int DifferentialPattern::length(int n) const {
    auto it = page.find(n);
    if (it == page.end()) throw std::out_of_range("no differential length derived for power " + std::to_string(n));
    return it->second;
}

namespace {

std::string power(const std::string& g, int e) {
    if (e == 0) return "";
    return e == 1 ? g : g + "^" + std::to_string(e);
}

std::string join_factors(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!s.empty()) s += ' ';
        s += p;
    }
    return s.empty() ? "1" : s;
}

}  // namespace

std::string DifferentialPattern::rule(int n) const {
    const int r = length(n);
    return "d" + std::to_string(r) + "(" + join_factors({power(source, n)}) + ") = " +
           join_factors({target, power(source, n - 1), power("h0", r)});
}

nlohmann::json DifferentialPattern::to_json() const {
    nlohmann::json j;
    j["field"] = field.tag();
    j["q"] = field.q;
    j["source"] = source;
    j["target"] = target;
    j["permanent"] = permanent;
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& [n, r] : page) rules.push_back({{"power", n}, {"page", r}, {"rule", rule(n)}});
    j["rules"] = rules;
    return j;
}

DifferentialPattern derive_hz_pattern(const BaseField& F, int max_weight) {
    DifferentialPattern P;
    P.field = F;
    switch (F.kind) {
        case FieldKind::ComplexLike:
            P.permanent = {"tau", "h0", "h1", "a", "b"};
            return P;
        case FieldKind::QOne:
            P.source = "tau";
            P.target = "u";
            P.permanent = {"u", "h0", "h1", "a", "b"};
            for (int n = 1; n <= max_weight; ++n) {
                // pi_{-1,-n} = Z/(q^n - 1)_2 needs an h0-tower of that height over u tau^{n-1}.
                const int r = nu2_pow_minus_one(F.q, n);
                if (r != nu2(F.q - 1) + nu2(n))
                    throw std::runtime_error("tower heights do not follow nu2(q-1) + nu2(n)");
                P.page[n] = r;
            }
            return P;
        case FieldKind::QThree:
            P.source = "tau2";
            P.target = "rhotau";
            P.permanent = {"rho", "rhotau", "h0", "h1", "tauh1", "a", "b"};
            for (int n = 1; n <= max_weight; ++n) {
                const int r = nu2_pow_minus_one(F.q, n);
                if (n % 2) {
                    // Odd weights carry the single class rho tau^{n-1}; no differential.
                    if (r != 1) throw std::runtime_error("odd-weight order is not 2");
                    continue;
                }
                if (r < 2) throw std::runtime_error("even-weight tower too short");
                P.page[n / 2] = r;
            }
            return P;
    }
    return P;
}

// ---------------------------------------------------------------------------
// SSPage

int SSPage::einf_dim(TriDegree d) const {
    auto it = einf.find(d);
    return it == einf.end() ? 0 : it->second.dim();
}

namespace {

std::string vec_label(const ExtChart& E, TriDegree d, const f2::BitVec& v) {
    const auto& labels = E.classes.at(d);
    std::string s;
    for (auto i : v.ones()) {
        if (!s.empty()) s += " + ";
        s += labels[i];
    }
    return s.empty() ? "0" : s;
}

}  // namespace

std::vector<std::string> SSPage::einf_labels(TriDegree d) const {
    std::vector<std::string> out;
    auto it = einf.find(d);
    if (it == einf.end()) return out;
    f2::Echelon b(static_cast<std::size_t>(e2.dim(d)));
    for (const auto& v : it->second.boundaries) b.insert(v);
    for (const auto& v : it->second.cycles)
        if (b.insert(v)) out.push_back(vec_label(e2, d, v));
    return out;
}

ExtChart einf_chart(const SSPage& P) {
    ExtChart out;
    out.name = P.name + " E-infinity";
    out.field = P.e2.field;
    out.over = P.e2.over;
    out.window = P.e2.window;
    out.provenance = "einf";
    // Per tridegree: boundaries first (zero tag), then the basis with unit tags,
    // so reducing a product yields its coordinates in the E-infinity basis.
    std::map<TriDegree, f2::Echelon> coord;
    std::map<TriDegree, std::vector<f2::BitVec>> basis;
    for (const auto& [d, pd] : P.einf) {
        if (!pd.dim()) continue;
        const auto n = static_cast<std::size_t>(P.e2.dim(d));
        const auto k = static_cast<std::size_t>(pd.dim());
        f2::Echelon b(n);
        for (const auto& v : pd.boundaries) b.insert(v);
        f2::Echelon e(n, true, k);
        for (const auto& v : pd.boundaries) e.insert(v);
        for (const auto& v : pd.cycles)
            if (b.insert(v)) {
                f2::BitVec tag(k);
                tag.set(basis[d].size());
                e.insert(v, tag);
                out.classes[d].push_back(vec_label(P.e2, d, v));
                auto t = P.e2.tags.find(d);
                if (t != P.e2.tags.end() && v.first() >= 0) out.tags[d].push_back(t->second[static_cast<std::size_t>(v.first())]);
                basis[d].push_back(v);
            }
        coord.emplace(d, std::move(e));
    }
    std::vector<std::string> gens = P.pattern.permanent;
    if (!P.pattern.empty()) gens.push_back(P.pattern.source);
    for (const auto& g : gens) {
        if (!P.e2.has_product(g)) continue;
        const TriDegree gd = P.e2.ring_gens.at(g);
        out.ring_gens[g] = gd;
        for (const auto& [d, vs] : basis) {
            const TriDegree t = d + gd;
            if (!P.e2.window.contains(t)) continue;
            std::vector<f2::BitVec> rows;
            bool ok = true;
            for (const auto& v : vs) {
                auto r = P.e2.multiply(g, d, v);
                if (!r) {
                    ok = false;
                    break;
                }
                f2::BitVec img(basis.count(t) ? basis.at(t).size() : 0);
                if (r->any() && coord.count(t)) {
                    f2::BitVec combo(img.size());
                    coord.at(t).reduce(*r, &combo);
                    if (r->none()) img = combo;
                }
                rows.push_back(img);
            }
            if (ok) out.products[g][d] = rows;
        }
    }
    return out;
}

nlohmann::json SSPage::to_json() const {
    using nlohmann::json;
    json j;
    j["schema"] = "motivic-ss-page";
    j["version"] = 1;
    j["name"] = name;
    j["pattern"] = pattern.to_json();
    j["last_page"] = last_page;
    j["reliable_fmax"] = reliable_fmax;
    j["reliable_smax"] = reliable_smax;
    json ds = json::array();
    for (const auto& d : differentials)
        ds.push_back({{"page", d.page},
                      {"source", {d.source.s, d.source.f, d.source.w}},
                      {"target", {d.target.s, d.target.f, d.target.w}},
                      {"from", d.source_label},
                      {"to", d.target_label}});
    j["differentials"] = ds;
    json e = json::array();
    for (const auto& [d, pd] : einf)
        if (pd.dim()) e.push_back({{"deg", {d.s, d.f, d.w}}, {"classes", einf_labels(d)}});
    j["einf"] = e;
    return j;
}

// ---------------------------------------------------------------------------
// run_mass

namespace {

// All classes of one (stem, weight) column, ordered by filtration.
struct Column {
    int s = 0, w = 0;
    std::vector<int> offset;  // offset[f] for f = 0..fmax+1
    std::size_t size() const { return static_cast<std::size_t>(offset.back()); }
    int f_of(std::size_t pos) const {
        int f = 0;
        while (offset[static_cast<std::size_t>(f) + 1] <= static_cast<int>(pos)) ++f;
        return f;
    }
};

class MassRunner {
public:
    MassRunner(const ExtChart& E, const DifferentialPattern& P) : E_(E), P_(P), W_(E.window) {
        for (const auto& [d, l] : E.classes) {
            auto key = std::make_pair(d.s, d.w);
            if (cols_.count(key)) continue;
            Column c{d.s, d.w, {}};
            int off = 0;
            for (int f = 0; f <= W_.fmax; ++f) {
                c.offset.push_back(off);
                off += E.dim({d.s, f, d.w});
            }
            c.offset.push_back(off);
            cols_.emplace(key, std::move(c));
        }
    }

    void build_D(SSPage& out);
    void check_D() const;
    void run_pages(SSPage& out);

private:
    const Column* col(int s, int w) const {
        auto it = cols_.find({s, w});
        return it == cols_.end() ? nullptr : &it->second;
    }
    std::optional<f2::BitVec> apply(const std::string& g, int times, TriDegree& at, f2::BitVec v) const {
        for (int i = 0; i < times; ++i) {
            auto r = E_.multiply(g, at, v);
            if (!r) return std::nullopt;
            v = std::move(*r);
            at = at + E_.ring_gens.at(g);
        }
        return v;
    }
    // Column vector of the image of position `pos` of column (s, w).
    const f2::BitVec& Dcol(int s, int w, std::size_t pos) const { return D_.at({s, w})[pos]; }
    f2::BitVec apply_D(const Column& c, const f2::BitVec& x) const;
    // {x in F^q : D x in F^thr}, as row-reduced column vectors.
    std::vector<f2::BitVec> Z(const Column& c, int q, int thr) const;
    f2::BitVec leading(const Column& c, const f2::BitVec& x, int f) const;

    const ExtChart& E_;
    const DifferentialPattern& P_;
    const ExtWindow& W_;
    std::map<std::pair<int, int>, Column> cols_;
    std::map<std::pair<int, int>, std::vector<f2::BitVec>> D_;
    std::vector<std::string> permanent_;
};

f2::BitVec MassRunner::apply_D(const Column& c, const f2::BitVec& x) const {
    const Column* t = col(c.s - 1, c.w);
    f2::BitVec out(t ? t->size() : 0);
    if (!t) return out;
    for (auto i : x.ones()) out ^= Dcol(c.s, c.w, i);
    return out;
}

f2::BitVec MassRunner::leading(const Column& c, const f2::BitVec& x, int f) const {
    const int lo = c.offset[static_cast<std::size_t>(f)], hi = c.offset[static_cast<std::size_t>(f) + 1];
    f2::BitVec out(static_cast<std::size_t>(hi - lo));
    for (auto i : x.ones())
        if (static_cast<int>(i) >= lo && static_cast<int>(i) < hi) out.set(i - static_cast<std::size_t>(lo));
    return out;
}

std::vector<f2::BitVec> MassRunner::Z(const Column& c, int q, int thr) const {
    q = std::max(q, 0);
    if (q > W_.fmax) return {};
    const Column* t = col(c.s - 1, c.w);
    const std::size_t start = static_cast<std::size_t>(c.offset[static_cast<std::size_t>(q)]);
    const std::size_t n = c.size();
    std::size_t cut = 0;  // target positions below filtration thr
    if (t) cut = thr > W_.fmax ? t->size() : static_cast<std::size_t>(t->offset[static_cast<std::size_t>(std::max(thr, 0))]);
    std::vector<f2::BitVec> imgs;
    for (std::size_t i = start; i < n; ++i) {
        f2::BitVec v(cut);
        if (t)
            for (auto k : Dcol(c.s, c.w, i).ones())
                if (k < cut) v.set(k);
        imgs.push_back(v);
    }
    auto ki = f2::kernel_image(imgs, cut);
    f2::Echelon e(n);
    for (const auto& k : ki.kernel) {
        f2::BitVec x(n);
        for (auto j : k.ones()) x.set(start + j);
        e.insert(x);
    }
    return e.rows();
}

void MassRunner::build_D(SSPage& out) {
    for (const auto& p : P_.permanent)
        if (E_.ring_gens.count(p)) permanent_.push_back(p);
    for (const auto& [key, c] : cols_) {
        const Column* t = col(c.s - 1, c.w);
        D_[key].assign(c.size(), f2::BitVec(t ? t->size() : 0));
    }

    // Tridegrees in an order where products land after their sources.
    std::vector<TriDegree> order;
    for (int f = 0; f <= W_.fmax; ++f)
        for (int w = W_.wmax; w >= W_.wmin; --w)
            for (int s = W_.smax; s >= W_.smin; --s)
                if (E_.dim({s, f, w})) order.push_back({s, f, w});

    std::map<TriDegree, std::vector<f2::BitVec>> Y;  // span of permanent products of module generators
    for (auto X : order) {
        const std::size_t n = static_cast<std::size_t>(E_.dim(X));
        f2::Echelon dec(n), y(n);
        for (const auto& [g, gd] : E_.ring_gens) {
            const TriDegree src{X.s - gd.s, X.f - gd.f, X.w - gd.w};
            const int m = E_.dim(src);
            for (int i = 0; i < m; ++i) {
                f2::BitVec e(static_cast<std::size_t>(m));
                e.set(static_cast<std::size_t>(i));
                if (auto r = E_.multiply(g, src, e)) dec.insert(*r);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            f2::BitVec e(n);
            e.set(i);
            if (dec.insert(e)) y.insert(e);  // a module generator
        }
        for (const auto& p : permanent_) {
            const TriDegree pd = E_.ring_gens.at(p);
            auto it = Y.find({X.s - pd.s, X.f - pd.f, X.w - pd.w});
            if (it == Y.end()) continue;
            for (const auto& v : it->second)
                if (auto r = E_.multiply(p, it->first, v)) y.insert(*r);
        }
        Y[X] = y.rows();
    }

    if (P_.empty()) return;
    const TriDegree sd = E_.ring_gens.at(P_.source);
    for (auto X : order) {
        const std::size_t n = static_cast<std::size_t>(E_.dim(X));
        const Column& c = cols_.at({X.s, X.w});
        const Column* t = col(X.s - 1, X.w);
        const std::size_t tn = t ? t->size() : 0;
        std::vector<std::pair<f2::BitVec, f2::BitVec>> pairs;
        for (int k = 0;; ++k) {
            const TriDegree src{X.s - k * sd.s, X.f - k * sd.f, X.w - k * sd.w};
            if (!W_.contains(src)) break;
            auto it = Y.find(src);
            if (it == Y.end()) continue;
            for (const auto& yv : it->second) {
                TriDegree at = src;
                auto v = apply(P_.source, k, at, yv);
                if (!v) continue;
                f2::BitVec dv(tn);
                if (k > 0) {
                    const int r = P_.length(k);
                    const TriDegree tgt{X.s - 1, X.f + r, X.w};
                    if (W_.contains(tgt)) {
                        TriDegree a2 = src;
                        auto z = apply("h0", r, a2, yv);
                        if (z) z = apply(P_.source, k - 1, a2, *z);
                        if (z) z = apply(P_.target, 1, a2, *z);
                        if (!z) throw std::logic_error("differential target not computable from " + X.str());
                        if (!(a2 == tgt)) throw std::logic_error("pattern is not degree-consistent");
                        if (!t) {
                            if (z->any()) throw std::logic_error("differential target absent from chart at " + tgt.str());
                        } else {
                            const std::size_t off = static_cast<std::size_t>(t->offset[static_cast<std::size_t>(tgt.f)]);
                            for (auto i : z->ones()) dv.set(off + i);
                        }
                    }
                }
                pairs.emplace_back(*v, dv);
            }
        }
        f2::Echelon ech(n, true, pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            f2::BitVec tag(pairs.size());
            tag.set(k);
            if (!ech.insert(pairs[k].first, tag)) {
                f2::BitVec sum(tn);
                for (auto j : ech.last_dependency().ones()) sum ^= pairs[j].second;
                if (sum.any()) throw std::logic_error("Leibniz rule is inconsistent at " + X.str());
            }
        }
        auto& Dc = D_.at({X.s, X.w});
        bool spanned = true;
        for (std::size_t i = 0; i < n; ++i) {
            f2::BitVec e(n), combo(pairs.size());
            e.set(i);
            ech.reduce(e, &combo);
            if (e.any()) {
                spanned = false;
                continue;
            }
            f2::BitVec val(tn);
            for (auto j : combo.ones()) val ^= pairs[j].second;
            Dc[static_cast<std::size_t>(c.offset[static_cast<std::size_t>(X.f)]) + i] = val;
        }
        if (!spanned) out.undetermined.push_back(X);
    }
}

void MassRunner::check_D() const {
    for (const auto& [key, c] : cols_) {
        const Column* t = col(c.s - 1, c.w);
        if (!t || !col(c.s - 2, c.w)) continue;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (apply_D(*t, Dcol(c.s, c.w, i)).any())
                throw std::logic_error("D^2 != 0 in column (" + std::to_string(c.s) + "," + std::to_string(c.w) + ")");
    }
    // Linearity over the permanent classes, wherever both sides are in the window.
    for (const auto& p : permanent_) {
        const TriDegree pd = E_.ring_gens.at(p);
        for (const auto& [d, labels] : E_.classes) {
            const TriDegree pdX = d + pd;
            if (!W_.contains(pdX) || !E_.dim(pdX)) continue;
            const Column& c = cols_.at({d.s, d.w});
            const Column& cp = cols_.at({pdX.s, pdX.w});
            const Column* t = col(d.s - 1, d.w);
            const Column* tp = col(pdX.s - 1, pdX.w);
            for (std::size_t i = 0; i < labels.size(); ++i) {
                f2::BitVec e(labels.size());
                e.set(i);
                // D(p x)
                f2::BitVec px = *E_.multiply(p, d, e);
                f2::BitVec lhs(tp ? tp->size() : 0);
                for (auto j : px.ones())
                    lhs ^= Dcol(pdX.s, pdX.w, static_cast<std::size_t>(cp.offset[static_cast<std::size_t>(pdX.f)]) + j);
                // p D(x), component by component
                f2::BitVec rhs(lhs.size());
                bool ok = true;
                if (t) {
                    const f2::BitVec& dx = Dcol(d.s, d.w, static_cast<std::size_t>(c.offset[static_cast<std::size_t>(d.f)]) + i);
                    for (int f = 0; f <= W_.fmax && ok; ++f) {
                        f2::BitVec comp = leading(*t, dx, f);
                        if (comp.none()) continue;
                        const TriDegree at{t->s, f, t->w};
                        auto r = E_.multiply(p, at, comp);
                        if (!r || !tp) {
                            ok = false;
                            break;
                        }
                        const std::size_t off = static_cast<std::size_t>(tp->offset[static_cast<std::size_t>(f + pd.f)]);
                        for (auto j : r->ones()) rhs.flip(off + j);
                    }
                }
                if (!ok) continue;
                // Components of D(p x) above the window are dropped on both sides.
                if (!(lhs == rhs))
                    throw std::logic_error("D is not linear over " + p + " at " + d.str());
            }
        }
    }
}

void MassRunner::run_pages(SSPage& out) {
    // Only powers that fit in the weight range of the window can act on it.
    const int unit = P_.source == "tau2" ? 2 : 1;
    int maxlen = 0;
    for (const auto& [n, r] : P_.page)
        if (n * unit <= W_.wmax - W_.wmin) maxlen = std::max(maxlen, r);
    out.reliable_fmax = W_.fmax - maxlen;
    out.reliable_smax = W_.smax - 1;
    const int R = W_.fmax + 1;
    for (const auto& [key, c] : cols_) {
        const Column* t = col(c.s - 1, c.w);
        const Column* in = col(c.s + 1, c.w);
        bool active = false;
        for (std::size_t i = 0; i < c.size() && !active; ++i) active = Dcol(c.s, c.w, i).any();
        if (in)
            for (std::size_t i = 0; i < in->size() && !active; ++i) active = Dcol(in->s, in->w, i).any();
        for (int p = 0; p <= W_.fmax; ++p) {
            const TriDegree X{c.s, p, c.w};
            const int n = E_.dim(X);
            if (!n) continue;
            auto lead_basis = [&](const std::vector<f2::BitVec>& vs, int f) {
                f2::Echelon e(static_cast<std::size_t>(E_.dim({c.s, f, c.w})));
                for (const auto& v : vs) e.insert(leading(c, v, f));
                return e;
            };
            auto boundaries = [&](int thr_q, int thr) {
                std::vector<f2::BitVec> out_b;
                if (!in) return out_b;
                for (const auto& z : Z(*in, thr_q, thr)) out_b.push_back(apply_D(*in, z));
                return out_b;
            };
            if (!active) {
                PageData pd;
                for (int i = 0; i < n; ++i) {
                    f2::BitVec e(static_cast<std::size_t>(n));
                    e.set(static_cast<std::size_t>(i));
                    pd.cycles.push_back(e);
                }
                out.einf[X] = pd;
                for (int r = 2; r <= R + 1; ++r) out.page_dims[r][X] = n;
                continue;
            }
            for (int r = 2; r <= R + 1; ++r) {
                auto Zr = Z(c, p, p + r);
                auto Br = boundaries(p - r + 1, p);
                f2::Echelon lb = lead_basis(Br, p);
                f2::Echelon lz = lead_basis(Zr, p);
                out.page_dims[r][X] = static_cast<int>(lz.rank() - lb.rank());
                if (r > R || !t) continue;
                // d_r on representatives.
                const TriDegree T{c.s - 1, p + r, c.w};
                if (T.f > W_.fmax || !E_.dim(T)) continue;
                // Boundaries at the target: D of Z_{r-1} starting one filtration up.
                f2::Echelon tb(static_cast<std::size_t>(E_.dim(T)));
                for (const auto& z : Z(c, p + 1, p + r)) tb.insert(leading(*t, apply_D(c, z), T.f));
                f2::Echelon reps = lb;
                for (const auto& z : Zr) {
                    f2::BitVec lzv = leading(c, z, p);
                    if (!reps.insert(lzv)) continue;
                    f2::BitVec img = leading(*t, apply_D(c, z), T.f);
                    tb.reduce(img);
                    if (img.none()) continue;
                    out.differentials.push_back({r, X, T, vec_label(E_, X, lzv), vec_label(E_, T, img)});
                    out.last_page = std::max(out.last_page, r);
                }
            }
            PageData pd;
            pd.cycles = lead_basis(Z(c, p, INT_MAX), p).rows();
            pd.boundaries = lead_basis(boundaries(INT_MIN / 2, p), p).rows();
            out.einf[X] = pd;
        }
    }
    // Pages beyond the last nonzero differential repeat E-infinity.
    for (auto it = out.page_dims.begin(); it != out.page_dims.end();)
        it = it->first > out.last_page + 1 ? out.page_dims.erase(it) : std::next(it);
    std::sort(out.differentials.begin(), out.differentials.end(), [](const Differential& a, const Differential& b) {
        return std::make_tuple(a.page, a.source.s, a.source.w, a.source.f, a.source_label) <
               std::make_tuple(b.page, b.source.s, b.source.w, b.source.f, b.source_label);
    });
    for (const auto& d : out.differentials)
        if ((d.target.s - d.target.w) != (d.source.s - d.source.w) - 1)
            throw std::logic_error("differential does not lower coweight by one");
}

}  // namespace

SSPage run_mass(const ExtChart& e2, const DifferentialPattern& pattern, const std::string& name) {
    SSPage out;
    out.name = name.empty() ? e2.name : name;
    out.e2 = e2;
    out.pattern = pattern;
    if (!pattern.empty())
        for (const auto& g : {pattern.source, pattern.target, std::string("h0")})
            if (!e2.has_product(g)) throw std::invalid_argument("chart lacks products by " + g);
    MassRunner run(e2, pattern);
    run.build_D(out);
    run.check_D();
    run.run_pages(out);
    return out;
}

// ---------------------------------------------------------------------------
// Groups

int ColumnGroup::log2_torsion_order() const {
    int t = 0;
    for (auto k : cyclic) t += k;
    return t;
}

std::string ColumnGroup::str() const {
    std::vector<std::string> parts;
    for (int i = 0; i < free_rank; ++i) parts.push_back("Z2");
    for (auto k : cyclic) parts.push_back("Z/" + std::to_string(1LL << k));
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
    return s;
}

const ColumnGroup* AssembledGroups::at(int s, int w) const {
    auto it = columns.find({s, w});
    return it == columns.end() ? nullptr : &it->second;
}

AssembledGroups assemble_homotopy(const SSPage& P) {
    AssembledGroups G;
    const ExtChart& E = P.e2;
    const int T = P.reliable_fmax;
    const bool has_h0 = E.has_product("h0");
    const bool rho_h1 = E.has_product("rho") && E.has_product("h1");
    std::set<std::pair<int, int>> cols;
    for (const auto& [d, pd] : P.einf)
        if (d.s <= P.reliable_smax) cols.insert({d.s, d.w});
    for (auto [s, w] : cols) {
        // Quotient bases E^f = cycles / boundaries and h0: E^f -> E^{f+1}.
        std::vector<std::size_t> dims(static_cast<std::size_t>(T) + 1, 0);
        std::vector<f2::Echelon> quot(static_cast<std::size_t>(T) + 1);
        std::vector<std::vector<f2::BitVec>> reps(static_cast<std::size_t>(T) + 1);
        for (int f = 0; f <= T; ++f) {
            const TriDegree X{s, f, w};
            auto it = P.einf.find(X);
            const std::size_t n = static_cast<std::size_t>(E.dim(X));
            f2::Echelon e(n);
            if (it != P.einf.end()) {
                for (const auto& b : it->second.boundaries) e.insert(b);
                for (const auto& z : it->second.cycles) {
                    f2::Echelon probe = e;
                    if (probe.insert(z)) reps[static_cast<std::size_t>(f)].push_back(z);
                    e.insert(z);
                }
            }
            f2::Echelon b(n, true, reps[static_cast<std::size_t>(f)].size());
            if (it != P.einf.end())
                for (const auto& v : it->second.boundaries) b.insert(v, f2::BitVec(reps[static_cast<std::size_t>(f)].size()));
            for (std::size_t i = 0; i < reps[static_cast<std::size_t>(f)].size(); ++i) {
                f2::BitVec tag(reps[static_cast<std::size_t>(f)].size());
                tag.set(i);
                b.insert(reps[static_cast<std::size_t>(f)][i], tag);
            }
            quot[static_cast<std::size_t>(f)] = std::move(b);
            dims[static_cast<std::size_t>(f)] = reps[static_cast<std::size_t>(f)].size();
        }
        // h0 matrices between consecutive filtrations, in quotient coordinates.
        std::vector<std::vector<f2::BitVec>> H(static_cast<std::size_t>(T) + 1);
        for (int f = 0; f < T; ++f)
            for (const auto& z : reps[static_cast<std::size_t>(f)]) {
                f2::BitVec img(dims[static_cast<std::size_t>(f) + 1]);
                if (has_h0) {
                    auto r = E.multiply("h0", {s, f, w}, z);
                    // h0 detects h = 2 + rho eta; when rho is nonzero, 2 is detected by h0 + rho h1.
                    if (r && rho_h1) {
                        auto a = E.multiply("h1", {s, f, w}, z);
                        auto b = a ? E.multiply("rho", {s + 1, f + 1, w + 1}, *a) : std::nullopt;
                        if (b) *r ^= *b;
                    }
                    if (r) {
                        f2::BitVec v = *r, c(dims[static_cast<std::size_t>(f) + 1]);
                        quot[static_cast<std::size_t>(f) + 1].reduce(v, &c);
                        if (v.any()) throw std::logic_error("h0 leaves the permanent cycles");
                        img = c;
                    }
                }
                H[static_cast<std::size_t>(f)].push_back(img);
            }
        // rank of h0^k from E^f.
        auto rk = [&](int f, int k) -> long {
            if (f < 0 || f > T || f + k > T) return 0;
            if (k == 0) return static_cast<long>(dims[static_cast<std::size_t>(f)]);
            std::vector<f2::BitVec> cur;
            for (std::size_t i = 0; i < dims[static_cast<std::size_t>(f)]; ++i) {
                f2::BitVec e(dims[static_cast<std::size_t>(f)]);
                e.set(i);
                cur.push_back(e);
            }
            for (int j = 0; j < k; ++j) {
                std::vector<f2::BitVec> nxt;
                for (const auto& v : cur) {
                    f2::BitVec o(dims[static_cast<std::size_t>(f + j) + 1]);
                    for (auto i : v.ones()) o ^= H[static_cast<std::size_t>(f + j)][i];
                    nxt.push_back(o);
                }
                cur = std::move(nxt);
            }
            return static_cast<long>(f2::rank(cur, dims[static_cast<std::size_t>(f + k)]));
        };
        ColumnGroup g;
        g.s = s;
        g.w = w;
        for (int p = 0; p <= T; ++p)
            for (int L = 1; p + L - 1 <= T; ++L) {
                const long cnt = rk(p, L - 1) - rk(p, L) - rk(p - 1, L) + rk(p - 1, L + 1);
                if (cnt < 0) throw std::logic_error("negative string count");
                for (long i = 0; i < cnt; ++i) {
                    if (p + L - 1 == T)
                        ++g.free_rank;
                    else
                        g.cyclic.push_back(L);
                }
            }
        std::sort(g.cyclic.rbegin(), g.cyclic.rend());
        G.columns[{s, w}] = g;
    }
    return G;
}

// ---------------------------------------------------------------------------
// aAHSS

namespace {

std::vector<f2::BitVec> units(std::size_t n) {
    std::vector<f2::BitVec> out;
    for (std::size_t i = 0; i < n; ++i) {
        f2::BitVec e(n);
        e.set(i);
        out.push_back(e);
    }
    return out;
}

}  // namespace

AahssResult run_aahss(const Comodule& M, const ExtChart& R) {
    AahssResult out;
    const CellFiltration cf = cell_filtration(M);
    ExtChart& C = out.einf;
    C.name = M.name();
    C.field = M.field();
    C.over = M.kind();
    C.provenance = "aahss";
    const ExtWindow& W = R.window;

    if (cf.layers.size() == 1 && cf.layers[0].size() == 1) {
        const BiDegree g = M.gen(cf.layers[0][0]).deg;
        C.window = {W.smin + g.s, W.smax + g.s, W.fmax, W.wmin + g.w, W.wmax + g.w};
        for (const auto& [d, l] : R.classes) {
            const TriDegree t{d.s + g.s, d.f, d.w + g.w};
            for (std::size_t i = 0; i < l.size(); ++i) C.classes[t].push_back(l[i] + "[" + std::to_string(g.s) + "]");
            for (int r = 1; r <= 4; ++r) out.page_dims[r][t] = static_cast<int>(l.size());
        }
        return out;
    }
    if (cf.layers.size() != 3 || cf.stems != std::vector<int>{0, 2, 3})
        throw std::invalid_argument("aAHSS is implemented for one cell or the cells [0], [2], [3]");
    for (const auto& L : cf.layers)
        if (L.size() != 1) throw std::invalid_argument("aAHSS expects one generator per cell");
    const BiDegree c2 = M.gen(cf.layers[1][0]).deg, c3 = M.gen(cf.layers[2][0]).deg;
    const TriDegree s2{c2.s, 0, c2.w}, s3{c3.s, 0, c3.w};
    const TriDegree h0d = R.ring_gens.at("h0"), h1d = R.ring_gens.at("h1");
    // E-infinity is reported where all three copies and the h0, h1 and d3
    // neighbours lie inside the ring window.
    C.window = {W.smin + s3.s, W.smax, W.fmax - 1, W.wmin + s3.w, W.wmax};

    auto mult_all = [&](const std::string& g, TriDegree d) -> std::optional<std::vector<f2::BitVec>> {
        std::vector<f2::BitVec> out_v;
        for (const auto& e : units(static_cast<std::size_t>(R.dim(d)))) {
            auto r = R.multiply(g, d, e);
            if (!r) return std::nullopt;
            out_v.push_back(*r);
        }
        return out_v;
    };
    // ker(h0) on R in each degree (E2 = E3 of the top cell), and its module generators.
    std::map<TriDegree, std::vector<f2::BitVec>> ker;
    for (const auto& [d, l] : R.classes) {
        auto m = mult_all("h0", d);
        if (!m) continue;
        ker[d] = f2::kernel_image(*m, static_cast<std::size_t>(R.dim(d + h0d))).kernel;
    }
    // Massey products on generators, propagated over the ring.
    CobarComplex cobar(unit_comodule(M.kind(), M.field()));
    const TriDegree d3shift = TriDegree{2, 1, 1};  // |<alpha, h0, h1>| - |alpha|
    std::map<TriDegree, std::vector<std::pair<f2::BitVec, f2::BitVec>>> d3;  // alpha -> value in R
    std::vector<TriDegree> order;
    for (int f = 0; f <= W.fmax; ++f)
        for (int w = W.wmax; w >= W.wmin; --w)
            for (int s = W.smax; s >= W.smin; --s)
                if (ker.count({s, f, w}) && !ker.at({s, f, w}).empty()) order.push_back({s, f, w});
    for (auto X : order) {
        const std::size_t n = static_cast<std::size_t>(R.dim(X));
        const TriDegree T = X + d3shift;
        const std::size_t tn = static_cast<std::size_t>(R.dim(T));
        auto& list = d3[X];
        f2::Echelon dec(n);
        for (const auto& [g, gd] : R.ring_gens) {
            const TriDegree src{X.s - gd.s, X.f - gd.f, X.w - gd.w};
            auto it = d3.find(src);
            if (it == d3.end()) continue;
            for (const auto& [a, v] : it->second) {
                auto pa = R.multiply(g, src, a);
                if (!pa) continue;
                f2::BitVec pv(tn);
                if (W.contains(T)) {
                    auto r = R.multiply(g, src + d3shift, v);
                    if (!r) continue;
                    pv = *r;
                }
                dec.insert(*pa);
                list.emplace_back(*pa, pv);
            }
        }
        for (const auto& k : ker.at(X)) {
            if (dec.contains(k)) continue;
            dec.insert(k);
            AahssD3 rec;
            rec.generator = vec_label(R, X, k);
            rec.degree = X + s3;
            f2::BitVec val(tn);
            if (k.count() != 1) throw std::logic_error("ker h0 generator is not a monomial: " + rec.generator);
            if (W.contains(T) && W.contains(X)) {
                auto mt = massey_triple(cobar, R, X, rec.generator, h0d, "h0", h1d, "h1");
                // Indeterminacy must vanish modulo h1-multiples, which d2 has already removed.
                f2::Echelon h1img(tn);
                if (auto m = mult_all("h1", T - h1d)) for (const auto& v : *m) h1img.insert(v);
                for (const auto& v : mt.indeterminacy)
                    if (!h1img.contains(v))
                        throw std::runtime_error("ambiguous d3 on " + rec.generator + "[3]: indeterminacy " +
                                                 std::to_string(mt.indeterminacy_dim));
                rec.indeterminacy = mt.indeterminacy_dim;
                val = mt.value;
                rec.value = tn ? vec_label(R, T, val) : "0";
            } else {
                rec.value = "?";
            }
            out.d3.push_back(rec);
            list.emplace_back(k, val);
        }
    }

    // Pages per total tridegree.
    auto rdim = [&](TriDegree d) { return R.dim(d); };
    auto rank_of = [&](const std::string& g, TriDegree d) -> int {
        auto m = mult_all(g, d);
        if (!m) return 0;
        return static_cast<int>(f2::rank(*m, static_cast<std::size_t>(R.dim(d + R.ring_gens.at(g)))));
    };
    for (int s = C.window.smin; s <= C.window.smax; ++s)
        for (int f = 0; f <= C.window.fmax; ++f)
            for (int w = C.window.wmin; w <= C.window.wmax; ++w) {
                const TriDegree T{s, f, w};
                const TriDegree a0 = T, a2{s - s2.s, f, w - s2.w}, a3{s - s3.s, f, w - s3.w};
                // E1
                const int e1 = rdim(a0) + rdim(a2) + rdim(a3);
                // E2: [3] -> ker h0; [2] -> R / h0 R; [0] unchanged.
                const int k3 = static_cast<int>(ker.count(a3) ? ker.at(a3).size() : 0);
                const int im20 = rank_of("h0", {a2.s, a2.f - 1, a2.w});
                const int e2 = rdim(a0) + (rdim(a2) - im20) + k3;
                // E3: [2] -> ker h1 mod h0 R; [0] -> R / h1 R.
                int kh1 = rdim(a2);
                if (auto m = mult_all("h1", a2)) kh1 = static_cast<int>(f2::kernel_image(*m, static_cast<std::size_t>(R.dim(a2 + h1d))).kernel.size());
                const int im1 = rank_of("h1", {a0.s - 1, a0.f - 1, a0.w - 1});
                const int e3_2 = kh1 - im20;
                const int e3_0 = rdim(a0) - im1;
                const int e3 = e3_0 + e3_2 + k3;
                // E4: d3 from [3] in this degree and into [0] of this degree.
                auto d3rank = [&](TriDegree X) -> int {
                    auto it = d3.find(X);
                    if (it == d3.end() || it->second.empty()) return 0;
                    const TriDegree Tt = X + d3shift;
                    const std::size_t tn = static_cast<std::size_t>(R.dim(Tt));
                    f2::Echelon h1img(tn);
                    if (auto m = mult_all("h1", Tt - h1d)) for (const auto& v : *m) h1img.insert(v);
                    // Map ker(h0)_X -> R_T / h1 R: use the propagated spanning set.
                    f2::Echelon src(static_cast<std::size_t>(R.dim(X)), true, it->second.size());
                    std::vector<f2::BitVec> imgs;
                    for (std::size_t k = 0; k < it->second.size(); ++k) {
                        f2::BitVec tag(it->second.size());
                        tag.set(k);
                        if (src.insert(it->second[k].first, tag)) {
                            f2::BitVec v = it->second[k].second;
                            h1img.reduce(v);
                            imgs.push_back(v);
                        }
                    }
                    f2::Echelon im = h1img;
                    int rr = 0;
                    for (auto& v : imgs)
                        if (im.insert(v)) ++rr;
                    return rr;
                };
                const int out3 = d3rank(a3);
                const int in0 = d3rank(a0 - d3shift);
                const int e4 = e3 - out3 - in0;
                out.nonzero_d3 += out3;
                if (e1) out.page_dims[1][T] = e1;
                if (e2) out.page_dims[2][T] = e2;
                if (e3) out.page_dims[3][T] = e3;
                if (e4) {
                    out.page_dims[4][T] = e4;
                    auto& l = C.classes[T];
                    for (int i = 0; i < e4; ++i) l.push_back("x" + T.str() + "#" + std::to_string(i));
                }
            }
    return out;
}

}  // namespace mot
