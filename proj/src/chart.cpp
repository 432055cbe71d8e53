#include "motivic/chart.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "motivic/cobar.hpp"

namespace mot {

int ExtChart::dim(TriDegree d) const {
    auto it = classes.find(d);
    return it == classes.end() ? 0 : static_cast<int>(it->second.size());
}

std::optional<f2::BitVec> ExtChart::multiply(const std::string& g, TriDegree d, const f2::BitVec& v) const {
    auto pit = products.find(g);
    if (pit == products.end()) return std::nullopt;
    const TriDegree t = d + ring_gens.at(g);
    if (!window.contains(d) || !window.contains(t)) return std::nullopt;
    f2::BitVec out(static_cast<std::size_t>(dim(t)));
    if (v.none()) return out;
    auto it = pit->second.find(d);
    if (it == pit->second.end()) return out;  // no classes on one side
    for (auto i : v.ones()) out ^= it->second[i];
    return out;
}

int ExtChart::find(TriDegree d, const std::string& label) const {
    auto it = classes.find(d);
    if (it == classes.end()) return -1;
    for (std::size_t i = 0; i < it->second.size(); ++i)
        if (it->second[i] == label) return static_cast<int>(i);
    return -1;
}

std::vector<TriDegree> ExtChart::degrees() const {
    std::vector<TriDegree> out;
    for (const auto& [d, v] : classes) out.push_back(d);
    return out;
}

namespace {

nlohmann::json deg_json(TriDegree d) { return nlohmann::json::array({d.s, d.f, d.w}); }
TriDegree deg_from(const nlohmann::json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()}; }

std::string kind_name(FragmentKind k) { return k == FragmentKind::A0Dual ? "A0" : "A1"; }

}  // namespace

nlohmann::json ExtChart::to_json() const {
    using nlohmann::json;
    json j;
    j["schema"] = "motivic-ext-chart";
    j["version"] = 1;
    j["name"] = name;
    j["field"] = field.tag();
    j["q"] = field.q;
    j["over"] = kind_name(over);
    j["window"] = {window.smin, window.smax, window.fmax, window.wmin, window.wmax};
    j["provenance"] = provenance;
    json cls = json::array();
    for (const auto& [d, labels] : classes) {
        json e = {{"deg", deg_json(d)}, {"labels", labels}};
        if (auto it = tags.find(d); it != tags.end()) e["tags"] = it->second;
        cls.push_back(e);
    }
    j["classes"] = cls;
    json rg = json::object();
    for (const auto& [n, d] : ring_gens) rg[n] = deg_json(d);
    j["ring_gens"] = rg;
    json pr = json::object();
    for (const auto& [g, table] : products) {
        json t = json::array();
        for (const auto& [d, cols] : table) {
            json c = json::array();
            for (const auto& v : cols) c.push_back(v.ones());
            t.push_back({{"deg", deg_json(d)}, {"images", c}});
        }
        pr[g] = t;
    }
    j["products"] = pr;
    return j;
}

ExtChart ExtChart::from_json(const nlohmann::json& j) {
    if (j.at("schema") != "motivic-ext-chart" || j.at("version") != 1)
        throw std::runtime_error("unsupported chart schema");
    ExtChart E;
    E.name = j.at("name").get<std::string>();
    const int q = j.at("q").get<int>();
    E.field = q == 0 ? BaseField::complex_like() : BaseField::from_q(q);
    E.over = j.at("over") == "A0" ? FragmentKind::A0Dual : FragmentKind::A1Dual;
    const auto& w = j.at("window");
    E.window = {w.at(0).get<int>(), w.at(1).get<int>(), w.at(2).get<int>(), w.at(3).get<int>(), w.at(4).get<int>()};
    E.provenance = j.at("provenance").get<std::string>();
    for (const auto& e : j.at("classes")) {
        const TriDegree d = deg_from(e.at("deg"));
        E.classes[d] = e.at("labels").get<std::vector<std::string>>();
        if (e.contains("tags")) E.tags[d] = e.at("tags").get<std::vector<std::string>>();
    }
    for (const auto& [n, d] : j.at("ring_gens").items()) E.ring_gens[n] = deg_from(d);
    for (const auto& [g, t] : j.at("products").items()) {
        auto& table = E.products[g];
        for (const auto& e : t) {
            const TriDegree d = deg_from(e.at("deg"));
            const std::size_t n = static_cast<std::size_t>(E.dim(d + E.ring_gens.at(g)));
            auto& cols = table[d];
            for (const auto& ones : e.at("images")) {
                f2::BitVec v(n);
                for (auto i : ones) v.set(i.get<std::size_t>());
                cols.push_back(v);
            }
        }
    }
    return E;
}

std::vector<std::string> ring_generator_names(FragmentKind over, const BaseField& F) {
    std::vector<std::string> out;
    if (F.kind == FieldKind::QThree)
        out = {"rho", "rhotau", "tau2", "h0"};
    else if (F.kind == FieldKind::QOne)
        out = {"u", "tau", "h0"};
    else
        out = {"tau", "h0"};
    if (over == FragmentKind::A1Dual) {
        out.push_back("h1");
        if (F.kind == FieldKind::QThree) out.push_back("tauh1");
        out.push_back("a");
        out.push_back("b");
    }
    return out;
}

namespace {

// Tridegrees of the window in an order where every X - |g| for a ring
// generator g comes first: filtration ascending, weight descending, stem
// descending.
std::vector<TriDegree> processing_order(const ExtWindow& W) {
    std::vector<TriDegree> out;
    for (int f = 0; f <= W.fmax; ++f)
        for (int w = W.wmax; w >= W.wmin; --w)
            for (int s = W.smax; s >= W.smin; --s) out.push_back({s, f, w});
    return out;
}

struct Monomial {
    std::vector<int> exps;  // over ring generators
    int gen = -1;           // module generator index
    auto key() const { return std::make_pair(gen, exps); }
};

std::string monomial_label(const Monomial& m, const std::vector<std::string>& names,
                           const std::vector<std::string>& gen_labels) {
    std::string s;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (!m.exps[i]) continue;
        if (!s.empty()) s += ' ';
        s += names[i];
        if (m.exps[i] > 1) s += '^' + std::to_string(m.exps[i]);
    }
    const std::string& g = gen_labels[static_cast<std::size_t>(m.gen)];
    if (g == "1") return s.empty() ? "1" : s;
    return s.empty() ? g : s + ' ' + g;
}

bool is_unit(const Comodule& M) { return M.size() == 1 && M.gen(0).deg == BiDegree{0, 0}; }

}  // namespace

ExtChart ext_minimal(const Comodule& M, const ExtWindow& W, const ChartOptions& opt) {
    ExtChart E;
    E.name = M.name();
    E.field = M.field();
    E.over = M.kind();
    E.window = W;
    E.provenance = "resolution";

    ExtEngine eng(M, W.smax, W.fmax, opt.cache_dir);
    auto order = processing_order(W);
    std::map<TriDegree, int> dims;
    for (auto d : order) {
        const int n = eng.dim(d);
        if (n) dims[d] = n;
    }

    if (!opt.products) {
        for (const auto& [d, n] : dims) {
            auto& labels = E.classes[d];
            for (int i = 0; i < n; ++i) labels.push_back("x" + d.str() + "#" + std::to_string(i));
        }
        return E;
    }

    const auto names = ring_generator_names(M.kind(), M.field());
    int sy = 0, fy = 0;
    std::vector<TriDegree> gdeg;
    {
        // Ring generator degrees are fixed; b is the largest.
        const std::map<std::string, TriDegree> known = {
            {"u", {-1, 0, -1}}, {"rho", {-1, 0, -1}}, {"tau", {0, 0, -1}}, {"tau2", {0, 0, -2}},
            {"rhotau", {-1, 0, -2}}, {"h0", {0, 1, 0}}, {"h1", {1, 1, 1}}, {"tauh1", {1, 1, 0}},
            {"a", {4, 3, 2}}, {"b", {8, 4, 4}}};
        for (const auto& n : names) {
            gdeg.push_back(known.at(n));
            sy = std::max(sy, known.at(n).s);
            fy = std::max(fy, known.at(n).f);
        }
    }
    ExtEngine ring(unit_comodule(M.kind(), M.field()), ring_limits_for(eng, sy, fy), opt.cache_dir);
    std::vector<RingClass> rc;
    for (const auto& n : names) {
        auto c = ring_class(ring, n);
        if (!c) throw std::logic_error("ring generator " + n + " unavailable");
        rc.push_back(*c);
        E.ring_gens[n] = c->deg;
    }

    // Products in the resolution basis.
    std::vector<std::map<TriDegree, std::vector<f2::BitVec>>> raw(names.size());
    for (const auto& [d, n] : dims)
        for (std::size_t g = 0; g < names.size(); ++g) {
            const TriDegree t = d + gdeg[g];
            if (!W.contains(t)) continue;
            auto& cols = raw[g][d];
            for (int i = 0; i < n; ++i) {
                f2::BitVec x(static_cast<std::size_t>(n));
                x.set(static_cast<std::size_t>(i));
                cols.push_back(eng.multiply(ring, rc[g].deg, rc[g].coords, d, x));
            }
        }

    // Monomial bases.
    struct Basis {
        std::vector<Monomial> monos;
        std::vector<f2::BitVec> vecs;  // resolution coordinates
        f2::Echelon ech;               // tracked by basis position
    };
    std::map<TriDegree, Basis> bases;
    std::vector<std::string> gen_labels;
    const bool unit = is_unit(M);
    for (auto d : order) {
        auto dit = dims.find(d);
        if (dit == dims.end()) continue;
        const std::size_t n = static_cast<std::size_t>(dit->second);
        std::map<std::pair<int, std::vector<int>>, f2::BitVec> cand;
        std::map<std::pair<int, std::vector<int>>, Monomial> cmono;
        for (std::size_t g = 0; g < names.size(); ++g) {
            const TriDegree src = {d.s - gdeg[g].s, d.f - gdeg[g].f, d.w - gdeg[g].w};
            auto bit = bases.find(src);
            if (bit == bases.end()) continue;
            const auto& cols = raw[g].at(src);
            for (std::size_t j = 0; j < bit->second.monos.size(); ++j) {
                Monomial m = bit->second.monos[j];
                ++m.exps[g];
                f2::BitVec v(n);
                for (auto i : bit->second.vecs[j].ones()) v ^= cols[i];
                if (cand.count(m.key())) continue;
                cand.emplace(m.key(), v);
                cmono.emplace(m.key(), m);
            }
        }
        // Fewest factors first, then the larger exponent vector.
        std::vector<Monomial> sorted;
        for (auto& [k, m] : cmono) sorted.push_back(m);
        std::sort(sorted.begin(), sorted.end(), [](const Monomial& a, const Monomial& b) {
            int da = 0, db = 0;
            for (auto e : a.exps) da += e;
            for (auto e : b.exps) db += e;
            if (da != db) return da < db;
            if (a.gen != b.gen) return a.gen < b.gen;
            return a.exps > b.exps;
        });
        Basis B;
        B.ech = f2::Echelon(n, true, n);
        auto take = [&](const Monomial& m, const f2::BitVec& v) {
            f2::BitVec tag(n);
            tag.set(B.monos.size());
            if (!B.ech.insert(v, tag)) return;
            B.monos.push_back(m);
            B.vecs.push_back(v);
        };
        for (const auto& m : sorted) take(m, cand.at(m.key()));
        for (std::size_t i = 0; i < n && B.monos.size() < n; ++i) {
            f2::BitVec e(n);
            e.set(i);
            if (B.ech.contains(e)) continue;
            std::string label = unit && d == TriDegree{} ? "1" : "g" + d.str();
            int clash = 0;
            for (const auto& l : gen_labels)
                if (l.rfind(label, 0) == 0) ++clash;
            if (clash) label += static_cast<char>('a' + clash);
            Monomial m{std::vector<int>(names.size(), 0), static_cast<int>(gen_labels.size())};
            gen_labels.push_back(label);
            take(m, e);
        }
        bases.emplace(d, std::move(B));
    }

    auto coords_in = [&](const Basis& B, f2::BitVec v) {
        f2::BitVec c(B.monos.size());
        B.ech.reduce(v, &c);
        if (v.any()) throw std::logic_error("monomial basis does not span");
        return c;
    };
    for (auto& [d, B] : bases) {
        auto& labels = E.classes[d];
        for (const auto& m : B.monos) labels.push_back(monomial_label(m, names, gen_labels));
    }
    for (std::size_t g = 0; g < names.size(); ++g) {
        auto& table = E.products[names[g]];
        for (const auto& [d, cols] : raw[g]) {
            const TriDegree t = d + gdeg[g];
            const Basis& S = bases.at(d);
            auto tit = bases.find(t);
            auto& out = table[d];
            for (const auto& v : S.vecs) {
                f2::BitVec img(0);
                if (tit == bases.end()) {
                    out.push_back(img);
                    continue;
                }
                f2::BitVec r(tit->second.vecs.empty() ? 0 : tit->second.vecs[0].size());
                for (auto i : v.ones()) r ^= cols[i];
                out.push_back(coords_in(tit->second, r));
            }
        }
    }
    return E;
}

ExtChart ext_cobar(const Comodule& M, const ExtWindow& W) {
    ExtChart E;
    E.name = M.name();
    E.field = M.field();
    E.over = M.kind();
    E.window = W;
    E.provenance = "cobar";
    CobarComplex C(M);
    for (auto d : processing_order(W)) {
        const int n = C.dim(d);
        auto& labels = E.classes[d];
        for (int i = 0; i < n; ++i) labels.push_back("x" + d.str() + "#" + std::to_string(i));
        if (!n) E.classes.erase(d);
    }
    return E;
}

std::optional<TriDegree> first_dim_mismatch(const ExtChart& a, const ExtChart& b) {
    const ExtWindow W{std::max(a.window.smin, b.window.smin), std::min(a.window.smax, b.window.smax),
                      std::min(a.window.fmax, b.window.fmax), std::max(a.window.wmin, b.window.wmin),
                      std::min(a.window.wmax, b.window.wmax)};
    for (int s = W.smin; s <= W.smax; ++s)
        for (int f = 0; f <= W.fmax; ++f)
            for (int w = W.wmin; w <= W.wmax; ++w)
                if (a.dim({s, f, w}) != b.dim({s, f, w})) return TriDegree{s, f, w};
    return std::nullopt;
}

ModuleAction module_action(const ExtChart& E, const std::string& element) {
    std::vector<std::string> word;
    {
        std::istringstream in(element);
        for (std::string t; in >> t;) word.push_back(t);
    }
    if (word.empty()) throw std::invalid_argument("empty ring element");
    ModuleAction A;
    A.element = element;
    for (const auto& g : word) {
        if (!E.ring_gens.count(g)) throw std::invalid_argument("unknown ring generator " + g);
        A.degree = A.degree + E.ring_gens.at(g);
    }
    for (const auto& [d, labels] : E.classes) {
        if (!E.window.contains(d + A.degree)) continue;
        std::vector<f2::BitVec> cols;
        bool ok = true;
        for (std::size_t i = 0; i < labels.size() && ok; ++i) {
            f2::BitVec v(labels.size());
            v.set(i);
            TriDegree at = d;
            for (const auto& g : word) {
                auto r = E.multiply(g, at, v);
                if (!r) {
                    ok = false;
                    break;
                }
                v = *r;
                at = at + E.ring_gens.at(g);
            }
            cols.push_back(v);
        }
        if (ok) A.images[d] = std::move(cols);
    }
    return A;
}

V1Quotient v1_quotient(const ExtChart& E) { return v1_quotient(E, E.window); }

V1Quotient v1_quotient(const ExtChart& E, const ExtWindow& report) {
    if (!E.has_product("b")) throw std::invalid_argument("chart has no b-multiplication table");
    const TriDegree bd = E.ring_gens.at("b");
    V1Quotient Q;
    for (const auto& [d, labels] : E.classes) {
        if (!report.contains(d)) continue;
        const std::size_t n = labels.size();
        // Kernels of b^k for every k with d + k|b| in the window.
        std::vector<f2::BitVec> cur;
        for (std::size_t i = 0; i < n; ++i) {
            f2::BitVec e(n);
            e.set(i);
            cur.push_back(e);
        }
        TriDegree at = d;
        int steps = 0;
        while (E.window.contains(at + bd)) {
            std::vector<f2::BitVec> next;
            for (const auto& v : cur) next.push_back(*E.multiply("b", at, v));
            cur = std::move(next);
            at = at + bd;
            ++steps;
        }
        auto& st = Q.status[d];
        Q.total += static_cast<int>(n);
        if (steps == 0) {
            st.assign(n, BTorsion::Undetermined);
            Q.undetermined += static_cast<int>(n);
            continue;
        }
        auto ki = f2::kernel_image(cur, static_cast<std::size_t>(E.dim(at)));
        // Classes are reported per basis element: a basis class is torsion
        // when it lies in the kernel, free otherwise.
        f2::Echelon K(n);
        for (const auto& k : ki.kernel) K.insert(k);
        for (std::size_t i = 0; i < n; ++i) {
            f2::BitVec e(n);
            e.set(i);
            st.push_back(K.contains(e) ? BTorsion::Torsion : BTorsion::Free);
        }
        const int q = static_cast<int>(n - K.rank());
        if (q) Q.quotient_dims[d] = q;
    }
    return Q;
}

}  // namespace mot
