#include "motivic/comodule.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "motivic/f2.hpp"

namespace mot {

Comodule::Comodule(FragmentKind kind, BaseField F, std::string name)
    : kind_(kind), field_(F), name_(std::move(name)) {
    if (kind != FragmentKind::A0Dual && kind != FragmentKind::A1Dual)
        throw std::invalid_argument("comodules are over A(0) or A(1)");
}

int Comodule::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (gens_[static_cast<std::size_t>(i)].name == name) return i;
    return -1;
}

int Comodule::add_generator(ComoduleGenerator g) {
    gens_.push_back(std::move(g));
    coaction_.emplace_back();
    return size() - 1;
}

void Comodule::set_coaction(int g, std::vector<CoactionTerm> terms) {
    canonicalize(terms);
    coaction_[static_cast<std::size_t>(g)] = std::move(terms);
}

int Comodule::max_stem() const {
    int s = 0;
    bool first = true;
    for (const auto& g : gens_) {
        s = first ? g.deg.s : std::max(s, g.deg.s);
        first = false;
    }
    return s;
}

int Comodule::min_stem() const {
    int s = 0;
    bool first = true;
    for (const auto& g : gens_) {
        s = first ? g.deg.s : std::min(s, g.deg.s);
        first = false;
    }
    return s;
}

nlohmann::json Comodule::to_json() const {
    nlohmann::json j;
    j["schema"] = "motivic-comodule";
    j["version"] = 1;
    j["name"] = name_;
    j["fragment"] = fragment_name(kind_);
    j["field"] = {{"class", field_.tag()}, {"q", field_.q}};
    auto& gs = j["generators"] = nlohmann::json::array();
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : coaction_[i]) terms.push_back({t.c.tauExp, t.c.genExp, t.mono, t.gen});
        gs.push_back({{"name", gens_[i].name},
                      {"stem", gens_[i].deg.s},
                      {"weight", gens_[i].deg.w},
                      {"mahowald_weight", gens_[i].weight},
                      {"coaction", terms}});
    }
    return j;
}

Comodule Comodule::from_json(const nlohmann::json& j) {
    if (j.at("schema") != "motivic-comodule" || j.at("version") != 1)
        throw std::runtime_error("unsupported comodule document");
    const std::string frag = j.at("fragment");
    FragmentKind kind;
    if (frag == "A(0)")
        kind = FragmentKind::A0Dual;
    else if (frag == "A(1)")
        kind = FragmentKind::A1Dual;
    else
        throw std::runtime_error("unknown fragment " + frag);
    const std::string cls = j.at("field").at("class");
    BaseField F = cls == "c" ? BaseField::complex_like() : BaseField::from_q(j.at("field").at("q").get<int>());
    if (F.tag() != cls) throw std::runtime_error("field class does not match q");
    Comodule M(kind, F, j.at("name"));
    for (const auto& g : j.at("generators"))
        M.add_generator({g.at("name"), {g.at("stem"), g.at("weight")}, g.at("mahowald_weight")});
    int i = 0;
    for (const auto& g : j.at("generators")) {
        std::vector<CoactionTerm> terms;
        for (const auto& t : g.at("coaction")) terms.push_back({{t[0], t[1]}, t[2], t[3]});
        M.set_coaction(i++, std::move(terms));
    }
    return M;
}

// ---------------------------------------------------------------------------

Comodule unit_comodule(FragmentKind kind, const BaseField& F) {
    Comodule M(kind, F, "M2");
    M.add_generator({"1", {0, 0}, 0});
    M.set_coaction(0, {{{}, 0, 0}});
    return M;
}

namespace {

void sort_for_generators(std::vector<MilnorMonomial>& monos) {
    std::sort(monos.begin(), monos.end(), [](const MilnorMonomial& a, const MilnorMonomial& b) {
        auto da = a.degree(), db = b.degree();
        if (da.s != db.s) return da.s < db.s;
        if (da.w != db.w) return da.w < db.w;
        return a < b;
    });
}

std::vector<MilnorMonomial> weight_bounded(int n, int max_weight) {
    auto monos = quotient_monomials(n, max_weight);
    sort_for_generators(monos);
    return monos;
}

MilnorMonomial verschiebung(const MilnorMonomial& m) {
    MilnorMonomial v;
    v.xi.push_back(0);
    v.xi.insert(v.xi.end(), m.xi.begin(), m.xi.end());
    v.tauOcc = m.tauOcc << 1;
    v.trim();
    return v;
}

}  // namespace

Comodule quotient_span(int n, const std::vector<MilnorMonomial>& monos, FragmentKind over, const BaseField& F,
                       std::string name) {
    Comodule M(over, F, std::move(name));
    const Fragment& A = M.algebra();
    std::map<MilnorMonomial, int> index;
    for (const auto& m : monos) {
        if (!in_fragment(m, n == 0 ? FragmentKind::AmodA0Dual : FragmentKind::AmodA1Dual))
            throw std::invalid_argument("quotient_span: monomial outside the quotient algebra");
        index[m] = M.add_generator({m.str(F), m.degree(), m.weight()});
    }
    for (const auto& m : monos) {
        std::vector<CoactionTerm> terms;
        for (const auto& [L, R] : right_coaction(m, A)) {
            auto it = index.find(L);
            if (it == index.end()) continue;
            for (const auto& t : R)
                for (const auto& u : A.multiply(A.conjugate(t.m), A.right_unit(t.c)))
                    terms.push_back({u.c, u.m, it->second});
        }
        M.set_coaction(index[m], std::move(terms));
    }
    return M;
}

Comodule weight_truncated_quotient(int n, int max_weight, const BaseField& F, FragmentKind over) {
    std::string nm = "(A//A(" + std::to_string(n) + "))^wt<=" + std::to_string(max_weight);
    return quotient_span(n, weight_bounded(n, max_weight), over, F, nm);
}

Comodule brown_gitler(int n, int k, const BaseField& F, FragmentKind over) {
    if (n != 0 && n != 1) throw std::invalid_argument("brown_gitler: n must be 0 or 1");
    if (k < 0) throw std::invalid_argument("brown_gitler: k must be non-negative");
    std::string nm = "B" + std::to_string(n) + "(" + std::to_string(k) + ")";
    return quotient_span(n, weight_bounded(n, (2 << n) * k), over, F, nm);
}

Comodule a1_mod_a0(const BaseField& F) {
    std::vector<MilnorMonomial> monos;
    for (int a = 0; a <= 1; ++a)
        for (unsigned e = 0; e <= 1; ++e) {
            MilnorMonomial m;
            if (a) m.set_xi(1, 1);
            if (e) m.tauOcc = 2u;
            monos.push_back(m);
        }
    sort_for_generators(monos);
    return quotient_span(0, monos, FragmentKind::A1Dual, F, "(A(1)//A(0))");
}

Comodule tensor(const Comodule& M, const Comodule& N) {
    if (M.kind() != N.kind() || !(M.field() == N.field()))
        throw std::invalid_argument("tensor: comodules over different algebras");
    Comodule T(M.kind(), M.field(), M.name() + "(x)" + N.name());
    const Fragment& A = M.algebra();
    const int nn = N.size();
    // Tensoring with the unit comodule keeps the other factor's names.
    auto is_unit = [](const Comodule& C) { return C.size() == 1 && C.name() == "M2"; };
    for (int i = 0; i < M.size(); ++i)
        for (int j = 0; j < nn; ++j) {
            std::string nm = is_unit(M)   ? N.gen(j).name
                             : is_unit(N) ? M.gen(i).name
                                          : M.gen(i).name + "|" + N.gen(j).name;
            T.add_generator({nm, M.gen(i).deg + N.gen(j).deg, M.gen(i).weight + N.gen(j).weight});
        }
    for (int i = 0; i < M.size(); ++i)
        for (int j = 0; j < nn; ++j) {
            std::vector<CoactionTerm> terms;
            for (const auto& a : M.coaction(i))
                for (const auto& b : N.coaction(j)) {
                    auto c = multiply_coeff(a.c, b.c);
                    if (!c) continue;
                    for (const auto& p : A.mult(a.mono, b.mono))
                        if (auto cc = multiply_coeff(*c, p.c)) terms.push_back({*cc, p.m, a.gen * nn + b.gen});
                }
            T.set_coaction(i * nn + j, std::move(terms));
        }
    return T;
}

Comodule tensor_power(const Comodule& M, int n) {
    if (n < 0) throw std::invalid_argument("tensor_power: negative exponent");
    Comodule out = unit_comodule(M.kind(), M.field());
    for (int i = 0; i < n; ++i) out = tensor(out, M);
    out.set_name(n == 0 ? "M2" : M.name() + "^" + std::to_string(n));
    return out;
}

Comodule suspend(const Comodule& M, int a, int b) {
    std::string nm = (a == 0 && b == 0) ? M.name()
                                         : "S^{" + std::to_string(a) + "," + std::to_string(b) + "}" + M.name();
    Comodule S(M.kind(), M.field(), nm);
    for (int i = 0; i < M.size(); ++i) {
        auto g = M.gen(i);
        g.deg = g.deg + BiDegree{a, b};
        S.add_generator(g);
    }
    for (int i = 0; i < M.size(); ++i) S.set_coaction(i, M.coaction(i));
    return S;
}

Comodule restrict_to_a0(const Comodule& M) {
    if (M.kind() == FragmentKind::A0Dual) return M;
    Comodule R(FragmentKind::A0Dual, M.field(), M.name());
    for (int i = 0; i < M.size(); ++i) R.add_generator(M.gen(i));
    for (int i = 0; i < M.size(); ++i) {
        std::vector<CoactionTerm> terms;
        for (const auto& t : M.coaction(i))
            if (t.mono <= 1) terms.push_back(t);
        R.set_coaction(i, std::move(terms));
    }
    return R;
}

// ---------------------------------------------------------------------------

AxiomReport check_axioms(const Comodule& M) {
    AxiomReport rep;
    const Fragment& A = M.algebra();
    for (int g = 0; g < M.size(); ++g) {
        std::vector<CoactionTerm> unit;
        for (const auto& t : M.coaction(g)) {
            if (t.mono == 0) unit.push_back(t);
            if (t.c.degree() + A.degree(t.mono) + M.gen(t.gen).deg != M.gen(g).deg) {
                rep.degrees = false;
                rep.detail += "degree mismatch at " + M.gen(g).name + "; ";
            }
        }
        if (unit != std::vector<CoactionTerm>{{{}, 0, g}}) {
            rep.counit = false;
            rep.detail += "counit fails at " + M.gen(g).name + "; ";
        }
        WordSum lhs, rhs;
        for (const auto& t : M.coaction(g)) {
            for (const auto& u : A.coproduct(t.mono))
                if (auto c = multiply_coeff(t.c, u.c))
                    lhs.push_back(Word{*c, {static_cast<std::uint8_t>(u.l), static_cast<std::uint8_t>(u.r)}, t.gen});
            for (const auto& u : M.coaction(t.gen))
                push_coeff(A, Word{t.c, {static_cast<std::uint8_t>(t.mono), static_cast<std::uint8_t>(u.mono)}, u.gen},
                           1, u.c, rhs);
        }
        canonicalize(lhs);
        canonicalize(rhs);
        if (lhs != rhs) {
            rep.coassociative = false;
            rep.detail += "coassociativity fails at " + M.gen(g).name + "; ";
        }
    }
    return rep;
}

int CellFiltration::layer_of(int gen) const { return layer_index[static_cast<std::size_t>(gen)]; }

CellFiltration cell_filtration(const Comodule& M) {
    CellFiltration cf;
    std::map<int, std::vector<int>> by_stem;
    for (int i = 0; i < M.size(); ++i) by_stem[M.gen(i).deg.s].push_back(i);
    cf.layer_index.assign(static_cast<std::size_t>(M.size()), 0);
    for (auto& [s, gens] : by_stem) {
        for (int g : gens) cf.layer_index[static_cast<std::size_t>(g)] = static_cast<int>(cf.layers.size());
        cf.stems.push_back(s);
        cf.layers.push_back(gens);
    }
    return cf;
}

bool respects_filtration(const Comodule& M, const CellFiltration& cf) {
    for (int g = 0; g < M.size(); ++g)
        for (const auto& t : M.coaction(g))
            if (cf.layer_of(t.gen) > cf.layer_of(g)) return false;
    return true;
}

std::vector<int> comodule_map_defects(const ComoduleMap& f, const Comodule& M, const Comodule& N) {
    const Fragment& A = M.algebra();
    std::vector<int> bad;
    for (int g = 0; g < M.size(); ++g) {
        WordSum lhs, rhs;
        for (const auto& h : f.images[static_cast<std::size_t>(g)])
            for (const auto& t : N.coaction(h.gen))
                if (auto c = multiply_coeff(h.c, t.c))
                    lhs.push_back(Word{*c, {static_cast<std::uint8_t>(t.mono)}, t.gen});
        for (const auto& t : M.coaction(g))
            for (const auto& h : f.images[static_cast<std::size_t>(t.gen)])
                push_coeff(A, Word{t.c, {static_cast<std::uint8_t>(t.mono)}, h.gen}, 1, h.c, rhs);
        canonicalize(lhs);
        canonicalize(rhs);
        if (lhs != rhs) bad.push_back(g);
    }
    return bad;
}

std::vector<std::pair<CoeffMonomial, int>> graded_basis(const Comodule& M, BiDegree d) {
    std::vector<std::pair<CoeffMonomial, int>> out;
    for (int g = 0; g < M.size(); ++g)
        for (auto c : m2_basis(d - M.gen(g).deg, M.field())) out.emplace_back(c, g);
    return out;
}

namespace {

// Matrix of an M2-linear map on the F2-basis in bidegree d (columns are
// source basis vectors).
std::vector<f2::BitVec> map_matrix(const ComoduleMap& f, const Comodule& M, const Comodule& N, BiDegree d) {
    auto src = graded_basis(M, d);
    auto tgt = graded_basis(N, d);
    std::map<std::pair<int, int>, std::size_t> pos;
    for (std::size_t i = 0; i < tgt.size(); ++i) pos[{tgt[i].second, tgt[i].first.key()}] = i;
    std::vector<f2::BitVec> cols;
    for (const auto& [c, g] : src) {
        f2::BitVec v(tgt.size());
        for (const auto& h : f.images[static_cast<std::size_t>(g)]) {
            auto cc = multiply_coeff(c, h.c);
            if (!cc) continue;
            auto it = pos.find({h.gen, cc->key()});
            if (it == pos.end()) throw std::logic_error("map_matrix: map is not degree preserving");
            v.flip(it->second);
        }
        cols.push_back(std::move(v));
    }
    return cols;
}

}  // namespace

SesReport ses_brown_gitler(int k, bool odd, const BaseField& F) {
    if (k < 1) throw std::invalid_argument("ses_brown_gitler: k >= 1");
    SesReport rep;
    rep.k = k;
    rep.odd = odd;
    const int top = odd ? 2 * k + 1 : 2 * k;
    Comodule bk = brown_gitler(0, k, F);
    Comodule b1 = brown_gitler(0, 1, F);
    rep.sub = suspend(odd ? tensor(bk, b1) : bk, 4 * k, 2 * k);
    rep.middle = brown_gitler(0, top, F);
    rep.quotient = tensor(brown_gitler(1, k - 1, F), a1_mod_a0(F));

    auto lookup = [](const Comodule& C, const std::string& nm) {
        int i = C.find(nm);
        if (i < 0) throw std::logic_error("ses_brown_gitler: no generator " + nm + " in " + C.name());
        return i;
    };
    auto bk_monos = weight_bounded(0, 2 * k);
    auto b1_monos = weight_bounded(0, 2);
    // Generators of bk and b1 are listed in the order of these monomial lists.
    for (std::size_t i = 0; i < bk_monos.size(); ++i) {
        MilnorMonomial base = verschiebung(bk_monos[i]);
        base.set_xi(1, base.xi_exp(1) + 2 * k - bk_monos[i].weight());
        std::vector<const MilnorMonomial*> factors{nullptr};
        if (odd) {
            factors.clear();
            for (const auto& n : b1_monos) factors.push_back(&n);
        }
        for (const auto* n : factors) {
            MilnorMonomial img = base;
            if (n) {
                img.set_xi(1, img.xi_exp(1) + n->xi_exp(1));
                img.tauOcc |= n->tauOcc;
            }
            rep.inclusion.images.push_back({{{}, lookup(rep.middle, img.str(F))}});
        }
    }
    auto mid_monos = weight_bounded(0, 2 * top);
    for (const auto& m : mid_monos) {
        MilnorMonomial P = m, S;
        const int a = m.xi_exp(1);
        P.set_xi(1, a - a % 2);
        P.tauOcc &= ~2u;
        if (a % 2) S.set_xi(1, 1);
        S.tauOcc = m.tauOcc & 2u;
        if (P.weight() > 4 * (k - 1)) {
            rep.projection.images.emplace_back();
            continue;
        }
        std::string nm = P.str(F) + "|" + S.str(F);
        rep.projection.images.push_back({{{}, lookup(rep.quotient, nm)}});
    }

    rep.inclusion_defects = comodule_map_defects(rep.inclusion, rep.sub, rep.middle);
    rep.projection_defects = comodule_map_defects(rep.projection, rep.middle, rep.quotient);

    // Exactness in every bidegree touched by generators, with a margin for
    // the coefficient towers.
    int wmin = 0, wmax = 0;
    for (const auto& g : rep.middle.gens()) {
        wmin = std::min(wmin, g.deg.w);
        wmax = std::max(wmax, g.deg.w);
    }
    rep.exact = true;
    for (int s = -1; s <= rep.middle.max_stem(); ++s)
        for (int w = wmin - 4; w <= wmax; ++w) {
            BiDegree d{s, w};
            auto I = map_matrix(rep.inclusion, rep.sub, rep.middle, d);
            auto P = map_matrix(rep.projection, rep.middle, rep.quotient, d);
            const std::size_t ds = graded_basis(rep.sub, d).size();
            const std::size_t dm = graded_basis(rep.middle, d).size();
            const std::size_t dq = graded_basis(rep.quotient, d).size();
            std::size_t ri = f2::rank(I, dm), rp = f2::rank(P, dq);
            bool composite_zero = true;
            for (const auto& col : I) {
                f2::BitVec img(dq);
                for (auto j : col.ones()) img ^= P[j];
                if (img.any()) composite_zero = false;
            }
            if (ri != ds || rp != dq || ds + dq != dm || !composite_zero) {
                rep.exact = false;
                rep.detail += "not exact at (" + std::to_string(s) + "," + std::to_string(w) + "); ";
            }
        }
    if (!rep.exact) throw std::runtime_error("Brown-Gitler sequence is not exact: " + rep.detail);
    return rep;
}

std::vector<SplittingRow> amod_a1_splitting_check(int k_max, int max_stem, const BaseField& F) {
    (void)F;
    std::map<BiDegree, int> lhs, rhs;
    for (const auto& m : quotient_monomials(1, max_stem + 1)) {
        auto d = m.degree();
        if (d.s <= max_stem) ++lhs[d];
    }
    for (int k = 0; k <= k_max; ++k)
        for (const auto& m : quotient_monomials(0, 2 * k)) {
            auto d = m.degree() + BiDegree{4 * k, 2 * k};
            if (d.s <= max_stem) ++rhs[d];
        }
    std::set<BiDegree> keys;
    for (auto& [d, n] : lhs) keys.insert(d);
    for (auto& [d, n] : rhs) keys.insert(d);
    std::vector<SplittingRow> out;
    for (auto d : keys) out.push_back({d, lhs[d], rhs[d]});
    return out;
}

}  // namespace mot
