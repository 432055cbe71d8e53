#include "motivic/steenrod.hpp"

#include <functional>
#include <mutex>
#include <stdexcept>

namespace mot {

std::string fragment_name(FragmentKind k) {
    switch (k) {
        case FragmentKind::A0Dual: return "A(0)";
        case FragmentKind::A1Dual: return "A(1)";
        case FragmentKind::AmodA0Dual: return "A//A(0)";
        case FragmentKind::AmodA1Dual: return "A//A(1)";
    }
    return "?";
}

BiDegree xi_degree(int i) { return {(1 << (i + 1)) - 2, (1 << i) - 1}; }
BiDegree tau_degree(int i) { return {(1 << (i + 1)) - 1, (1 << i) - 1}; }

void MilnorMonomial::set_xi(int i, int e) {
    if (static_cast<int>(xi.size()) < i) xi.resize(static_cast<std::size_t>(i), 0);
    xi[static_cast<std::size_t>(i - 1)] = e;
    trim();
}

void MilnorMonomial::trim() {
    while (!xi.empty() && xi.back() == 0) xi.pop_back();
}

BiDegree MilnorMonomial::degree() const {
    BiDegree d = coeff.degree();
    for (std::size_t i = 0; i < xi.size(); ++i) {
        BiDegree g = xi_degree(static_cast<int>(i) + 1);
        d = d + BiDegree{g.s * xi[i], g.w * xi[i]};
    }
    for (int i = 0; i < 32; ++i)
        if (tauOcc >> i & 1u) d = d + tau_degree(i);
    return d;
}

int MilnorMonomial::weight() const {
    int w = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) w += xi[i] << (i + 1);
    for (int i = 0; i < 32; ++i)
        if (tauOcc >> i & 1u) w += 1 << i;
    return w;
}

std::string MilnorMonomial::str(const BaseField& F) const {
    std::string out;
    auto add = [&](const std::string& s) {
        if (!out.empty()) out += " ";
        out += s;
    };
    if (!coeff.is_one()) add(coeff.str(F));
    for (int i = 0; i < 32; ++i)
        if (tauOcc >> i & 1u) add("tau" + std::to_string(i));
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (!xi[i]) continue;
        std::string s = "xi" + std::to_string(i + 1);
        if (xi[i] > 1) s += "^" + std::to_string(xi[i]);
        add(s);
    }
    return out.empty() ? "1" : out;
}

bool MilnorMonomial::operator==(const MilnorMonomial& o) const {
    return tauOcc == o.tauOcc && xi == o.xi && coeff == o.coeff;
}

bool MilnorMonomial::operator<(const MilnorMonomial& o) const {
    if (tauOcc != o.tauOcc) return tauOcc < o.tauOcc;
    if (xi != o.xi) return xi < o.xi;
    return coeff < o.coeff;
}

bool in_fragment(const MilnorMonomial& m, FragmentKind k) {
    switch (k) {
        case FragmentKind::A0Dual: return m.xi.empty() && (m.tauOcc & ~1u) == 0;
        case FragmentKind::A1Dual: return m.xi.size() <= 1 && m.xi_exp(1) <= 1 && (m.tauOcc & ~3u) == 0;
        case FragmentKind::AmodA0Dual: return (m.tauOcc & 1u) == 0;
        case FragmentKind::AmodA1Dual: return (m.tauOcc & 3u) == 0 && m.xi_exp(1) % 2 == 0;
    }
    return false;
}

MilnorSum reduce(const FormalProduct& p, const FragmentSpec& spec) {
    MilnorSum out;
    std::vector<int> tau = p.tau;
    std::vector<int> xi = p.xi;
    const bool q3 = spec.field.kind == FieldKind::QThree;
    const bool sub = spec.kind == FragmentKind::A0Dual || spec.kind == FragmentKind::A1Dual;

    std::function<void(std::vector<int>, std::vector<int>, CoeffMonomial)> go =
        [&](std::vector<int> x, std::vector<int> t, CoeffMonomial c) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i] < 2) continue;
                t[i] -= 2;
                const std::size_t n = i + 1;  // xibar_{i+1}, taubar_{i+1}
                auto bump = [](std::vector<int>& v, std::size_t j) {
                    if (v.size() <= j) v.resize(j + 1, 0);
                    ++v[j];
                };
                {
                    auto x2 = x;
                    bump(x2, n - 1);
                    go(x2, t, {c.tauExp + 1, c.genExp});
                }
                if (q3) {
                    if (auto rc = multiply_coeff(c, {0, 1})) {
                        auto t2 = t;
                        bump(t2, n);
                        go(x, t2, *rc);
                        auto x3 = x;
                        auto t3 = t;
                        bump(x3, n - 1);
                        bump(t3, 0);
                        go(x3, t3, *rc);
                    }
                }
                return;
            }
            MilnorMonomial m;
            m.coeff = c;
            m.xi = x;
            m.trim();
            for (std::size_t i = 0; i < t.size(); ++i)
                if (t[i]) m.tauOcc |= 1u << i;
            if (sub && !in_fragment(m, spec.kind)) return;
            out.push_back(std::move(m));
        };
    go(xi, tau, p.coeff);
    canonicalize(out);
    return out;
}

std::vector<MilnorMonomial> quotient_monomials(int n, int max_weight) {
    if (n != 0 && n != 1) throw std::invalid_argument("quotient_monomials: n must be 0 or 1");
    // Generators: (is_tau, index, exponent step).
    struct Gen {
        bool tau;
        int i;
        int step;
        int wt;
    };
    std::vector<Gen> gens;
    for (int i = 1; (1 << i) <= max_weight; ++i) {
        int step = (n == 1 && i == 1) ? 2 : 1;
        gens.push_back({false, i, step, (1 << i) * step});
        if (!(n == 1 && i == 1)) gens.push_back({true, i, 1, 1 << i});
    }
    std::vector<MilnorMonomial> out;
    MilnorMonomial cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t g, int w) {
        if (g == gens.size()) {
            MilnorMonomial m = cur;
            m.trim();
            out.push_back(m);
            return;
        }
        const Gen& G = gens[g];
        if (G.tau) {
            rec(g + 1, w);
            if (w + G.wt <= max_weight) {
                cur.tauOcc |= 1u << G.i;
                rec(g + 1, w + G.wt);
                cur.tauOcc &= ~(1u << G.i);
            }
            return;
        }
        for (int e = 0; w + (e / G.step) * G.wt <= max_weight; e += G.step) {
            if (static_cast<int>(cur.xi.size()) < G.i) cur.xi.resize(static_cast<std::size_t>(G.i), 0);
            cur.xi[static_cast<std::size_t>(G.i - 1)] = e;
            rec(g + 1, w + (e / G.step) * G.wt);
        }
        cur.xi[static_cast<std::size_t>(G.i - 1)] = 0;
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MilnorMonomial> fragment_basis(const FragmentSpec& spec, BiDegree d) {
    std::vector<MilnorMonomial> monos;
    switch (spec.kind) {
        case FragmentKind::A0Dual:
        case FragmentKind::A1Dual: {
            const Fragment& A = Fragment::get(spec.kind, spec.field);
            for (int m = 0; m < A.size(); ++m) monos.push_back(A.to_milnor(m));
            break;
        }
        case FragmentKind::AmodA0Dual:
        case FragmentKind::AmodA1Dual:
            // Stem dominates weight for every generator, and a coefficient
            // lowers the stem by at most one.
            monos = quotient_monomials(spec.kind == FragmentKind::AmodA0Dual ? 0 : 1, std::max(0, d.s + 1));
            break;
    }
    std::vector<MilnorMonomial> out;
    for (const auto& m : monos) {
        for (auto c : m2_basis(d - m.degree(), spec.field)) {
            MilnorMonomial x = m;
            x.coeff = c;
            out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr int kTau0 = 1, kXi1 = 2, kTau1 = 4;
}

const Fragment& Fragment::get(FragmentKind kind, const BaseField& F) {
    if (kind != FragmentKind::A0Dual && kind != FragmentKind::A1Dual)
        throw std::invalid_argument("Fragment tables exist only for A(0) and A(1)");
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<Fragment>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(static_cast<int>(kind), static_cast<int>(F.kind), F.q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::unique_ptr<Fragment>(new Fragment(kind, F))).first;
    return *it->second;
}

BiDegree Fragment::degree(int m) const { return to_milnor(m).degree(); }
int Fragment::weight(int m) const { return to_milnor(m).weight(); }
std::string Fragment::name(int m) const { return to_milnor(m).str(field_); }

MilnorMonomial Fragment::to_milnor(int m) const {
    MilnorMonomial x;
    if (m & kTau0) x.tauOcc |= 1u;
    if (m & kTau1) x.tauOcc |= 2u;
    if (m & kXi1) x.xi = {1};
    return x;
}

int Fragment::index_of(const MilnorMonomial& m) const {
    if (!in_fragment(m, kind_)) return -1;
    int idx = 0;
    if (m.tauOcc & 1u) idx |= kTau0;
    if (m.tauOcc & 2u) idx |= kTau1;
    if (m.xi_exp(1)) idx |= kXi1;
    return idx;
}

GElem Fragment::mono_product(int a, int b) const {
    if ((a & b & ~kTau0) != 0) return {};
    const int base = (a | b) & ~kTau0;
    if (!((a & b) & kTau0)) return {GTerm{{}, a | b}};
    // taubar_0 squared
    if (kind_ == FragmentKind::A0Dual) return {};
    GElem out;
    auto add = [&](CoeffMonomial c, int extra) {
        if (base & extra) return;  // collides with xi_1 or taubar_1 already present
        out.push_back({c, base | extra});
    };
    add({1, 0}, kXi1);
    if (field_.kind == FieldKind::QThree) {
        add({0, 1}, kTau1);
        add({0, 1}, kTau0 | kXi1);
    }
    canonicalize(out);
    return out;
}

GElem Fragment::multiply(const GElem& x, const GElem& y) const {
    GElem out;
    for (const auto& a : x)
        for (const auto& b : y) {
            auto c = multiply_coeff(a.c, b.c);
            if (!c) continue;
            for (const auto& t : mult(a.m, b.m))
                if (auto cc = multiply_coeff(*c, t.c)) out.push_back({*cc, t.m});
        }
    canonicalize(out);
    return out;
}

const GElem& Fragment::right_unit(CoeffMonomial c) const {
    std::lock_guard<std::recursive_mutex> lock(cache_mu_);
    auto it = eta_cache_.find(c.key());
    if (it != eta_cache_.end()) return it->second;
    GElem e{{c, 0}};
    if (field_.kind == FieldKind::QThree && c.genExp == 0 && c.tauExp % 2 == 1)
        e.push_back({{c.tauExp - 1, 1}, kTau0});
    canonicalize(e);
    return eta_cache_.emplace(c.key(), std::move(e)).first->second;
}

const GElem& Fragment::times_right_unit(int m, CoeffMonomial c) const {
    auto key = std::make_pair(m, c.key());
    std::lock_guard<std::recursive_mutex> lock(cache_mu_);
    auto it = tru_cache_.find(key);
    if (it != tru_cache_.end()) return it->second;
    GElem r = multiply({{{}, m}}, right_unit(c));
    return tru_cache_.emplace(key, std::move(r)).first->second;
}

GElem Fragment::conjugate(const GElem& x) const {
    GElem out;
    for (const auto& t : x) {
        GElem part = multiply(right_unit(t.c), chi_[t.m]);
        out.insert(out.end(), part.begin(), part.end());
    }
    canonicalize(out);
    return out;
}

Fragment::Fragment(FragmentKind kind, const BaseField& F) : kind_(kind), field_(F) {
    const int n = size();
    mult_.assign(64, {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mult_[a * 8 + b] = mono_product(a, b);

    // Coproducts of generators as two-factor words, multiplied out with the
    // coefficient of the right factor pushed to the far left.
    auto times = [&](const WordSum& x, const WordSum& y) {
        WordSum out;
        for (const auto& a : x)
            for (const auto& b : y) {
                auto c = multiply_coeff(a.c, b.c);
                if (!c) continue;
                for (const auto& l : mult(a.m[0], b.m[0])) {
                    auto cl = multiply_coeff(*c, l.c);
                    if (!cl) continue;
                    for (const auto& r : mult(a.m[1], b.m[1])) {
                        Word w{*cl, {static_cast<std::uint8_t>(l.m), static_cast<std::uint8_t>(r.m)}, -1};
                        push_coeff(*this, w, 1, r.c, out);
                    }
                }
            }
        canonicalize(out);
        return out;
    };
    auto w2 = [](int l, int r) { return Word{{}, {static_cast<std::uint8_t>(l), static_cast<std::uint8_t>(r)}, -1}; };
    const WordSum dTau0{w2(kTau0, 0), w2(0, kTau0)};
    const WordSum dXi1{w2(kXi1, 0), w2(0, kXi1)};
    const WordSum dTau1{w2(kTau1, 0), w2(kXi1, kTau0), w2(0, kTau1)};

    cop_.assign(static_cast<std::size_t>(n), {});
    for (int m = 0; m < n; ++m) {
        WordSum acc{w2(0, 0)};
        if (m & kTau0) acc = times(acc, dTau0);
        if (m & kXi1) acc = times(acc, dXi1);
        if (m & kTau1) acc = times(acc, dTau1);
        for (const auto& w : acc) cop_[static_cast<std::size_t>(m)].push_back({w.c, w.m[0], w.m[1]});
    }

    // Antipode from sum chi(l') l'' = 0 over the coproduct, by increasing stem.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) order[static_cast<std::size_t>(m)] = m;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_pair(degree(a).s, a) < std::make_pair(degree(b).s, b);
    });
    chi_.assign(static_cast<std::size_t>(n), {});
    for (int m : order) {
        if (m == 0) {
            chi_[0] = {{{}, 0}};
            continue;
        }
        GElem acc;
        for (const auto& t : cop_[static_cast<std::size_t>(m)]) {
            if (t.l == m && t.r == 0 && t.c.is_one()) continue;
            GElem part = multiply(multiply(right_unit(t.c), chi_[static_cast<std::size_t>(t.l)]), {{{}, t.r}});
            acc.insert(acc.end(), part.begin(), part.end());
        }
        canonicalize(acc);
        chi_[static_cast<std::size_t>(m)] = std::move(acc);
    }
}

void push_coeff(const Fragment& A, Word w, std::size_t k, CoeffMonomial e, WordSum& out) {
    if (k == 0) {
        auto c = multiply_coeff(w.c, e);
        if (c) {
            w.c = *c;
            out.push_back(std::move(w));
        }
        return;
    }
    if (e.is_one()) {
        out.push_back(std::move(w));
        return;
    }
    for (const auto& t : A.times_right_unit(w.m[k - 1], e)) {
        Word w2 = w;
        w2.m[k - 1] = static_cast<std::uint8_t>(t.m);
        push_coeff(A, std::move(w2), k - 1, t.c, out);
    }
}

std::vector<std::pair<MilnorMonomial, GElem>> right_coaction(const MilnorMonomial& m, const Fragment& A) {
    const bool a1 = A.kind() == FragmentKind::A1Dual;
    // Terms (left monomial, right fragment index) of a generator coproduct.
    using Terms = std::vector<std::pair<MilnorMonomial, int>>;
    auto xi_pow = [](int i, int e) {
        MilnorMonomial x;
        if (i >= 1 && e > 0) x.set_xi(i, e);
        return x;
    };
    auto xi_terms = [&](int n) {
        Terms t{{xi_pow(n, 1), 0}};
        if (a1 && n >= 1) t.push_back({xi_pow(n - 1, 2), kXi1});
        return t;
    };
    auto tau_terms = [&](int n) {
        MilnorMonomial tn;
        tn.tauOcc = 1u << n;
        Terms t{{tn, 0}, {xi_pow(n, 1), kTau0}};
        if (a1 && n >= 1) t.push_back({xi_pow(n - 1, 2), kTau1});
        return t;
    };
    auto mono_mul = [](const MilnorMonomial& a, const MilnorMonomial& b) {
        if (a.tauOcc & b.tauOcc) throw std::logic_error("right_coaction: taubar collision");
        MilnorMonomial r;
        r.tauOcc = a.tauOcc | b.tauOcc;
        r.xi.assign(std::max(a.xi.size(), b.xi.size()), 0);
        for (std::size_t i = 0; i < r.xi.size(); ++i)
            r.xi[i] = (i < a.xi.size() ? a.xi[i] : 0) + (i < b.xi.size() ? b.xi[i] : 0);
        r.trim();
        return r;
    };

    std::map<MilnorMonomial, GElem> acc;
    acc[MilnorMonomial{}] = GElem{{{}, 0}};
    auto apply = [&](const Terms& terms) {
        std::map<MilnorMonomial, GElem> next;
        for (const auto& [L, R] : acc)
            for (const auto& [l, r] : terms) {
                GElem prod = A.multiply(R, {{{}, r}});
                if (prod.empty()) continue;
                auto& slot = next[mono_mul(L, l)];
                slot.insert(slot.end(), prod.begin(), prod.end());
            }
        acc.clear();
        for (auto& [k, v] : next) {
            canonicalize(v);
            if (!v.empty()) acc.emplace(k, std::move(v));
        }
    };
    for (int i = 1; i <= static_cast<int>(m.xi.size()); ++i)
        for (int e = 0; e < m.xi_exp(i); ++e) apply(xi_terms(i));
    for (int i = 0; i < 32; ++i)
        if (m.tauOcc >> i & 1u) apply(tau_terms(i));

    std::vector<std::pair<MilnorMonomial, GElem>> out(acc.begin(), acc.end());
    for (auto& [L, R] : out) L.coeff = m.coeff;
    return out;
}

}  // namespace mot
