#include "motivic/cobar.hpp"

#include <sstream>
#include <stdexcept>

#include "motivic/chart.hpp"

namespace mot {

CobarComplex::CobarComplex(const Comodule& M) : M_(M), A_(M.algebra()) {}

BiDegree CobarComplex::internal_degree(const Word& w) const {
    BiDegree d = w.c.degree() + M_.gen(w.gen).deg;
    for (auto m : w.m) d = d + A_.degree(m);
    return d;
}

const std::vector<Word>& CobarComplex::basis(int f, BiDegree I) const {
    auto key = std::make_tuple(f, I.s, I.w);
    if (auto it = bases_.find(key); it != bases_.end()) return it->second;
    int maxstem = 0;
    for (int m = 1; m < A_.size(); ++m) maxstem = std::max(maxstem, A_.degree(m).s);
    std::vector<Word> out;
    Word w;
    w.m.assign(static_cast<std::size_t>(f), 0);
    // Factor stems must add up to T or T + 1 (coefficients have stem 0 or -1).
    auto rec = [&](auto&& self, int k, BiDegree acc, int T) -> void {
        const int left = f - k;
        if (acc.s + left > T + 1 || acc.s + left * maxstem < T) return;
        if (k == f) {
            for (const auto& c : m2_basis(I - acc - M_.gen(w.gen).deg, M_.field())) {
                w.c = c;
                out.push_back(w);
            }
            return;
        }
        for (int m = 1; m < A_.size(); ++m) {
            w.m[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(m);
            self(self, k + 1, acc + A_.degree(m), T);
        }
    };
    for (int g = 0; g < M_.size(); ++g) {
        w.gen = g;
        rec(rec, 0, BiDegree{}, I.s - M_.gen(g).deg.s);
    }
    std::sort(out.begin(), out.end());
    auto& idx = index_[key];
    for (std::size_t i = 0; i < out.size(); ++i) idx.emplace(out[i], static_cast<int>(i));
    return bases_.emplace(key, std::move(out)).first->second;
}

WordSum CobarComplex::differential(const Word& x) const {
    WordSum out;
    const std::size_t f = x.m.size();
    {
        Word w{CoeffMonomial{}, {}, x.gen};
        w.m.push_back(0);
        w.m.insert(w.m.end(), x.m.begin(), x.m.end());
        push_coeff(A_, std::move(w), 1, x.c, out);
    }
    for (std::size_t i = 0; i < f; ++i)
        for (const auto& t : A_.coproduct(x.m[i])) {
            Word w{x.c, {}, x.gen};
            w.m.assign(x.m.begin(), x.m.begin() + static_cast<long>(i));
            w.m.push_back(static_cast<std::uint8_t>(t.l));
            w.m.push_back(static_cast<std::uint8_t>(t.r));
            w.m.insert(w.m.end(), x.m.begin() + static_cast<long>(i) + 1, x.m.end());
            push_coeff(A_, std::move(w), i, t.c, out);
        }
    for (const auto& t : M_.coaction(x.gen)) {
        Word w{x.c, x.m, t.gen};
        w.m.push_back(static_cast<std::uint8_t>(t.mono));
        push_coeff(A_, std::move(w), f, t.c, out);
    }
    std::erase_if(out, [](const Word& w) { return std::find(w.m.begin(), w.m.end(), 0) != w.m.end(); });
    canonicalize(out);
    return out;
}

WordSum CobarComplex::differential(const WordSum& x) const {
    WordSum out;
    for (const auto& w : x) {
        auto d = differential(w);
        out.insert(out.end(), d.begin(), d.end());
    }
    canonicalize(out);
    return out;
}

f2::BitVec CobarComplex::to_vec(int f, BiDegree I, const WordSum& x) const {
    const auto& B = basis(f, I);
    const auto& idx = index_.at(std::make_tuple(f, I.s, I.w));
    f2::BitVec v(B.size());
    for (const auto& w : x) {
        auto it = idx.find(w);
        if (it == idx.end()) throw std::logic_error("cobar word outside its degree basis");
        v.flip(static_cast<std::size_t>(it->second));
    }
    return v;
}

WordSum CobarComplex::from_vec(int f, BiDegree I, const f2::BitVec& v) const {
    const auto& B = basis(f, I);
    WordSum out;
    for (auto i : v.ones()) out.push_back(B[i]);
    return out;
}

std::vector<f2::BitVec> CobarComplex::matrix(int f, BiDegree I) const {
    const auto& B = basis(f, I);
    basis(f + 1, I);
    std::vector<f2::BitVec> cols;
    cols.reserve(B.size());
    for (const auto& w : B) cols.push_back(to_vec(f + 1, I, differential(w)));
    return cols;
}

const CobarComplex::Cohomology& CobarComplex::cohomology(TriDegree d) const {
    if (auto it = groups_.find(d); it != groups_.end()) return it->second;
    const BiDegree I = d.internal();
    const std::size_t n = basis(d.f, I).size();
    auto ki = f2::kernel_image(matrix(d.f, I), basis(d.f + 1, I).size());
    std::vector<f2::BitVec> bounds;
    if (d.f > 0) {
        auto prev = matrix(d.f - 1, I);
        auto kp = f2::kernel_image(prev, n);
        bounds = kp.image.rows();
    }
    f2::Echelon e(n);
    for (const auto& b : bounds) e.insert(b);
    std::vector<f2::BitVec> reps;
    for (const auto& z : ki.kernel)
        if (e.insert(z)) reps.push_back(z);
    Cohomology h;
    h.span = f2::Echelon(n, true, reps.size());
    for (const auto& b : bounds) h.span.insert(b, f2::BitVec(reps.size()));
    for (std::size_t i = 0; i < reps.size(); ++i) {
        f2::BitVec tag(reps.size());
        tag.set(i);
        h.span.insert(reps[i], tag);
        h.reps.push_back(from_vec(d.f, I, reps[i]));
    }
    return groups_.emplace(d, std::move(h)).first->second;
}

int CobarComplex::dim(TriDegree d) const { return static_cast<int>(cohomology(d).reps.size()); }

std::vector<WordSum> CobarComplex::representatives(TriDegree d) const { return cohomology(d).reps; }

std::optional<f2::BitVec> CobarComplex::coords(TriDegree d, const WordSum& z) const {
    const auto& h = cohomology(d);
    f2::BitVec v = to_vec(d.f, d.internal(), z), combo(h.reps.size());
    h.span.reduce(v, &combo);
    if (v.any()) return std::nullopt;
    return combo;
}

std::optional<WordSum> CobarComplex::bound(TriDegree d, const WordSum& x) const {
    if (d.f == 0) return x.empty() ? std::optional<WordSum>(WordSum{}) : std::nullopt;
    const BiDegree I = d.internal();
    auto sol = f2::solve(matrix(d.f - 1, I), to_vec(d.f, I, x));
    if (!sol) return std::nullopt;
    return from_vec(d.f - 1, I, *sol);
}

WordSum juxtapose(const Fragment& A, const WordSum& x, const WordSum& y) {
    WordSum out;
    for (const auto& a : x)
        for (const auto& b : y) {
            Word w{a.c, a.m, b.gen};
            w.m.insert(w.m.end(), b.m.begin(), b.m.end());
            push_coeff(A, std::move(w), a.m.size(), b.c, out);
        }
    canonicalize(out);
    return out;
}

MasseyResult massey_product(const CobarComplex& C, TriDegree dx, const WordSum& x, TriDegree dy, const WordSum& y,
                            TriDegree dz, const WordSum& z) {
    const Fragment& A = C.algebra();
    const TriDegree shift{1, -1, 0};
    MasseyResult r;
    r.degree = dx + dy + dz + shift;
    auto u = C.bound(dx + dy, juxtapose(A, x, y));
    auto v = C.bound(dy + dz, juxtapose(A, y, z));
    if (!u || !v) return r;
    r.defined = true;
    WordSum val = juxtapose(A, *u, z);
    for (auto& w : juxtapose(A, x, *v)) val.push_back(w);
    canonicalize(val);
    auto c = C.coords(r.degree, val);
    if (!c) throw std::logic_error("Massey product representative is not a cocycle");
    r.value = *c;
    r.target_dim = C.dim(r.degree);
    f2::Echelon ind(static_cast<std::size_t>(r.target_dim));
    for (const auto& h : C.representatives(dy + dz + shift))
        ind.insert(*C.coords(r.degree, juxtapose(A, x, h)));
    for (const auto& h : C.representatives(dx + dy + shift))
        ind.insert(*C.coords(r.degree, juxtapose(A, h, z)));
    r.indeterminacy = static_cast<int>(ind.rank());
    r.indeterminacy_basis = ind.rows();
    r.value_in_indeterminacy = ind.contains(r.value);
    return r;
}

namespace {

int fragment_index(const Fragment& A, BiDegree d) {
    for (int m = 1; m < A.size(); ++m)
        if (A.degree(m) == d) return m;
    return -1;
}

}  // namespace

std::optional<WordSum> cobar_cocycle(const CobarComplex& C, const std::string& label) {
    const Fragment& A = C.algebra();
    const BaseField& F = C.comodule().field();
    WordSum acc{Word{CoeffMonomial{}, {}, 0}};
    std::istringstream in(label);
    for (std::string tok; in >> tok;) {
        if (tok == "1") continue;
        int e = 1;
        if (auto k = tok.find('^'); k != std::string::npos) {
            e = std::stoi(tok.substr(k + 1));
            tok = tok.substr(0, k);
        }
        WordSum factor;
        if (tok == "u" || tok == "rho") {
            factor = {Word{CoeffMonomial{0, 1}, {}, 0}};
        } else if (tok == "tau" && F.kind != FieldKind::QThree) {
            factor = {Word{CoeffMonomial{1, 0}, {}, 0}};
        } else if (tok == "tau2") {
            factor = {Word{CoeffMonomial{2, 0}, {}, 0}};
        } else if (tok == "rhotau") {
            factor = {Word{CoeffMonomial{1, 1}, {}, 0}};
        } else if (tok == "h0" || tok == "h1") {
            const int m = fragment_index(A, tok == "h0" ? BiDegree{1, 0} : BiDegree{2, 1});
            if (m < 0) return std::nullopt;
            factor = {Word{CoeffMonomial{}, {static_cast<std::uint8_t>(m)}, 0}};
        } else {
            static const std::map<std::string, TriDegree> other = {
                {"tauh1", {1, 1, 0}}, {"a", {4, 3, 2}}, {"b", {8, 4, 4}}};
            auto it = other.find(tok);
            if (it == other.end() || C.dim(it->second) != 1) return std::nullopt;
            factor = C.representatives(it->second).front();
        }
        for (int i = 0; i < e; ++i) acc = juxtapose(A, factor, acc);
    }
    return acc;
}

MasseyTriple massey_triple(const CobarComplex& C, const ExtChart& R, TriDegree dx, const std::string& x,
                           TriDegree dy, const std::string& y, TriDegree dz, const std::string& z) {
    auto cx = cobar_cocycle(C, x), cy = cobar_cocycle(C, y), cz = cobar_cocycle(C, z);
    if (!cx || !cy || !cz) throw std::invalid_argument("no cobar cocycle for a Massey factor");
    auto r = massey_product(C, dx, *cx, dy, *cy, dz, *cz);
    if (!r.defined)
        throw std::domain_error("Massey product <" + x + ", " + y + ", " + z + "> is not defined");
    MasseyTriple out;
    out.degree = r.degree;
    const auto labels = R.classes.count(r.degree) ? R.classes.at(r.degree) : std::vector<std::string>{};
    const std::size_t n = labels.size();
    if (static_cast<int>(n) != r.target_dim)
        throw std::logic_error("chart and cobar disagree in " + r.degree.str());
    // Cobar coordinates of each chart basis class, then invert.
    f2::Echelon basis(n, true, n);
    if (n == 1) {
        f2::BitVec one(1);
        one.set(0);
        basis.insert(one, one);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            auto w = cobar_cocycle(C, labels[i]);
            if (!w) throw std::invalid_argument("no cobar cocycle for " + labels[i]);
            auto c = C.coords(r.degree, *w);
            if (!c) throw std::logic_error("label " + labels[i] + " is not a cocycle");
            f2::BitVec tag(n);
            tag.set(i);
            basis.insert(*c, tag);
        }
    }
    auto to_chart = [&](f2::BitVec v) {
        f2::BitVec c(n);
        basis.reduce(v, &c);
        if (v.any()) throw std::logic_error("chart labels do not span " + r.degree.str());
        return c;
    };
    out.value = to_chart(r.value);
    f2::Echelon ind(n);
    for (const auto& v : r.indeterminacy_basis) {
        auto c = to_chart(v);
        out.indeterminacy.push_back(c);
        ind.insert(c);
    }
    out.indeterminacy_dim = static_cast<int>(ind.rank());
    return out;
}

}  // namespace mot
