#include "motivic/resolution.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mot {

namespace {

f2::BitVec resized(const f2::BitVec& v, std::size_t n) {
    f2::BitVec out(n);
    for (auto i : v.ones()) out.set(i);
    return out;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

Resolution::Resolution(const Comodule& M, ResolutionLimits lim)
    : M_(M), lim_(lim), alg_(dual_algebra(M.kind(), M.field())), dual_(M_) {
    for (int mu = 0; mu < alg_.size(); ++mu) max_mono_stem_ = std::max(max_mono_stem_, alg_.codegree(mu).s);
    gens_.resize(static_cast<std::size_t>(lim.fmax + 1));
    by_stem_.resize(gens_.size());
    build();
    check_weights();
}

Resolution::Resolution(const Comodule& M, ResolutionLimits lim, const nlohmann::json& stored)
    : M_(M), lim_(lim), alg_(dual_algebra(M.kind(), M.field())), dual_(M_) {
    for (int mu = 0; mu < alg_.size(); ++mu) max_mono_stem_ = std::max(max_mono_stem_, alg_.codegree(mu).s);
    if (stored.at("fingerprint").get<std::string>() != fingerprint())
        throw std::runtime_error("resolution cache fingerprint mismatch");
    gens_.resize(static_cast<std::size_t>(lim.fmax + 1));
    by_stem_.resize(gens_.size());
    const auto& gs = stored.at("generators");
    for (std::size_t f = 0; f < gens_.size(); ++f)
        for (const auto& g : gs.at(f)) {
            ResolutionGen r;
            r.deg = {g.at("t").get<int>(), g.at("w").get<int>()};
            for (const auto& t : g.at("d")) r.d.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
            by_stem_[f][r.deg.s].push_back(static_cast<int>(gens_[f].size()));
            gens_[f].push_back(std::move(r));
        }
}

std::vector<int> Resolution::gens_in_stem(int f, int t) const {
    if (f < 0 || f > lim_.fmax) return {};
    const auto& m = by_stem_[static_cast<std::size_t>(f)];
    auto it = m.find(t);
    return it == m.end() ? std::vector<int>{} : it->second;
}

DegreeBasis Resolution::basis(int f, BiDegree D) const {
    DegreeBasis B;
    const BaseField& F = field();
    if (f < 0) {
        for (int g = 0; g < M_.size(); ++g)
            if (auto c = coeff_with_codegree(D - M_.gen(g).deg, F)) B.elems.push_back({c->key(), 0, g});
    } else {
        for (int t = D.s - max_mono_stem_ - 1; t <= D.s; ++t)
            for (int x : gens_in_stem(f, t)) {
                const BiDegree dx = gen(f, x).deg;
                for (int mu = 0; mu < alg_.size(); ++mu)
                    if (auto c = coeff_with_codegree(D - dx - alg_.codegree(mu), F))
                        B.elems.push_back({c->key(), mu, x});
            }
        std::sort(B.elems.begin(), B.elems.end());
    }
    for (std::size_t i = 0; i < B.elems.size(); ++i)
        B.index.emplace(static_cast<long long>(B.elems[i].gen) * 8 + B.elems[i].mu, static_cast<int>(i));
    return B;
}

FreeElem Resolution::act(int c, int mu, const FreeElem& x, int f) const {
    FreeElem out;
    const CoeffMonomial cc = CoeffMonomial::from_key(c);
    for (const auto& t : x) {
        if (f < 0) {
            for (const auto& [ch, h] : dual_.act(mu, t.c, t.gen))
                if (auto r = multiply_coeff(cc, CoeffMonomial::from_key(ch))) out.push_back({r->key(), 0, h});
        } else {
            for (const auto& p : alg_.product(mu, t.c, t.mu))
                if (auto r = multiply_coeff(cc, CoeffMonomial::from_key(p.c))) out.push_back({r->key(), p.mu, t.gen});
        }
    }
    canonicalize(out);
    return out;
}

FreeElem Resolution::differential(int f, const FreeElem& x) const {
    FreeElem out;
    for (const auto& t : x) {
        auto part = act(t.c, t.mu, gen(f, t.gen).d, f - 1);
        out.insert(out.end(), part.begin(), part.end());
    }
    canonicalize(out);
    return out;
}

f2::BitVec Resolution::to_vec(const DegreeBasis& B, const FreeElem& x) const {
    f2::BitVec v(B.size());
    for (const auto& t : x) {
        int i = B.find(t.gen, t.mu);
        if (i < 0 || B.elems[static_cast<std::size_t>(i)].c != t.c)
            throw std::logic_error("element outside the degree basis");
        v.flip(static_cast<std::size_t>(i));
    }
    return v;
}

FreeElem Resolution::from_vec(const DegreeBasis& B, const f2::BitVec& v) const {
    FreeElem out;
    for (auto i : v.ones()) out.push_back(B.elems[i]);
    return out;
}

void Resolution::build() {
    int tmin = 0, wmin = 0;
    for (const auto& g : M_.gens()) {
        tmin = std::min(tmin, g.deg.s);
        wmin = std::min(wmin, g.deg.w);
    }
    std::vector<BiDegree> degrees;
    for (int t = tmin; t <= lim_.tmax; ++t)
        for (int w = wmin; w <= lim_.wmax; ++w) degrees.push_back({t, w});
    std::sort(degrees.begin(), degrees.end(), [](BiDegree a, BiDegree b) {
        if (a.s + a.w != b.s + b.w) return a.s + a.w < b.s + b.w;
        return a.s < b.s;
    });

    for (BiDegree D : degrees) {
        DegreeBasis T = basis(-1, D);
        std::vector<f2::BitVec> pending;  // kernel of the previous map, to be covered
        for (std::size_t i = 0; i < T.size(); ++i) {
            f2::BitVec e(T.size());
            e.set(i);
            pending.push_back(std::move(e));
        }
        for (int f = 0; f <= lim_.fmax; ++f) {
            DegreeBasis B = basis(f, D);
            if (B.size() == 0 && pending.empty()) {
                T = std::move(B);
                continue;
            }
            std::vector<f2::BitVec> cols;
            cols.reserve(B.size());
            for (const auto& e : B.elems) cols.push_back(to_vec(T, act(e.c, e.mu, gen(f, e.gen).d, f - 1)));
            auto ki = f2::kernel_image(cols, T.size());
            bool added = false;
            for (auto& v : pending) {
                if (ki.image.contains(v)) continue;
                ki.image.insert(v);
                ResolutionGen g{D, from_vec(T, v)};
                by_stem_[static_cast<std::size_t>(f)][D.s].push_back(num_gens(f));
                gens_[static_cast<std::size_t>(f)].push_back(std::move(g));
                added = true;
            }
            if (f == lim_.fmax) break;
            DegreeBasis nb = added ? basis(f, D) : std::move(B);
            pending.clear();
            for (auto& k : ki.kernel) pending.push_back(resized(k, nb.size()));
            T = std::move(nb);
        }
    }
}

void Resolution::check_weights() const {
    // Generators sit in weights at most (stem + slack) with slack set by M;
    // the resolved weight range must leave visible room above that line.
    int slack = 0;
    for (const auto& g : M_.gens()) slack = std::max(slack, g.deg.w - g.deg.s);
    for (int f = 0; f <= lim_.fmax; ++f)
        for (const auto& g : gens_[static_cast<std::size_t>(f)])
            if (g.deg.w - g.deg.s > slack)
                throw std::runtime_error("resolution generator above the expected weight line");
    if (lim_.wmax < lim_.tmax + slack + 1)
        throw std::invalid_argument("resolution weight bound too small for the stem bound");
}

bool Resolution::covers(int f, BiDegree internal) const {
    return f >= 0 && f + 1 <= lim_.fmax && internal.s + 1 <= lim_.tmax;
}

CochainBasis Resolution::cochains(int f, BiDegree internal) const {
    CochainBasis C;
    for (int t = internal.s; t <= internal.s + 1; ++t)
        for (int x : gens_in_stem(f, t))
            if (auto c = coeff_with_codegree(gen(f, x).deg - internal, field())) {
                C.index.emplace(x, static_cast<int>(C.elems.size()));
                C.elems.emplace_back(x, c->key());
            }
    return C;
}

std::vector<f2::BitVec> Resolution::coboundary(int f, BiDegree internal) const {
    CochainBasis src = cochains(f, internal), tgt = cochains(f + 1, internal);
    std::vector<f2::BitVec> cols(src.size(), f2::BitVec(tgt.size()));
    for (std::size_t r = 0; r < tgt.size(); ++r) {
        const auto [y, cy] = tgt.elems[r];
        for (const auto& t : gen(f + 1, y).d) {
            auto it = src.index.find(t.gen);
            if (it == src.index.end()) continue;
            int v = alg_.act_on_coeff(t.c, t.mu, src.elems[static_cast<std::size_t>(it->second)].second);
            if (v < 0) continue;
            if (v != cy) throw std::logic_error("coboundary degree mismatch");
            cols[static_cast<std::size_t>(it->second)].flip(r);
        }
    }
    return cols;
}

std::optional<FreeElem> Resolution::preimage(int f, BiDegree D, const FreeElem& target) const {
    std::shared_ptr<Solver> S;
    {
        std::lock_guard<std::mutex> lock(solver_mu_);
        auto key = std::make_tuple(f, D.s, D.w);
        auto it = solvers_.find(key);
        if (it == solvers_.end()) {
            auto s = std::make_shared<Solver>();
            s->src = basis(f, D);
            s->tgt = basis(f - 1, D);
            s->ech = f2::Echelon(s->tgt.size(), true, s->src.size());
            for (std::size_t i = 0; i < s->src.size(); ++i) {
                const auto& e = s->src.elems[i];
                f2::BitVec tag(s->src.size());
                tag.set(i);
                s->ech.insert(to_vec(s->tgt, act(e.c, e.mu, gen(f, e.gen).d, f - 1)), tag);
            }
            it = solvers_.emplace(key, s).first;
        }
        S = it->second;
    }
    f2::BitVec b = to_vec(S->tgt, target);
    f2::BitVec combo(S->src.size());
    S->ech.reduce(b, &combo);
    if (b.any()) return std::nullopt;
    return from_vec(S->src, combo);
}

nlohmann::json Resolution::to_json() const {
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& level : gens_) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& g : level) {
            nlohmann::json d = nlohmann::json::array();
            for (const auto& t : g.d) d.push_back({t.c, t.mu, t.gen});
            arr.push_back({{"t", g.deg.s}, {"w", g.deg.w}, {"d", d}});
        }
        gs.push_back(std::move(arr));
    }
    return {{"schema", "motivic-resolution"},
            {"version", 1},
            {"fingerprint", fingerprint()},
            {"limits", {lim_.fmax, lim_.tmax, lim_.wmax}},
            {"generators", gs}};
}

std::string Resolution::fingerprint_of(const Comodule& M, ResolutionLimits lim) {
    nlohmann::json j = {{"comodule", M.to_json()}, {"limits", {lim.fmax, lim.tmax, lim.wmax}}};
    return fnv1a_hex(j.dump());
}

std::string Resolution::fingerprint() const { return fingerprint_of(M_, lim_); }

}  // namespace mot
