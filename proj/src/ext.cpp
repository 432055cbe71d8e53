#include "motivic/ext.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mot {

std::string TriDegree::str() const {
    return "(" + std::to_string(s) + "," + std::to_string(f) + "," + std::to_string(w) + ")";
}

ExtGroup::ExtGroup(TriDegree d, CochainBasis basis, const std::vector<f2::BitVec>& boundaries,
                   const std::vector<f2::BitVec>& cocycles)
    : deg_(d), basis_(std::move(basis)), boundaries_(basis_.size()) {
    for (const auto& b : boundaries) boundaries_.insert(b);
    f2::Echelon e = boundaries_;
    for (const auto& z : cocycles)
        if (e.insert(z)) reps_.push_back(z);
    span_ = f2::Echelon(basis_.size(), true, reps_.size());
    for (const auto& b : boundaries) span_.insert(b, f2::BitVec(reps_.size()));
    for (std::size_t i = 0; i < reps_.size(); ++i) {
        f2::BitVec tag(reps_.size());
        tag.set(i);
        span_.insert(reps_[i], tag);
    }
}

f2::BitVec ExtGroup::rep_of(const f2::BitVec& coords) const {
    f2::BitVec out(basis_.size());
    for (auto i : coords.ones()) out ^= reps_[i];
    return out;
}

f2::BitVec ExtGroup::coords(const f2::BitVec& cocycle) const {
    f2::BitVec v = cocycle, combo(reps_.size());
    span_.reduce(v, &combo);
    if (v.any()) throw std::logic_error("not a cocycle in " + deg_.str());
    return combo;
}

bool ExtGroup::is_boundary(const f2::BitVec& cocycle) const { return boundaries_.contains(cocycle); }

// ---------------------------------------------------------------------------

ChainLift::ChainLift(const ExtEngine& module, const ExtEngine& ring, TriDegree deg, const f2::BitVec& cocycle)
    : M_(module), R_(ring), deg_(deg) {
    const auto& C = module.group(deg).cochains();
    for (auto i : cocycle.ones()) phi_[C.elems[i].first] = C.elems[i].second;
}

const FreeElem& ChainLift::lift(int j, int z) {
    if (static_cast<int>(X_.size()) <= j) X_.resize(static_cast<std::size_t>(j + 1));
    auto& memo = X_[static_cast<std::size_t>(j)];
    if (auto it = memo.find(z); it != memo.end()) return it->second;
    const Resolution& P = M_.resolution();
    const Resolution& Q = R_.resolution();
    const BiDegree D = P.gen(deg_.f + j, z).deg - deg_.internal();
    FreeElem target;
    if (j == 0) {
        if (auto it = phi_.find(z); it != phi_.end()) target.push_back({it->second, 0, 0});
    } else {
        for (const auto& t : P.gen(deg_.f + j, z).d) {
            FreeElem below = lift(j - 1, t.gen);
            auto part = Q.act(t.c, t.mu, below, j - 1);
            target.insert(target.end(), part.begin(), part.end());
        }
        canonicalize(target);
    }
    FreeElem x;
    if (!target.empty()) {
        auto pre = Q.preimage(j, D, target);
        if (!pre) throw std::logic_error("chain map lift failed at " + deg_.str());
        x = std::move(*pre);
    }
    return X_[static_cast<std::size_t>(j)].emplace(z, std::move(x)).first->second;
}

f2::BitVec ChainLift::times(TriDegree ydeg, const f2::BitVec& ycocycle) {
    std::map<int, int> psi;
    {
        const auto& C = R_.group(ydeg).cochains();
        for (auto i : ycocycle.ones()) psi[C.elems[i].first] = C.elems[i].second;
    }
    const TriDegree pd = deg_ + ydeg;
    const auto& Cp = M_.group(pd).cochains();
    const DualAlgebra& alg = M_.resolution().algebra();
    f2::BitVec out(Cp.size());
    for (std::size_t i = 0; i < Cp.size(); ++i) {
        const auto [z, cz] = Cp.elems[i];
        int parity = 0;
        for (const auto& t : lift(ydeg.f, z)) {
            auto it = psi.find(t.gen);
            if (it == psi.end()) continue;
            int v = alg.act_on_coeff(t.c, t.mu, it->second);
            if (v < 0) continue;
            if (v != cz) throw std::logic_error("product degree mismatch");
            parity ^= 1;
        }
        if (parity) out.set(i);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

int weight_slack(const Comodule& M) {
    int slack = 0;
    for (const auto& g : M.gens()) slack = std::max(slack, g.deg.w - g.deg.s);
    return slack;
}

std::unique_ptr<Resolution> load_or_build(const Comodule& M, ResolutionLimits lim, const std::string& dir,
                                          bool& from_cache) {
    from_cache = false;
    if (dir.empty()) return std::make_unique<Resolution>(M, lim);
    namespace fs = std::filesystem;
    const fs::path path = fs::path(dir) / ("res-" + Resolution::fingerprint_of(M, lim) + ".json");
    if (fs::exists(path)) {
        try {
            std::ifstream in(path);
            auto j = nlohmann::json::parse(in);
            auto r = std::make_unique<Resolution>(M, lim, j);
            from_cache = true;
            return r;
        } catch (const std::exception&) {
            // unreadable or stale entries are rebuilt
        }
    }
    auto r = std::make_unique<Resolution>(M, lim);
    fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(r.get()));
    {
        std::ofstream out(tmp);
        out << r->to_json().dump();
    }
    fs::rename(tmp, path);
    return r;
}

}  // namespace

ExtEngine::ExtEngine(const Comodule& M, ResolutionLimits lim, const std::string& cache_dir)
    : res_(load_or_build(M, lim, cache_dir, from_cache_)) {}

ExtEngine::ExtEngine(const Comodule& M, int smax, int fmax, const std::string& cache_dir)
    : ExtEngine(M,
                ResolutionLimits{fmax + 1, smax + fmax + 1, smax + fmax + 1 + weight_slack(M) + 2},
                cache_dir) {}

const ExtGroup& ExtEngine::group(TriDegree d) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (auto it = groups_.find(d); it != groups_.end()) return *it->second;
    if (!covers(d)) throw std::out_of_range("tridegree " + d.str() + " outside the resolved range");
    const BiDegree I = d.internal();
    CochainBasis C = res_->cochains(d.f, I);
    std::vector<f2::BitVec> bound;
    if (d.f > 0) bound = res_->coboundary(d.f - 1, I);
    auto cob = res_->coboundary(d.f, I);
    auto ki = f2::kernel_image(cob, res_->cochains(d.f + 1, I).size());
    auto g = std::make_unique<ExtGroup>(d, std::move(C), bound, ki.kernel);
    return *groups_.emplace(d, std::move(g)).first->second;
}

f2::BitVec ExtEngine::multiply(const ExtEngine& ring, TriDegree ydeg, const f2::BitVec& y, TriDegree xdeg,
                               const f2::BitVec& x) const {
    const ExtGroup& gp = group(xdeg + ydeg);
    const ExtGroup& gx = group(xdeg);
    const ExtGroup& gy = ring.group(ydeg);
    if (x.none() || y.none()) return f2::BitVec(static_cast<std::size_t>(gp.dim()));
    ChainLift* L = nullptr;
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto key = std::make_pair(xdeg, x.str() + "@" + std::to_string(reinterpret_cast<std::uintptr_t>(&ring)));
        auto it = lifts_.find(key);
        if (it == lifts_.end())
            it = lifts_.emplace(key, std::make_unique<ChainLift>(*this, ring, xdeg, gx.rep_of(x))).first;
        L = it->second.get();
    }
    return gp.coords(L->times(ydeg, gy.rep_of(y)));
}

ResolutionLimits ring_limits_for(const ExtEngine&, int sy, int fy) {
    const int t = sy + fy + 2;
    return {fy + 1, t, t + 2};
}

// A named class is the only class of its tridegree when that group is a
// line. Otherwise (h0 next to u h1 in (0,1,0), for instance) it is the
// cochain sending the resolution generator of the given codegree to the
// given coefficient and nothing else.
std::vector<RingClass> named_ring_classes(const ExtEngine& ring) {
    const BaseField& F = ring.resolution().field();
    const bool a1 = ring.comodule().kind() == FragmentKind::A1Dual;
    struct Want {
        std::string name;
        TriDegree deg;
        BiDegree gen;
        CoeffMonomial c;
    };
    std::vector<Want> want = {{"h0", {0, 1, 0}, {1, 0}, {}}, {"tau2", {0, 0, -2}, {0, 0}, {2, 0}}};
    if (F.has_gen()) want.push_back({F.gen_name(), {-1, 0, -1}, {0, 0}, {0, 1}});
    if (F.kind == FieldKind::QThree)
        want.push_back({"rhotau", {-1, 0, -2}, {0, 0}, {1, 1}});
    else
        want.push_back({"tau", {0, 0, -1}, {0, 0}, {1, 0}});
    if (a1) {
        want.push_back({"h1", {1, 1, 1}, {2, 1}, {}});
        want.push_back({"tauh1", {1, 1, 0}, {2, 1}, {1, 0}});
        want.push_back({"a", {4, 3, 2}, {7, 2}, {}});
        want.push_back({"b", {8, 4, 4}, {12, 4}, {}});
    }
    const Resolution& Q = ring.resolution();
    std::vector<RingClass> out;
    for (const auto& w : want) {
        if (!ring.covers(w.deg)) continue;
        const ExtGroup& g = ring.group(w.deg);
        f2::BitVec cochain(g.cochains().size());
        int hits = 0;
        for (std::size_t i = 0; i < g.cochains().size(); ++i) {
            const auto [x, c] = g.cochains().elems[i];
            if (Q.gen(w.deg.f, x).deg == w.gen && c == w.c.key()) {
                cochain.set(i);
                ++hits;
            }
        }
        if (hits != 1) throw std::logic_error("ring class " + w.name + " has no unique dual generator");
        f2::BitVec coords(static_cast<std::size_t>(g.dim()));
        if (g.dim() == 1) {
            // Boundaries never take a unit value, so this evaluation is well defined.
            if (!(g.rep(0).get(cochain.first()))) throw std::logic_error("ring class " + w.name + " misidentified");
            coords.set(0);
        } else {
            coords = g.coords(cochain);
        }
        if (coords.none()) throw std::logic_error("ring class " + w.name + " is zero");
        out.push_back({w.name, w.deg, coords});
    }
    return out;
}

std::optional<RingClass> ring_class(const ExtEngine& ring, const std::string& name) {
    for (auto& r : named_ring_classes(ring))
        if (r.name == name) return r;
    return std::nullopt;
}

std::string default_cache_dir() {
    const char* env = std::getenv("MOTIVIC_CACHE_DIR");
    return env ? std::string(env) : std::string();
}

}  // namespace mot
