#include "motivic/dual_algebra.hpp"

#include <memory>
#include <tuple>

namespace mot {

namespace {

// Coefficient of theta_mu in x * eta_R(c), as a key, or -1.
int coef_in_times_right_unit(const Fragment& A, int x, CoeffMonomial c, int mu) {
    int parity = 0, key = -1;
    for (const auto& t : A.times_right_unit(x, c))
        if (t.m == mu) {
            parity ^= 1;
            key = t.c.key();
        }
    return parity ? key : -1;
}

}  // namespace

const std::vector<ThetaTerm>& DualAlgebra::product(int mu, int cprime, int nu) const {
    const long long key = (static_cast<long long>(cprime) * 8 + mu) * 8 + nu;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = prod_.find(key);
    if (it != prod_.end()) return it->second;
    std::vector<ThetaTerm> out;
    const CoeffMonomial cp = CoeffMonomial::from_key(cprime);
    for (int lambda = 0; lambda < A_.size(); ++lambda) {
        int parity = 0, ckey = -1;
        for (const auto& t : A_.coproduct(lambda)) {
            if (t.r != nu) continue;
            int k = coef_in_times_right_unit(A_, t.l, cp, mu);
            if (k < 0) continue;
            auto c = multiply_coeff(t.c, CoeffMonomial::from_key(k));
            if (!c) continue;
            parity ^= 1;
            ckey = c->key();
        }
        if (parity) out.push_back({ckey, lambda});
    }
    return prod_.emplace(key, std::move(out)).first->second;
}

int DualAlgebra::act_on_coeff(int c, int mu, int a) const {
    const long long key = (static_cast<long long>(a) * 8 + mu) * 100000 + c;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = coeff_.find(key);
        if (it != coeff_.end()) return it->second;
    }
    int k = coef_in_times_right_unit(A_, 0, CoeffMonomial::from_key(a), mu);
    int out = -1;
    if (k >= 0)
        if (auto r = multiply_coeff(CoeffMonomial::from_key(c), CoeffMonomial::from_key(k))) out = r->key();
    std::lock_guard<std::mutex> lock(mu_);
    coeff_.emplace(key, out);
    return out;
}

const DualAlgebra& dual_algebra(FragmentKind kind, const BaseField& F) {
    static std::mutex m;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<DualAlgebra>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_tuple(static_cast<int>(kind), static_cast<int>(F.kind), F.q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<DualAlgebra>(Fragment::get(kind, F))).first;
    return *it->second;
}

DualModule::DualModule(const Comodule& M) : M_(M), A_(M.algebra()) {
    into_.resize(static_cast<std::size_t>(M.size()));
    for (int h = 0; h < M.size(); ++h)
        for (const auto& t : M.coaction(h)) into_[static_cast<std::size_t>(t.gen)].emplace_back(h, t.c, t.mono);
}

const std::vector<std::pair<int, int>>& DualModule::act(int mu, int a, int g) const {
    const long long key = (static_cast<long long>(a) * 8 + mu) * 1000000 + g;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::map<int, std::pair<int, int>> acc;  // h -> (parity, key)
    const CoeffMonomial ca = CoeffMonomial::from_key(a);
    for (const auto& [h, e, lambda] : into_[static_cast<std::size_t>(g)]) {
        int k = coef_in_times_right_unit(A_, lambda, ca, mu);
        if (k < 0) continue;
        auto c = multiply_coeff(e, CoeffMonomial::from_key(k));
        if (!c) continue;
        auto& slot = acc[h];
        slot.first ^= 1;
        slot.second = c->key();
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& [h, v] : acc)
        if (v.first) out.emplace_back(v.second, h);
    return memo_.emplace(key, std::move(out)).first->second;
}

}  // namespace mot
