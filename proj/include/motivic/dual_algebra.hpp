// The algebra dual to A(n)^dual over M2 and its modules.
//
// Elements are sums of c * theta_mu, theta_mu dual to the fragment monomial
// mu and c in M2. Everything is graded by codegree (cohomological degree),
// where theta_mu sits in the homological degree of mu and a coefficient c
// sits in c.codegree(). All nonzero elements other than multiples of the
// unit have codegree with t + w > 0, which makes the algebra connected for
// the order (t + w, t).
#pragma once

#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "motivic/comodule.hpp"

namespace mot {

// coefficient key, fragment index
struct ThetaTerm {
    int c = 0;
    int mu = 0;
};

class DualAlgebra {
public:
    explicit DualAlgebra(const Fragment& A) : A_(A) {}

    const Fragment& fragment() const { return A_; }
    int size() const { return A_.size(); }
    BiDegree codegree(int mu) const { return A_.degree(mu); }

    // theta_mu * (c' theta_nu) = sum_lambda c_lambda theta_lambda, returned as
    // (c_lambda key, lambda).
    const std::vector<ThetaTerm>& product(int mu, int cprime, int nu) const;
    // (c theta_mu) acting on a in M2 (the trivial module); -1 when zero.
    int act_on_coeff(int c, int mu, int a) const;

private:
    const Fragment& A_;
    mutable std::mutex mu_;
    mutable std::unordered_map<long long, std::vector<ThetaTerm>> prod_;
    mutable std::unordered_map<long long, int> coeff_;
};

const DualAlgebra& dual_algebra(FragmentKind kind, const BaseField& F);

// The dual M^* = Hom_M2(M, M2) of a comodule as a module over the dual
// algebra, with basis a * g^*.
class DualModule {
public:
    explicit DualModule(const Comodule& M);
    const Comodule& comodule() const { return M_; }
    // theta_mu * (a g^*) = sum_h c_h h^*, returned as (c_h key, h).
    const std::vector<std::pair<int, int>>& act(int mu, int a, int g) const;

private:
    const Comodule& M_;
    const Fragment& A_;
    // transpose of the coaction: for g, the terms (h, e, lambda) of psi(h) hitting g
    std::vector<std::vector<std::tuple<int, CoeffMonomial, int>>> into_;
    mutable std::mutex mu_;
    mutable std::unordered_map<long long, std::vector<std::pair<int, int>>> memo_;
};

}  // namespace mot
