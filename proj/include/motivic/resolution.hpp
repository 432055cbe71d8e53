// Minimal free resolutions over the dual algebra and the Hom complex into M2.
//
// For a comodule M the dual M^* is resolved by free modules
//   ... -> P_1 -> P_0 -> M^*
// degree by degree in the order (t + w, t) of codegrees. Ext_Gamma(M2, M)
// is the cohomology of Hom(P_*, M2); it is not read off from generator
// counts because the coefficient ring acts nontrivially on M2.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "motivic/dual_algebra.hpp"
#include "motivic/f2.hpp"

namespace mot {

// c * theta_mu * x. In M^* the term is c * g^* with mu = 0.
struct FreeTerm {
    int c = 0;
    int mu = 0;
    int gen = 0;
    auto key() const { return std::make_tuple(gen, mu, c); }
    bool operator<(const FreeTerm& o) const { return key() < o.key(); }
    bool operator==(const FreeTerm& o) const { return key() == o.key(); }
};
using FreeElem = std::vector<FreeTerm>;

struct ResolutionGen {
    BiDegree deg;  // codegree
    FreeElem d;    // image in P_{f-1}, or in M^* for f = 0
};

struct ResolutionLimits {
    int fmax = 0;  // highest homological degree resolved
    int tmax = 0;  // codegree stem bound
    int wmax = 0;  // codegree weight bound
    bool operator==(const ResolutionLimits&) const = default;
};

// F2 basis of one degree of P_f (or of M^* for f = -1).
struct DegreeBasis {
    std::vector<FreeTerm> elems;
    std::unordered_map<long long, int> index;  // gen * 8 + mu
    int find(int gen, int mu) const {
        auto it = index.find(static_cast<long long>(gen) * 8 + mu);
        return it == index.end() ? -1 : it->second;
    }
    std::size_t size() const { return elems.size(); }
};

// Basis of Hom(P_f, M2) in one internal degree: generator and the
// coefficient it is sent to.
struct CochainBasis {
    std::vector<std::pair<int, int>> elems;  // (gen, coefficient key)
    std::unordered_map<int, int> index;      // gen -> position
    std::size_t size() const { return elems.size(); }
};

class Resolution {
public:
    Resolution(const Comodule& M, ResolutionLimits lim);
    // Restores a previously serialized resolution; throws if the stored
    // fingerprint does not match.
    Resolution(const Comodule& M, ResolutionLimits lim, const nlohmann::json& stored);

    const Comodule& comodule() const { return M_; }
    const DualAlgebra& algebra() const { return alg_; }
    const ResolutionLimits& limits() const { return lim_; }
    const BaseField& field() const { return M_.field(); }

    int num_gens(int f) const { return static_cast<int>(gens_[static_cast<std::size_t>(f)].size()); }
    const ResolutionGen& gen(int f, int i) const {
        return gens_[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)];
    }
    std::vector<int> gens_in_stem(int f, int t) const;

    DegreeBasis basis(int f, BiDegree D) const;
    FreeElem act(int c, int mu, const FreeElem& x, int f) const;
    FreeElem differential(int f, const FreeElem& x) const;
    f2::BitVec to_vec(const DegreeBasis& B, const FreeElem& x) const;
    FreeElem from_vec(const DegreeBasis& B, const f2::BitVec& v) const;
    // Some x in P_f of codegree D with d x = target, or nullopt.
    std::optional<FreeElem> preimage(int f, BiDegree D, const FreeElem& target) const;

    // Hom complex. Cochains of internal degree (t, w) send a generator of
    // codegree cd to the coefficient of codegree cd - (t, w).
    CochainBasis cochains(int f, BiDegree internal) const;
    // Columns: coboundaries of the basis of C^f inside C^{f+1}.
    std::vector<f2::BitVec> coboundary(int f, BiDegree internal) const;
    // Whether Ext^f in this internal degree is determined by the resolved range.
    bool covers(int f, BiDegree internal) const;

    nlohmann::json to_json() const;
    std::string fingerprint() const;
    static std::string fingerprint_of(const Comodule& M, ResolutionLimits lim);

private:
    void build();
    void check_weights() const;

    Comodule M_;
    ResolutionLimits lim_;
    const DualAlgebra& alg_;
    DualModule dual_;
    int max_mono_stem_ = 0;
    std::vector<std::vector<ResolutionGen>> gens_;
    std::vector<std::map<int, std::vector<int>>> by_stem_;

    struct Solver {
        DegreeBasis src, tgt;
        f2::Echelon ech;
    };
    mutable std::mutex solver_mu_;
    mutable std::map<std::tuple<int, int, int>, std::shared_ptr<Solver>> solvers_;
};

}  // namespace mot
