// Ext_Gamma(M2, M) for Gamma = A(0)^dual or A(1)^dual, graded by
// (stem s, filtration f, weight w), with the module structure over
// Ext_Gamma(M2, M2).
#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "motivic/resolution.hpp"

namespace mot {

struct TriDegree {
    int s = 0;
    int f = 0;
    int w = 0;
    auto operator<=>(const TriDegree&) const = default;
    TriDegree operator+(TriDegree o) const { return {s + o.s, f + o.f, w + o.w}; }
    TriDegree operator-(TriDegree o) const { return {s - o.s, f - o.f, w - o.w}; }
    BiDegree internal() const { return {s + f, w}; }
    std::string str() const;
};

struct ExtWindow {
    int smin = 0, smax = 0;
    int fmax = 0;
    int wmin = 0, wmax = 0;
    bool contains(TriDegree d) const {
        return d.s >= smin && d.s <= smax && d.f >= 0 && d.f <= fmax && d.w >= wmin && d.w <= wmax;
    }
};

// One tridegree: cocycle representatives of a basis, and coordinates.
class ExtGroup {
public:
    ExtGroup() = default;
    ExtGroup(TriDegree d, CochainBasis basis, const std::vector<f2::BitVec>& boundaries,
             const std::vector<f2::BitVec>& cocycles);
    TriDegree degree() const { return deg_; }
    int dim() const { return static_cast<int>(reps_.size()); }
    const CochainBasis& cochains() const { return basis_; }
    const f2::BitVec& rep(int i) const { return reps_[static_cast<std::size_t>(i)]; }
    f2::BitVec rep_of(const f2::BitVec& coords) const;
    // Coordinates of a cocycle; throws if it is not in cocycles + boundaries.
    f2::BitVec coords(const f2::BitVec& cocycle) const;
    bool is_boundary(const f2::BitVec& cocycle) const;

private:
    TriDegree deg_;
    CochainBasis basis_;
    std::vector<f2::BitVec> reps_;
    f2::Echelon boundaries_;
    f2::Echelon span_;  // boundaries then reps, tracked by rep
};

// A class of the coefficient ring Ext(M2, M2) in a named tridegree.
struct RingClass {
    std::string name;
    TriDegree deg;
    f2::BitVec coords;  // in the ring group at deg
};

class ExtEngine;

// A chain map P_{f+j} -> Q_j lifting one cocycle of P_f, built on demand.
class ChainLift {
public:
    ChainLift(const ExtEngine& module, const ExtEngine& ring, TriDegree deg, const f2::BitVec& cocycle);
    // Cocycle of y * x in the product tridegree (in its cochain basis).
    f2::BitVec times(TriDegree ydeg, const f2::BitVec& ycocycle);

private:
    const FreeElem& lift(int j, int z);
    const ExtEngine& M_;
    const ExtEngine& R_;
    TriDegree deg_;
    std::map<int, int> phi_;  // generator of P_f -> coefficient key
    std::vector<std::map<int, FreeElem>> X_;
};

class ExtEngine {
public:
    // Resolves M far enough for every tridegree with stem <= smax and
    // filtration <= fmax. A cache directory, when given, stores resolutions
    // by fingerprint.
    ExtEngine(const Comodule& M, int smax, int fmax, const std::string& cache_dir = "");
    ExtEngine(const Comodule& M, ResolutionLimits lim, const std::string& cache_dir = "");

    const Resolution& resolution() const { return *res_; }
    const Comodule& comodule() const { return res_->comodule(); }
    bool covers(TriDegree d) const { return res_->covers(d.f, d.internal()); }
    const ExtGroup& group(TriDegree d) const;
    int dim(TriDegree d) const { return group(d).dim(); }
    bool loaded_from_cache() const { return from_cache_; }

    // y * x with y in the ring engine's Ext(M2, M2); result in group(x + y).
    f2::BitVec multiply(const ExtEngine& ring, TriDegree ydeg, const f2::BitVec& y, TriDegree xdeg,
                        const f2::BitVec& x) const;

private:
    bool from_cache_ = false;  // set while res_ is initialized, so declared first
    std::unique_ptr<Resolution> res_;
    mutable std::recursive_mutex mu_;
    mutable std::map<TriDegree, std::unique_ptr<ExtGroup>> groups_;
    mutable std::map<std::pair<TriDegree, std::string>, std::unique_ptr<ChainLift>> lifts_;
};

// Resolution limits for the unit comodule that suffice to multiply classes
// of the module engine `m` by ring classes of filtration <= fy and stem <= sy.
ResolutionLimits ring_limits_for(const ExtEngine& m, int sy, int fy);

// Standard named classes of Ext(M2, M2) in the field class of the ring.
std::vector<RingClass> named_ring_classes(const ExtEngine& ring);
std::optional<RingClass> ring_class(const ExtEngine& ring, const std::string& name);

std::string default_cache_dir();

}  // namespace mot
