// Comodules over A(0)^dual and A(1)^dual that are free over M2 on a finite
// set of generators. Coactions are left coactions written
//   psi(g) = sum c * lambda (x) g'
// with c a left coefficient and lambda a fragment basis index.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "motivic/steenrod.hpp"

namespace mot {

struct CoactionTerm {
    CoeffMonomial c;
    int mono = 0;
    int gen = 0;
    auto key() const { return std::make_tuple(gen, mono, c.key()); }
    bool operator<(const CoactionTerm& o) const { return key() < o.key(); }
    bool operator==(const CoactionTerm& o) const { return key() == o.key(); }
};

struct ComoduleGenerator {
    std::string name;
    BiDegree deg;
    int weight = 0;  // Mahowald weight, informational
};

class Comodule {
public:
    Comodule() = default;
    Comodule(FragmentKind kind, BaseField F, std::string name);

    FragmentKind kind() const { return kind_; }
    const BaseField& field() const { return field_; }
    const Fragment& algebra() const { return Fragment::get(kind_, field_); }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    int size() const { return static_cast<int>(gens_.size()); }
    const ComoduleGenerator& gen(int i) const { return gens_[static_cast<std::size_t>(i)]; }
    const std::vector<ComoduleGenerator>& gens() const { return gens_; }
    const std::vector<CoactionTerm>& coaction(int i) const { return coaction_[static_cast<std::size_t>(i)]; }
    int find(const std::string& name) const;  // -1 if absent

    int add_generator(ComoduleGenerator g);
    // Terms are canonicalized; the counit term (1, 0, g) must be included.
    void set_coaction(int g, std::vector<CoactionTerm> terms);

    // Largest and smallest generator stems (0 for the empty comodule).
    int max_stem() const;
    int min_stem() const;

    nlohmann::json to_json() const;
    static Comodule from_json(const nlohmann::json& j);

private:
    FragmentKind kind_ = FragmentKind::A1Dual;
    BaseField field_;
    std::string name_;
    std::vector<ComoduleGenerator> gens_;
    std::vector<std::vector<CoactionTerm>> coaction_;
};

Comodule unit_comodule(FragmentKind kind, const BaseField& F);
// The span of the given coefficient-free monomials of (A//A(n))^dual as a
// quotient comodule: coaction terms whose left factor falls outside the
// list are dropped. Callers pass lists whose complement spans a
// subcomodule (weight truncations, for instance).
Comodule quotient_span(int n, const std::vector<MilnorMonomial>& monos, FragmentKind over, const BaseField& F,
                       std::string name);
Comodule brown_gitler(int n, int k, const BaseField& F, FragmentKind over = FragmentKind::A1Dual);
// (A//A(n))^dual truncated at Mahowald weight <= max_weight.
Comodule weight_truncated_quotient(int n, int max_weight, const BaseField& F, FragmentKind over);
// (A(1)//A(0))^dual = M2{1, xi1, tau1, xi1 tau1} as an A(1)^dual-comodule.
Comodule a1_mod_a0(const BaseField& F);
Comodule tensor(const Comodule& M, const Comodule& N);
Comodule tensor_power(const Comodule& M, int n);
Comodule suspend(const Comodule& M, int a, int b);
// Restriction along A(1)^dual -> A(0)^dual.
Comodule restrict_to_a0(const Comodule& M);

struct AxiomReport {
    bool counit = true;
    bool coassociative = true;
    bool degrees = true;
    std::string detail;
    bool ok() const { return counit && coassociative && degrees; }
};
AxiomReport check_axioms(const Comodule& M);

// Generators grouped by stem, ascending; coaction must not raise the layer.
struct CellFiltration {
    std::vector<int> stems;                 // layer stem values
    std::vector<std::vector<int>> layers;   // generator indices per layer
    int layer_of(int gen) const;
    std::vector<int> layer_index;
};
CellFiltration cell_filtration(const Comodule& M);
bool respects_filtration(const Comodule& M, const CellFiltration& cf);

// M2-linear maps given on generators.
struct MapTerm {
    CoeffMonomial c;
    int gen = 0;
    auto key() const { return std::make_pair(gen, c.key()); }
    bool operator<(const MapTerm& o) const { return key() < o.key(); }
    bool operator==(const MapTerm& o) const { return key() == o.key(); }
};
struct ComoduleMap {
    std::vector<std::vector<MapTerm>> images;  // per source generator
};
// Returns the source generators where psi(f(g)) != (1 (x) f)(psi(g)).
std::vector<int> comodule_map_defects(const ComoduleMap& f, const Comodule& M, const Comodule& N);

// F2-basis of M in bidegree d: pairs (coefficient, generator).
std::vector<std::pair<CoeffMonomial, int>> graded_basis(const Comodule& M, BiDegree d);

struct SesReport {
    int k = 0;
    bool odd = false;
    Comodule sub;
    Comodule middle;
    Comodule quotient;
    ComoduleMap inclusion;
    ComoduleMap projection;
    bool exact = false;
    std::vector<int> inclusion_defects;
    std::vector<int> projection_defects;
    std::string detail;
};
// 0 -> S^{4k,2k} B0(k) [(x) B0(1)] -> B0(2k[+1]) -> B1(k-1) (x) (A(1)//A(0))^dual -> 0
// with monomial-matching maps. Throws std::runtime_error if the sequence is
// not exact in some bidegree; comodule-map defects are reported, not thrown.
SesReport ses_brown_gitler(int k, bool odd, const BaseField& F);

struct SplittingRow {
    BiDegree d;
    int lhs = 0;
    int rhs = 0;
};
// Dimension of (A//A(1))^dual against sum_k dim S^{4k,2k} B0(k) per bidegree,
// stems 0..max_stem, over the given weight range.
std::vector<SplittingRow> amod_a1_splitting_check(int k_max, int max_stem, const BaseField& F);

}  // namespace mot
