// The normalized cobar complex C^f(M) = Gamma-bar^{(x) f} (x) M, written in
// words c [m_1 | ... | m_f] g. It is far slower than a resolution but needs
// nothing beyond the coproduct and the coaction, which makes it the
// reference for charts and the natural home of Massey products.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "motivic/comodule.hpp"
#include "motivic/ext.hpp"
#include "motivic/f2.hpp"

namespace mot {

class CobarComplex {
public:
    explicit CobarComplex(const Comodule& M);

    const Comodule& comodule() const { return M_; }
    const Fragment& algebra() const { return A_; }

    // Normal-form words of C^f in an internal degree (t, w), sorted.
    const std::vector<Word>& basis(int f, BiDegree internal) const;
    WordSum differential(const Word& w) const;
    WordSum differential(const WordSum& x) const;
    // Columns: differentials of basis(f, I) in basis(f + 1, I).
    std::vector<f2::BitVec> matrix(int f, BiDegree internal) const;

    f2::BitVec to_vec(int f, BiDegree internal, const WordSum& x) const;
    WordSum from_vec(int f, BiDegree internal, const f2::BitVec& v) const;
    BiDegree internal_degree(const Word& w) const;

    int dim(TriDegree d) const;
    // Cocycle representatives of a basis of H^f in tridegree d.
    std::vector<WordSum> representatives(TriDegree d) const;
    // Coordinates of a cocycle against representatives(d); nullopt if it is
    // not a cocycle.
    std::optional<f2::BitVec> coords(TriDegree d, const WordSum& z) const;
    // Some u with d u = x, or nullopt.
    std::optional<WordSum> bound(TriDegree d, const WordSum& x) const;

private:
    struct Cohomology {
        std::vector<WordSum> reps;
        f2::Echelon span;
    };
    const Cohomology& cohomology(TriDegree d) const;

    Comodule M_;
    const Fragment& A_;
    mutable std::map<std::tuple<int, int, int>, std::vector<Word>> bases_;
    mutable std::map<std::tuple<int, int, int>, std::map<Word, int>> index_;
    mutable std::map<TriDegree, Cohomology> groups_;
};

// x * y for x in C(M2) and y in C(M): juxtaposition with y's coefficient
// moved to the far left.
WordSum juxtapose(const Fragment& A, const WordSum& x, const WordSum& y);

struct MasseyResult {
    bool defined = false;    // both products vanish in cohomology
    TriDegree degree;
    f2::BitVec value;        // coordinates of one representative
    int indeterminacy = 0;   // dimension of x H + H z in the target
    std::vector<f2::BitVec> indeterminacy_basis;
    bool value_in_indeterminacy = false;
    int target_dim = 0;
};

// <x, y, z> for cocycles of C(M2) given with their tridegrees.
MasseyResult massey_product(const CobarComplex& C, TriDegree dx, const WordSum& x, TriDegree dy, const WordSum& y,
                            TriDegree dz, const WordSum& z);

struct ExtChart;

// Cobar cocycle for a monomial label of a chart of Ext(M2, M2) ("u tau h0^2",
// "rho h1", "1"). Generators without an evident cocycle (tau h1, a, b) are
// taken as the unique class of their tridegree; nullopt if that is not
// possible.
std::optional<WordSum> cobar_cocycle(const CobarComplex& C, const std::string& label);

// <x, y, z> for chart classes named by their labels, with the value and the
// indeterminacy expressed in the chart basis of the target tridegree.
// Throws std::domain_error when x y or y z is nonzero.
struct MasseyTriple {
    TriDegree degree;
    f2::BitVec value;
    std::vector<f2::BitVec> indeterminacy;  // spanning set in chart coordinates
    int indeterminacy_dim = 0;
};
MasseyTriple massey_triple(const CobarComplex& C, const ExtChart& R, TriDegree dx, const std::string& x,
                           TriDegree dy, const std::string& y, TriDegree dz, const std::string& z);

}  // namespace mot
