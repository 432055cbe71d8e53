// Fragments of the motivic dual Steenrod algebra over finite fields.
//
// Conventions. Elements of a Hopf algebroid fragment Gamma are written in
// normal form sum c * mu with the coefficient c in M2 acting through the
// left unit and mu a basis monomial. Monomials of A(1)^dual are indexed by a
// 3-bit mask (bit 0 = tau_0, bit 1 = xi_1, bit 2 = tau_1); A(0)^dual uses the
// masks 0 and 1.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "motivic/coefficients.hpp"

namespace mot {

enum class FragmentKind { A0Dual, A1Dual, AmodA0Dual, AmodA1Dual };

struct FragmentSpec {
    FragmentKind kind = FragmentKind::A1Dual;
    BaseField field;
    bool operator==(const FragmentSpec&) const = default;
};

std::string fragment_name(FragmentKind k);

// Sums over F2 are kept as sorted vectors without repeated entries.
template <class T>
void canonicalize(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) % 2) v[out++] = v[i];
        i = j;
    }
    v.resize(out);
}

// ---------------------------------------------------------------------------
// Monomials of the full dual Steenrod algebra.

struct MilnorMonomial {
    std::vector<int> xi;   // xi[i-1] = exponent of xibar_i
    unsigned tauOcc = 0;   // bit i set <=> taubar_i present
    CoeffMonomial coeff;

    int xi_exp(int i) const { return i >= 1 && i <= static_cast<int>(xi.size()) ? xi[i - 1] : 0; }
    void set_xi(int i, int e);
    void trim();
    BiDegree degree() const;  // includes the coefficient
    int weight() const;       // Mahowald weight
    std::string str(const BaseField& F) const;
    bool operator==(const MilnorMonomial& o) const;
    bool operator<(const MilnorMonomial& o) const;  // tauOcc, then xi, then coeff
};
using MilnorSum = std::vector<MilnorMonomial>;

BiDegree xi_degree(int i);
BiDegree tau_degree(int i);

// A formal product of generators with arbitrary exponents.
struct FormalProduct {
    std::vector<int> xi;   // xi[i-1]
    std::vector<int> tau;  // tau[i]
    CoeffMonomial coeff;
};

// Canonical form: taubar squares eliminated by the relations, then the
// quotient relations of the fragment applied. For the (A//A(n)) kinds the
// reduction happens in the full algebra.
MilnorSum reduce(const FormalProduct& p, const FragmentSpec& spec);
bool in_fragment(const MilnorMonomial& m, FragmentKind k);

// All monomials (with coefficients) of a fragment in bidegree d.
std::vector<MilnorMonomial> fragment_basis(const FragmentSpec& spec, BiDegree d);
// Coefficient-free monomials of (A//A(n))^dual, n = 0 or 1, with Mahowald
// weight <= max_weight, in canonical order.
std::vector<MilnorMonomial> quotient_monomials(int n, int max_weight);

// ---------------------------------------------------------------------------
// Finite fragments A(0)^dual and A(1)^dual as tables.

struct GTerm {
    CoeffMonomial c;
    int m = 0;
    auto operator<=>(const GTerm& o) const {
        if (auto x = m <=> o.m; x != 0) return x;
        return c <=> o.c;
    }
    bool operator==(const GTerm& o) const { return m == o.m && c == o.c; }
};
using GElem = std::vector<GTerm>;

struct CopTerm {
    CoeffMonomial c;  // left coefficient
    int l = 0;
    int r = 0;
};

class Fragment {
public:
    static const Fragment& get(FragmentKind kind, const BaseField& F);

    FragmentKind kind() const { return kind_; }
    const BaseField& field() const { return field_; }
    int size() const { return kind_ == FragmentKind::A0Dual ? 2 : 8; }
    BiDegree degree(int m) const;
    int weight(int m) const;
    std::string name(int m) const;
    MilnorMonomial to_milnor(int m) const;

    const GElem& mult(int a, int b) const { return mult_[a * 8 + b]; }
    GElem multiply(const GElem& x, const GElem& y) const;
    const GElem& right_unit(CoeffMonomial c) const;
    // m * eta_R(c)
    const GElem& times_right_unit(int m, CoeffMonomial c) const;
    const std::vector<CopTerm>& coproduct(int m) const { return cop_[m]; }
    const GElem& conjugate(int m) const { return chi_[m]; }
    GElem conjugate(const GElem& x) const;
    // Projection of a general monomial of A^dual; -1 when it maps to zero.
    int index_of(const MilnorMonomial& m) const;

private:
    Fragment(FragmentKind kind, const BaseField& F);
    GElem mono_product(int a, int b) const;

    FragmentKind kind_;
    BaseField field_;
    std::vector<GElem> mult_;
    std::vector<std::vector<CopTerm>> cop_;
    std::vector<GElem> chi_;
    mutable std::recursive_mutex cache_mu_;
    mutable std::map<int, GElem> eta_cache_;
    mutable std::map<std::pair<int, int>, GElem> tru_cache_;
};

// Tensor words c [m_1 | ... | m_f] g with the coefficient at the far left.
struct Word {
    CoeffMonomial c;
    std::vector<std::uint8_t> m;
    int gen = -1;

    auto key() const { return std::tie(gen, m, c); }
    bool operator<(const Word& o) const { return key() < o.key(); }
    bool operator==(const Word& o) const { return key() == o.key(); }
};
using WordSum = std::vector<Word>;

// Moves a coefficient sitting immediately before factor k (k = m.size() means
// before the generator) to the far left, appending the resulting normal-form
// words to out.
void push_coeff(const Fragment& A, Word w, std::size_t k, CoeffMonomial e, WordSum& out);

// Right coaction of a coefficient-free monomial of (A//A(n))^dual: pairs
// (left monomial, element of A(n)^dual) whose sum is the coproduct with the
// right factor projected.
std::vector<std::pair<MilnorMonomial, GElem>> right_coaction(const MilnorMonomial& m, const Fragment& A);

}  // namespace mot
