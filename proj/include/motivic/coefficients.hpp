// Coefficient rings M2 = H^{*,*}(Spec F; F2) for finite fields and the
// complex-like case, plus 2-adic valuations.
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace mot {

enum class FieldKind { QOne, QThree, ComplexLike };

struct BaseField {
    FieldKind kind = FieldKind::ComplexLike;
    int q = 0;  // 0 for ComplexLike

    static BaseField from_q(int q);  // odd prime power; class read off q mod 4
    static BaseField complex_like() { return {}; }

    bool has_gen() const { return kind != FieldKind::ComplexLike; }
    // Display name of the square-zero generator in degree (-1,-1).
    std::string gen_name() const { return kind == FieldKind::QThree ? "rho" : "u"; }
    std::string tag() const;  // "q1", "q3" or "c"
    std::string describe() const;
    bool operator==(const BaseField&) const = default;
};

struct BiDegree {
    int s = 0;
    int w = 0;
    auto operator<=>(const BiDegree&) const = default;
    BiDegree operator+(BiDegree o) const { return {s + o.s, w + o.w}; }
    BiDegree operator-(BiDegree o) const { return {s - o.s, w - o.w}; }
};

// tau^tauExp * g^genExp with g = u or rho.
struct CoeffMonomial {
    int tauExp = 0;
    int genExp = 0;

    BiDegree degree() const { return {-genExp, -tauExp - genExp}; }
    // Degree as a cohomology class (negated homological degree).
    BiDegree codegree() const { return {genExp, tauExp + genExp}; }
    bool is_one() const { return tauExp == 0 && genExp == 0; }
    int key() const { return tauExp * 2 + genExp; }
    static CoeffMonomial from_key(int k) { return {k / 2, k % 2}; }
    std::string str(const BaseField& F) const;
    auto operator<=>(const CoeffMonomial& o) const { return key() <=> o.key(); }
    bool operator==(const CoeffMonomial& o) const { return key() == o.key(); }
};

// Exponent of 2 in n; throws std::invalid_argument for n <= 0.
int nu2(long long n);
// nu2(q^n - 1) for odd q and n >= 1, computed exactly modulo 2^64.
int nu2_pow_minus_one(long long q, int n);

std::vector<CoeffMonomial> m2_basis(BiDegree d, const BaseField& F);
std::optional<CoeffMonomial> multiply_coeff(CoeffMonomial a, CoeffMonomial b);
// The monomial in a given bidegree and codegree lookup.
std::optional<CoeffMonomial> coeff_with_codegree(BiDegree cd, const BaseField& F);

}  // namespace mot
