#include "motivic/coefficients.hpp"

#include <stdexcept>

namespace mot {

BaseField BaseField::from_q(int q) {
    if (q < 3 || q % 2 == 0) throw std::invalid_argument("q must be an odd prime power >= 3");
    BaseField F;
    F.q = q;
    F.kind = (q % 4 == 1) ? FieldKind::QOne : FieldKind::QThree;
    return F;
}

std::string BaseField::tag() const {
    switch (kind) {
        case FieldKind::QOne: return "q1";
        case FieldKind::QThree: return "q3";
        default: return "c";
    }
}

std::string BaseField::describe() const {
    if (kind == FieldKind::ComplexLike) return "complex-like";
    return tag() + "(q=" + std::to_string(q) + ")";
}

std::string CoeffMonomial::str(const BaseField& F) const {
    if (is_one()) return "1";
    std::string out;
    if (genExp) out += F.gen_name();
    if (tauExp) {
        out += "tau";
        if (tauExp > 1) out += "^" + std::to_string(tauExp);
    }
    return out;
}

int nu2(long long n) {
    if (n <= 0) throw std::invalid_argument("nu2 needs a positive integer");
    int k = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++k;
    }
    return k;
}

int nu2_pow_minus_one(long long q, int n) {
    if (q % 2 == 0 || n < 1) throw std::invalid_argument("nu2_pow_minus_one needs odd q and n >= 1");
    unsigned long long acc = 1;
    auto base = static_cast<unsigned long long>(q);
    for (int i = 0; i < n; ++i) acc *= base;  // wraps modulo 2^64
    unsigned long long v = acc - 1;
    if (v == 0) throw std::overflow_error("2-adic valuation exceeds 63");
    int k = 0;
    while ((v & 1u) == 0) {
        v >>= 1;
        ++k;
    }
    return k;
}

std::vector<CoeffMonomial> m2_basis(BiDegree d, const BaseField& F) {
    if (d.s == 0 && d.w <= 0) return {CoeffMonomial{-d.w, 0}};
    if (F.has_gen() && d.s == -1 && d.w <= -1) return {CoeffMonomial{-d.w - 1, 1}};
    return {};
}

std::optional<CoeffMonomial> multiply_coeff(CoeffMonomial a, CoeffMonomial b) {
    if (a.genExp + b.genExp >= 2) return std::nullopt;
    return CoeffMonomial{a.tauExp + b.tauExp, a.genExp + b.genExp};
}

std::optional<CoeffMonomial> coeff_with_codegree(BiDegree cd, const BaseField& F) {
    if (cd.s == 0 && cd.w >= 0) return CoeffMonomial{cd.w, 0};
    if (F.has_gen() && cd.s == 1 && cd.w >= 1) return CoeffMonomial{cd.w - 1, 1};
    return std::nullopt;
}

}  // namespace mot
