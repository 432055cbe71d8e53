#include <random>

#include "doctest.h"
#include "motivic/steenrod.hpp"

using namespace mot;

namespace {

std::vector<BaseField> all_fields() {
    return {BaseField::from_q(5), BaseField::from_q(3), BaseField::complex_like()};
}

// Pushes a left coefficient sitting in front of the given factor.
WordSum triple(const Fragment& A, CoeffMonomial c, int a, int b, int d, std::size_t k, CoeffMonomial e) {
    WordSum out;
    push_coeff(A, Word{c, {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(d)}, -1},
               k, e, out);
    return out;
}

}  // namespace

TEST_CASE("reduce applies the taubar-square relation") {
    FormalProduct p;
    p.tau = {2};
    auto q1 = reduce(p, {FragmentKind::A1Dual, BaseField::from_q(5)});
    REQUIRE(q1.size() == 1);
    CHECK(q1[0].str(BaseField::from_q(5)) == "tau xi1");

    auto F3 = BaseField::from_q(3);
    auto q3 = reduce(p, {FragmentKind::A1Dual, F3});
    std::vector<std::string> names;
    for (auto& m : q3) names.push_back(m.str(F3));
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"rho tau0 xi1", "rho tau1", "tau xi1"});

    FormalProduct x;
    x.xi = {2};
    CHECK(reduce(x, {FragmentKind::A1Dual, F3}).empty());
    CHECK(reduce(x, {FragmentKind::AmodA1Dual, F3}).size() == 1);

    p.tau = {2};
    CHECK(reduce(p, {FragmentKind::A0Dual, F3}).empty());
}

TEST_CASE("reduce is idempotent and preserves degree") {
    std::mt19937 rng(7);
    for (auto F : all_fields()) {
        for (int trial = 0; trial < 10000; ++trial) {
            FormalProduct p;
            p.xi = {static_cast<int>(rng() % 3), static_cast<int>(rng() % 2)};
            p.tau = {static_cast<int>(rng() % 4), static_cast<int>(rng() % 3), static_cast<int>(rng() % 2)};
            p.coeff = {static_cast<int>(rng() % 3), F.has_gen() ? static_cast<int>(rng() % 2) : 0};
            BiDegree d = p.coeff.degree();
            int wt = 0;
            for (std::size_t i = 0; i < p.xi.size(); ++i) {
                auto g = xi_degree(static_cast<int>(i) + 1);
                d = d + BiDegree{g.s * p.xi[i], g.w * p.xi[i]};
                wt += p.xi[i] << (i + 1);
            }
            for (std::size_t i = 0; i < p.tau.size(); ++i) {
                auto g = tau_degree(static_cast<int>(i));
                d = d + BiDegree{g.s * p.tau[i], g.w * p.tau[i]};
                wt += p.tau[i] << i;
            }
            FragmentSpec spec{FragmentKind::AmodA0Dual, F};
            auto r = reduce(p, spec);
            for (const auto& m : r) {
                CHECK(m.degree() == d);
                if (F.kind != FieldKind::QThree) CHECK(m.weight() <= wt);
                FormalProduct again;
                again.xi = m.xi;
                for (int i = 0; i < 8; ++i) again.tau.push_back(m.tauOcc >> i & 1);
                again.coeff = m.coeff;
                auto rr = reduce(again, spec);
                REQUIRE(rr.size() == 1);
                CHECK(rr[0] == m);
            }
        }
    }
}

TEST_CASE("fragment bases") {
    auto F = BaseField::from_q(5);
    // Both taubar_1 and taubar_0 xi_1 sit in (3,1).
    auto b = fragment_basis({FragmentKind::A1Dual, F}, {3, 1});
    REQUIRE(b.size() == 2);
    CHECK(b[0].str(F) == "tau0 xi1");
    CHECK(b[1].str(F) == "tau1");
    b = fragment_basis({FragmentKind::A1Dual, F}, {2, 1});
    REQUIRE(b.size() == 1);
    CHECK(b[0].str(F) == "xi1");
    b = fragment_basis({FragmentKind::AmodA1Dual, F}, {4, 2});
    REQUIRE(b.size() == 1);
    CHECK(b[0].str(F) == "xi1^2");
    CHECK(Fragment::get(FragmentKind::A1Dual, F).size() == 8);
    CHECK(Fragment::get(FragmentKind::A0Dual, F).size() == 2);

    auto B2 = quotient_monomials(0, 4);
    std::vector<std::string> names;
    for (auto& m : B2) names.push_back(m.str(F));
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"1", "tau1", "tau1 xi1", "tau2", "xi1", "xi1^2", "xi2"});
}

TEST_CASE("right unit") {
    auto F5 = BaseField::from_q(5);
    auto F3 = BaseField::from_q(3);
    const auto& A5 = Fragment::get(FragmentKind::A1Dual, F5);
    const auto& A3 = Fragment::get(FragmentKind::A1Dual, F3);
    CHECK(A5.right_unit({1, 0}) == GElem{{{1, 0}, 0}});
    CHECK(A3.right_unit({1, 0}) == GElem{{{1, 0}, 0}, {{0, 1}, 1}});
    CHECK(A3.right_unit({2, 0}) == GElem{{{2, 0}, 0}});
    // Ring map: eta_R(tau)^2 = eta_R(tau^2).
    auto t = A3.right_unit({1, 0});
    CHECK(A3.multiply(t, t) == A3.right_unit({2, 0}));
    CHECK(A3.multiply(t, A3.right_unit({2, 0})) == A3.right_unit({3, 0}));
    CHECK(A3.right_unit({0, 1}) == GElem{{{0, 1}, 0}});
}

TEST_CASE("Hopf algebroid axioms on A(0) and A(1)") {
    for (auto F : all_fields()) {
        for (auto kind : {FragmentKind::A0Dual, FragmentKind::A1Dual}) {
            const Fragment& A = Fragment::get(kind, F);
            CAPTURE(F.describe());
            CAPTURE(fragment_name(kind));
            for (int m = 0; m < A.size(); ++m) {
                CAPTURE(A.name(m));
                // Coassociativity.
                WordSum lhs, rhs;
                for (const auto& t : A.coproduct(m)) {
                    for (const auto& u : A.coproduct(t.l)) {
                        auto c = multiply_coeff(t.c, u.c);
                        if (c) lhs.push_back(Word{*c, {static_cast<std::uint8_t>(u.l), static_cast<std::uint8_t>(u.r),
                                                        static_cast<std::uint8_t>(t.r)}, -1});
                    }
                    for (const auto& u : A.coproduct(t.r)) {
                        auto part = triple(A, t.c, t.l, u.l, u.r, 1, u.c);
                        rhs.insert(rhs.end(), part.begin(), part.end());
                    }
                }
                canonicalize(lhs);
                canonicalize(rhs);
                CHECK(lhs == rhs);
                // Counit on both sides.
                GElem left, right;
                for (const auto& t : A.coproduct(m)) {
                    if (t.r == 0) left.push_back({t.c, t.l});
                    if (t.l == 0) right.push_back({t.c, t.r});
                }
                canonicalize(left);
                canonicalize(right);
                CHECK(left == GElem{{{}, m}});
                CHECK(right == GElem{{{}, m}});
                // Antipode: sum l chi(r) = epsilon(m), and chi is an involution.
                GElem anti;
                for (const auto& t : A.coproduct(m)) {
                    auto part = A.multiply({{t.c, t.l}}, A.conjugate(t.r));
                    anti.insert(anti.end(), part.begin(), part.end());
                }
                canonicalize(anti);
                CHECK(anti == (m == 0 ? GElem{{{}, 0}} : GElem{}));
                CHECK(A.conjugate(A.conjugate(m)) == GElem{{{}, m}});
            }
            for (int k = 0; k < 4; ++k)
                for (int g = 0; g < (F.has_gen() ? 2 : 1); ++g) {
                    CoeffMonomial c{k, g};
                    CHECK(A.conjugate(A.right_unit(c)) == GElem{{c, 0}});
                }
        }
    }
}

TEST_CASE("coproduct is multiplicative") {
    for (auto F : all_fields()) {
        const Fragment& A = Fragment::get(FragmentKind::A1Dual, F);
        auto as_words = [&](const GElem& x) {
            WordSum out;
            for (const auto& t : x)
                for (const auto& u : A.coproduct(t.m)) {
                    auto c = multiply_coeff(t.c, u.c);
                    if (c) out.push_back(Word{*c, {static_cast<std::uint8_t>(u.l), static_cast<std::uint8_t>(u.r)}, -1});
                }
            canonicalize(out);
            return out;
        };
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                WordSum prod;
                for (const auto& s : A.coproduct(a))
                    for (const auto& t : A.coproduct(b)) {
                        auto c = multiply_coeff(s.c, t.c);
                        if (!c) continue;
                        for (const auto& l : A.mult(s.l, t.l)) {
                            auto cl = multiply_coeff(*c, l.c);
                            if (!cl) continue;
                            for (const auto& r : A.mult(s.r, t.r))
                                push_coeff(A, Word{*cl, {static_cast<std::uint8_t>(l.m), static_cast<std::uint8_t>(r.m)}, -1},
                                           1, r.c, prod);
                        }
                    }
                canonicalize(prod);
                CHECK(prod == as_words(A.mult(a, b)));
            }
    }
}

TEST_CASE("generator coproducts") {
    auto F = BaseField::from_q(3);
    const Fragment& A = Fragment::get(FragmentKind::A1Dual, F);
    std::vector<std::string> terms;
    for (const auto& t : A.coproduct(4)) terms.push_back(A.name(t.l) + "|" + A.name(t.r));
    std::sort(terms.begin(), terms.end());
    CHECK(terms == std::vector<std::string>{"1|tau1", "tau1|1", "xi1|tau0"});
    CHECK(A.conjugate(4) == GElem{{{}, 3}, {{}, 4}});
}

TEST_CASE("quotient algebra coaction lands in the fragment") {
    for (auto F : all_fields()) {
        for (int n = 0; n <= 1; ++n) {
            const Fragment& A = Fragment::get(n ? FragmentKind::A1Dual : FragmentKind::A0Dual, F);
            for (const auto& m : quotient_monomials(n, 8)) {
                int total = 0;
                for (const auto& [L, R] : right_coaction(m, A)) {
                    CHECK(in_fragment(L, n ? FragmentKind::AmodA1Dual : FragmentKind::AmodA0Dual));
                    for (const auto& t : R) {
                        CHECK(L.weight() <= m.weight());
                        CHECK(L.degree() + A.degree(t.m) + t.c.degree() == m.degree());
                    }
                    ++total;
                }
                CHECK(total >= 1);
            }
        }
    }
}
