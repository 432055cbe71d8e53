#include "doctest.h"
#include "motivic/cooperations.hpp"

using namespace mot;

namespace {
ExtChart kq_chart(const BaseField& F, ExtWindow W) { return ext_minimal(unit_comodule(FragmentKind::A1Dual, F), W); }
}  // namespace

TEST_CASE("shifts and Adams covers move classes") {
    const BaseField F = BaseField::from_q(5);
    const ExtChart E = kq_chart(F, {-2, 8, 6, -4, 8});
    const ExtChart S = shift_chart(E, 4, 2);
    CHECK(S.dim({4, 1, 2}) == E.dim({0, 1, 0}));
    CHECK(S.find({5, 1, 3}, "h1") >= 0);
    const ExtChart C = adams_cover(E, 2);
    CHECK(C.dim({0, 0, 0}) == E.dim({0, 2, 0}));
    CHECK(C.dim({4, 1, 2}) == E.dim({4, 3, 2}));
    CHECK(C.window.fmax == E.window.fmax - 2);
}

TEST_CASE("truncations") {
    for (int q : {5, 3}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        const ExtChart E = kq_chart(F, {-2, 10, 6, -6, 10});
        // Coefficient multiples count at the stem of the class they multiply.
        const ExtChart T0 = h1_truncate(E, 0);
        CHECK_FALSE(first_dim_mismatch(T0, E));
        const ExtChart T4 = truncate_stem(E, 4);
        CHECK(T4.dim({3, 3, 2}) == 0);
        CHECK(T4.dim({4, 3, 2}) == E.dim({4, 3, 2}));
    }
}

TEST_CASE("the isolated h1-tower of the second cover is removed") {
    const BaseField F = BaseField::from_q(5);
    const ExtChart E = kq_chart(F, {-2, 12, 10, -6, 12});
    const ExtChart C = adams_cover(E, 2);
    const ExtChart T = h1_truncate(C, 4);
    const ExtChart P = truncate_stem(C, 4);
    // h1^4, h1^5, ... sit in the cover from (4,2,4) on without h0 links.
    for (int n = 4; n <= 8; ++n) {
        const TriDegree d{n, n - 2, n};
        CHECK(P.find(d, "h1^" + std::to_string(n)) >= 0);
        CHECK(T.dim(d) == 0);
    }
    // Classes with h0 links stay.
    CHECK(T.dim({4, 1, 2}) == P.dim({4, 1, 2}));
}

TEST_CASE("Z_0 is Ext(M2) and the 0-line is Ext(M2)") {
    const BaseField F = BaseField::from_q(3);
    const ExtWindow W{-2, 8, 5, -4, 8};
    const BaseCharts B = base_charts(F, W, 0);
    CHECK_FALSE(first_dim_mismatch(z_module(0, B).chart, kq_chart(F, W)));
    CHECK_FALSE(first_dim_mismatch(n_line_e2(0, F, W), kq_chart(F, W)));
}

TEST_CASE("binary digit sums") {
    CHECK(binary_digit_sum(1) == 1);
    CHECK(binary_digit_sum(3) == 2);
    CHECK(binary_digit_sum(4) == 1);
    CHECK(binary_digit_sum(7) == 3);
}

TEST_CASE("decompositions modulo b-torsion in a small window") {
    for (int q : {5, 3}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        const ExtWindow W{-2, 8, 6, -4, 6};
        const CheckReport A = verify_b01_powers(2, F, W);
        const CheckReport B = ext_b0k_decomposition(3, F, W);
        for (const auto& r : A.rows) CHECK_MESSAGE(r.pass, r.name << " " << r.detail);
        for (const auto& r : B.rows) CHECK_MESSAGE(r.pass, r.name << " " << r.detail);
    }
}

TEST_CASE("cooperations page agrees with the direct computation") {
    const BaseField F = BaseField::from_q(5);
    const ExtWindow W{-2, 10, 5, -4, 8};
    CHECK_FALSE(first_dim_mismatch(cooperations_e2(2, F, W), cooperations_oracle(2, F, W)));
}

TEST_CASE("caps are enforced") {
    const BaseField F = BaseField::from_q(5);
    const ExtWindow W{-2, 4, 2, -2, 4};
    const BaseCharts B = base_charts(F, W, 0);
    CHECK_THROWS_AS(z_module(9, B), std::invalid_argument);
    CHECK_THROWS_AS(n_line_e2(5, F, W), std::invalid_argument);
}
