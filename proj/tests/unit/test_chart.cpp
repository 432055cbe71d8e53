#include "doctest.h"
#include "motivic/chart.hpp"

using namespace mot;

TEST_CASE("charts and comodules survive a JSON round trip") {
    const BaseField F = BaseField::from_q(3);
    const Comodule M = tensor(brown_gitler(0, 1, F), brown_gitler(0, 1, F));
    CHECK(Comodule::from_json(M.to_json()).to_json() == M.to_json());
    const ExtChart E = ext_minimal(M, {-2, 6, 4, -4, 6});
    const ExtChart back = ExtChart::from_json(E.to_json());
    CHECK(back.to_json() == E.to_json());
    CHECK(back.classes == E.classes);
    CHECK(back.products == E.products);
}

TEST_CASE("multiplication tables follow the labels") {
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, BaseField::from_q(5)), {-2, 8, 6, -6, 8});
    const TriDegree h1{1, 1, 1};
    REQUIRE(E.find(h1, "h1") == 0);
    f2::BitVec x(1);
    x.set(0);
    auto h1sq = E.multiply("h1", h1, x);
    REQUIRE(h1sq);
    CHECK(E.classes.at({2, 2, 2})[static_cast<std::size_t>(h1sq->first())] == "h1^2");
    // h0 h1 = 0
    auto h0h1 = E.multiply("h0", h1, x);
    REQUIRE(h0h1);
    CHECK(h0h1->none());
}

TEST_CASE("b-torsion of Ext(M2)") {
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, BaseField::from_q(5)), {-2, 20, 12, -4, 12});
    const V1Quotient Q = v1_quotient(E, {-2, 4, 3, -4, 4});
    CHECK(Q.status.at({0, 0, 0})[0] == BTorsion::Free);
    CHECK(Q.status.at({0, 1, 0})[static_cast<std::size_t>(E.find({0, 1, 0}, "h0"))] == BTorsion::Free);
    CHECK(Q.undetermined == 0);
}
