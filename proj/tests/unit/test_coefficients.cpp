#include <stdexcept>

#include "doctest.h"
#include "motivic/coefficients.hpp"

using namespace mot;

TEST_CASE("field class is read off q mod 4") {
    CHECK(BaseField::from_q(5).kind == FieldKind::QOne);
    CHECK(BaseField::from_q(3).kind == FieldKind::QThree);
    CHECK(BaseField::from_q(7).kind == FieldKind::QThree);
    CHECK(BaseField::from_q(9).kind == FieldKind::QOne);
    CHECK_THROWS_AS(BaseField::from_q(4), std::invalid_argument);
    CHECK_THROWS_AS(BaseField::from_q(1), std::invalid_argument);
}

TEST_CASE("two-adic valuations") {
    CHECK(nu2(12) == 2);
    CHECK_THROWS(nu2(0));
    CHECK(nu2_pow_minus_one(3, 1) == 1);
    CHECK(nu2_pow_minus_one(3, 2) == 3);
    CHECK(nu2_pow_minus_one(5, 1) == 2);
    CHECK(nu2_pow_minus_one(5, 4) == 4);
    for (long long q : {3, 5, 7, 9, 11, 13}) {
        long long p = 1;
        for (int n = 1; n <= 8; ++n) {
            p *= q;
            CHECK(nu2_pow_minus_one(q, n) == nu2(p - 1));
        }
    }
}

TEST_CASE("coefficient ring bases and products") {
    auto F1 = BaseField::from_q(5);
    auto C = BaseField::complex_like();
    CHECK(m2_basis({0, -3}, F1).size() == 1);
    CHECK(m2_basis({-1, -3}, F1).at(0).tauExp == 2);
    CHECK(m2_basis({-1, -3}, C).empty());
    CHECK(m2_basis({0, 1}, F1).empty());
    CHECK_FALSE(multiply_coeff({0, 1}, {2, 1}).has_value());
    CHECK(multiply_coeff({1, 1}, {2, 0})->tauExp == 3);
    CoeffMonomial u{0, 1};
    CHECK(u.str(F1) == "u");
    CHECK(u.str(BaseField::from_q(3)) == "rho");
}
