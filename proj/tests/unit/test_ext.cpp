#include <unistd.h>

#include <filesystem>

#include "../oracle/presentation.hpp"
#include "doctest.h"
#include "motivic/chart.hpp"
#include "motivic/cobar.hpp"

using namespace mot;

namespace {
std::string fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("motivic-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p.string();
}
}  // namespace

TEST_CASE("Ext over A(0) matches the presentation") {
    for (int q : {5, 3}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        ExtEngine E(unit_comodule(FragmentKind::A0Dual, F), 0, 6);
        const auto P = oracle::ext_a0(F.kind == FieldKind::QThree);
        for (int s = -5; s <= 0; ++s)
            for (int f = 0; f <= 6; ++f)
                for (int w = -6; w <= 0; ++w) {
                    const std::string d = TriDegree{s, f, w}.str();
                    CAPTURE(d);
                    CHECK(E.dim({s, f, w}) == P.dim(s, f, w));
                }
    }
}

TEST_CASE("Ext over A(1) matches the presentation in low coweight") {
    for (int q : {5, 3}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        ExtEngine E(unit_comodule(FragmentKind::A1Dual, F), 8, 5);
        const auto P = oracle::ext_a1(F.kind == FieldKind::QThree);
        for (int s = -3; s <= 8; ++s)
            for (int f = 0; f <= 5; ++f)
                for (int cw = 0; cw <= 3; ++cw) {
                    const std::string d = TriDegree{s, f, s - cw}.str();
                    CAPTURE(d);
                    CHECK(E.dim({s, f, s - cw}) == P.dim(s, f, s - cw));
                }
    }
}

TEST_CASE("a cached resolution gives the same chart") {
    const std::string dir = fresh_dir("cache");
    const Comodule M = brown_gitler(0, 1, BaseField::from_q(3));
    const ExtWindow W{-2, 6, 4, -4, 6};
    {
        ExtEngine cold(M, 6, 4, dir);
        CHECK_FALSE(cold.loaded_from_cache());
        ExtEngine warm(M, 6, 4, dir);
        CHECK(warm.loaded_from_cache());
    }
    const auto a = ext_minimal(M, W, {true, ""}).to_json().dump();
    const auto b = ext_minimal(M, W, {true, dir}).to_json().dump();
    const auto c = ext_minimal(M, W, {true, dir}).to_json().dump();
    CHECK(a == b);
    CHECK(b == c);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cobar complex and minimal resolution agree in low degrees") {
    for (auto F : {BaseField::from_q(5), BaseField::from_q(3), BaseField::complex_like()}) {
        CAPTURE(F.describe());
        const ExtWindow W{-1, 5, 3, -3, 5};
        for (const Comodule& M : {unit_comodule(FragmentKind::A1Dual, F), brown_gitler(0, 1, F)}) {
            const auto mm = first_dim_mismatch(ext_cobar(M, W), ext_minimal(M, W, {false, ""}));
            CHECK_MESSAGE(!mm, M.name() << " differs at " << (mm ? mm->str() : ""));
        }
    }
}

TEST_CASE("Massey product <rho, h0, h1> is tau h1 without indeterminacy") {
    const BaseField F = BaseField::from_q(3);
    const Comodule M2 = unit_comodule(FragmentKind::A1Dual, F);
    const ExtChart R = ext_minimal(M2, {-2, 3, 3, -3, 3});
    const CobarComplex C(M2);
    const auto T = massey_triple(C, R, R.ring_gens.at("rho"), "rho", R.ring_gens.at("h0"), "h0", R.ring_gens.at("h1"), "h1");
    REQUIRE(T.degree == TriDegree{1, 1, 0});
    const int i = R.find(T.degree, "tauh1");
    REQUIRE(i >= 0);
    CHECK(T.value.count() == 1);
    CHECK(T.value.get(static_cast<std::size_t>(i)));
    CHECK(T.indeterminacy_dim == 0);
}

TEST_CASE("a bracket with a nonzero product is refused") {
    const BaseField F = BaseField::from_q(5);
    const Comodule M2 = unit_comodule(FragmentKind::A1Dual, F);
    const ExtChart R = ext_minimal(M2, {-2, 3, 3, -3, 3});
    const CobarComplex C(M2);
    CHECK_THROWS_AS(massey_triple(C, R, R.ring_gens.at("u"), "u", R.ring_gens.at("h0"), "h0", R.ring_gens.at("h1"), "h1"),
                    std::domain_error);
}
