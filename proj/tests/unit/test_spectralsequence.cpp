#include "doctest.h"
#include "motivic/spectralsequence.hpp"

using namespace mot;

namespace {
const ColumnGroup* column(const AssembledGroups& G, int s, int w) { return G.at(s, w); }
std::string group_str(const AssembledGroups& G, int s, int w) {
    const ColumnGroup* g = column(G, s, w);
    return g ? g->str() : "0";
}
}  // namespace

TEST_CASE("HZ differential lengths come from the orders of K_1") {
    const auto P5 = derive_hz_pattern(BaseField::from_q(5), 8);
    CHECK(P5.rule(1) == "d2(tau) = u h0^2");
    CHECK(P5.rule(2) == "d3(tau^2) = u tau h0^3");
    CHECK(P5.length(4) == 4);
    CHECK(P5.length(8) == 5);
    const auto P3 = derive_hz_pattern(BaseField::from_q(3), 8);
    CHECK(P3.source == "tau2");
    CHECK(P3.rule(1) == "d3(tau2) = rhotau h0^3");
    CHECK(P3.length(2) == 4);
    CHECK(derive_hz_pattern(BaseField::complex_like(), 8).empty());
}

TEST_CASE("homotopy of HZ in stems -1 and 0") {
    for (int q : {5, 3, 7, 9}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A0Dual, F), {-2, 1, 12, -6, 1});
        const SSPage P = run_mass(E, derive_hz_pattern(F, 16), "HZ");
        const AssembledGroups G = assemble_homotopy(P);
        for (int n = 1; n <= 6; ++n) {
            const ColumnGroup* g = column(G, -1, -n);
            REQUIRE(g);
            CHECK(g->free_rank == 0);
            CHECK(g->log2_torsion_order() == nu2_pow_minus_one(q, n));
        }
        CHECK(group_str(G, 0, 0) == "Z2");
        CHECK(group_str(G, 0, -3) == "0");
    }
}

TEST_CASE("homotopy of kq in low stems") {
    const BaseField F = BaseField::from_q(5);
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), {-2, 9, 16, -6, 10});
    const SSPage P = run_mass(E, derive_hz_pattern(F, 24), "kq");
    const AssembledGroups G = assemble_homotopy(P);
    CHECK(group_str(G, 0, 0) == "Z2 + Z/2");
    CHECK(group_str(G, 1, 0) == "Z/2 + Z/2");
    CHECK(group_str(G, 2, 0) == "Z/2");
    CHECK(group_str(G, 3, 0) == "Z/8");
    CHECK(group_str(G, 4, 0) == "0");
    CHECK(group_str(G, 7, 0) == "Z/16");
    CHECK(P.differentials.size() > 0);
    const auto j = P.to_json();
    CHECK(j.at("schema") == "motivic-ss-page");
    CHECK(j.at("differentials").size() == P.differentials.size());
}

TEST_CASE("the exact range does not depend on how many powers were derived") {
    const BaseField F = BaseField::from_q(5);
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), {-2, 12, 16, -6, 12});
    const SSPage a = run_mass(E, derive_hz_pattern(F, 18));
    const SSPage b = run_mass(E, derive_hz_pattern(F, 80));
    CHECK(a.reliable_fmax == b.reliable_fmax);
    CHECK(group_str(assemble_homotopy(a), 11, 0) == group_str(assemble_homotopy(b), 11, 0));
    CHECK(group_str(assemble_homotopy(b), 11, 0) == "Z/8");
}

TEST_CASE("E-infinity chart has the dimensions of the page") {
    const BaseField F = BaseField::from_q(3);
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), {-2, 8, 8, -6, 8});
    const SSPage P = run_mass(E, derive_hz_pattern(F, 16), "kq");
    const ExtChart C = einf_chart(P);
    for (const auto& [d, pd] : P.einf) CHECK(C.dim(d) == pd.dim());
    CHECK(C.has_product("h0"));
    CHECK(C.has_product("tau2"));
}

TEST_CASE("algebraic AHSS for B0(1)") {
    for (int q : {5, 3}) {
        CAPTURE(q);
        const BaseField F = BaseField::from_q(q);
        const ExtChart R = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), {-4, 10, 6, -6, 10});
        const Comodule M = brown_gitler(0, 1, F);
        const AahssResult A = run_aahss(M, R);
        CHECK_FALSE(first_dim_mismatch(A.einf, ext_minimal(M, A.einf.window, {false, ""})));
        std::vector<std::string> nonzero;
        for (const auto& d : A.d3)
            if (d.value != "0") nonzero.push_back(d.generator + "->" + d.value);
        if (q == 3) CHECK(nonzero == std::vector<std::string>{"rho->tauh1"});
        else CHECK(nonzero.empty());
    }
}
