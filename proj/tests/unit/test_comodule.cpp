#include <algorithm>

#include "doctest.h"
#include "motivic/comodule.hpp"

using namespace mot;

namespace {
std::vector<BaseField> fields() { return {BaseField::from_q(5), BaseField::from_q(3), BaseField::complex_like()}; }

std::vector<std::string> names(const Comodule& M) {
    std::vector<std::string> out;
    for (const auto& g : M.gens()) out.push_back(g.name);
    return out;
}
}  // namespace

TEST_CASE("Brown-Gitler generators") {
    auto F = BaseField::from_q(5);
    CHECK(names(brown_gitler(0, 0, F)) == std::vector<std::string>{"1"});
    CHECK(names(brown_gitler(0, 1, F)) == std::vector<std::string>{"1", "xi1", "tau1"});
    auto b2 = names(brown_gitler(0, 2, F));
    std::sort(b2.begin(), b2.end());
    CHECK(b2 == std::vector<std::string>{"1", "tau1", "tau1 xi1", "tau2", "xi1", "xi1^2", "xi2"});
    CHECK(names(brown_gitler(1, 1, F)) == std::vector<std::string>{"1", "xi1^2", "xi2", "tau2"});
}

TEST_CASE("comodule axioms hold for the constructed comodules") {
    for (auto F : fields()) {
        CAPTURE(F.describe());
        std::vector<Comodule> all{unit_comodule(FragmentKind::A1Dual, F), a1_mod_a0(F)};
        for (int k = 0; k <= 4; ++k) all.push_back(brown_gitler(0, k, F));
        for (int k = 0; k <= 2; ++k) all.push_back(brown_gitler(1, k, F));
        all.push_back(tensor_power(brown_gitler(0, 1, F), 2));
        all.push_back(tensor(brown_gitler(0, 2, F), brown_gitler(0, 1, F)));
        all.push_back(weight_truncated_quotient(1, 16, F, FragmentKind::A1Dual));
        all.push_back(restrict_to_a0(brown_gitler(1, 2, F)));
        all.push_back(brown_gitler(0, 3, F, FragmentKind::A0Dual));
        for (const auto& M : all) {
            CAPTURE(M.name());
            auto rep = check_axioms(M);
            CHECK_MESSAGE(rep.ok(), rep.detail);
            CHECK(respects_filtration(M, cell_filtration(M)));
        }
    }
}

TEST_CASE("tensor products and suspensions") {
    auto F = BaseField::from_q(3);
    auto b1 = brown_gitler(0, 1, F);
    auto unit = unit_comodule(FragmentKind::A1Dual, F);
    auto t = tensor(unit, b1);
    CHECK(names(t) == names(b1));
    CHECK(t.coaction(2) == b1.coaction(2));

    auto sq = tensor(b1, b1);
    std::vector<int> stems;
    for (const auto& g : sq.gens()) stems.push_back(g.deg.s);
    CHECK(stems == std::vector<int>{0, 2, 3, 2, 4, 5, 3, 5, 6});

    auto s = suspend(b1, 4, 2);
    CHECK(s.gen(0).deg == BiDegree{4, 2});
    auto ss = suspend(suspend(b1, 1, 1), 3, 1);
    for (int i = 0; i < b1.size(); ++i) CHECK(ss.gen(i).deg == s.gen(i).deg);
    CHECK(suspend(b1, 0, 0).gens().size() == b1.gens().size());

    // The coaction on xi1|xi1 contains xi1 (x) (1|xi1), xi1 (x) (xi1|1) and 1 (x) xi1|xi1.
    int g = sq.find("xi1|xi1");
    REQUIRE(g >= 0);
    int one_xi = sq.find("1|xi1"), xi_one = sq.find("xi1|1");
    const auto& co = sq.coaction(g);
    auto has = [&](int mono, int gen) {
        return std::find(co.begin(), co.end(), CoactionTerm{{}, mono, gen}) != co.end();
    };
    CHECK(has(2, one_xi));
    CHECK(has(2, xi_one));
    CHECK(has(0, g));
}

TEST_CASE("serialization round trip") {
    auto F = BaseField::from_q(3);
    auto M = tensor(brown_gitler(0, 2, F), brown_gitler(0, 1, F));
    auto j = M.to_json();
    auto back = Comodule::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.to_json() == j);
    CHECK(back.to_json().dump() == j.dump());
}

TEST_CASE("quotient of A by A(1) splits by weight") {
    for (auto F : fields()) {
        for (const auto& row : amod_a1_splitting_check(4, 16, F)) {
            CAPTURE(row.d.s);
            CAPTURE(row.d.w);
            CHECK(row.lhs == row.rhs);
        }
    }
    auto rows = amod_a1_splitting_check(4, 16, BaseField::from_q(5));
    auto at = [&](BiDegree d) {
        for (const auto& r : rows)
            if (r.d == d) return r;
        return SplittingRow{d, 0, 0};
    };
    CHECK(at({0, 0}).lhs == 1);
    CHECK(at({4, 2}).lhs == 1);
}

TEST_CASE("Brown-Gitler short exact sequences") {
    for (auto F : fields()) {
        CAPTURE(F.describe());
        auto even = ses_brown_gitler(1, false, F);
        CHECK(even.exact);
        CHECK(even.inclusion_defects.empty());
        CHECK(even.projection_defects.empty());
        auto odd = ses_brown_gitler(1, true, F);
        CHECK(odd.exact);
        CHECK(odd.inclusion_defects.empty());
        CHECK(odd.projection_defects.empty());
        for (int k = 2; k <= 3; ++k) {
            auto r = ses_brown_gitler(k, false, F);
            CHECK(r.exact);
            CHECK(r.inclusion_defects.empty());
            // The monomial projection stops being a comodule map from k = 2 on:
            // psi(xi1 tau1) contains xi1^2 (x) tau0, and xi1^2 survives in the
            // quotient while (A(1)//A(0))^dual has no such term.
            std::vector<std::string> bad;
            for (int g : r.projection_defects) bad.push_back(r.middle.gen(g).name);
            CHECK(std::find(bad.begin(), bad.end(), "tau1 xi1") != bad.end());
            if (k == 2) CHECK(bad == std::vector<std::string>{"tau1 xi1"});
        }
    }
}
