// Assembly of the cooperations E2 page, the comparison modules Z_i and the
// n-line of the kq-resolution out of Ext charts.
//
// Everything here is chart arithmetic: suspensions, Adams covers,
// truncations and tagged direct sums, plus formal monomial charts for the
// summands that are given by a presentation rather than computed.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "motivic/chart.hpp"
#include "motivic/report.hpp"
#include "motivic/spectralsequence.hpp"

namespace mot {

// Desk-scale limits. Operations throw std::invalid_argument beyond them.
struct Caps {
    int k_max = 5;
    int i_max = 4;
    int n_max = 2;
    int stem_max = 20;
};

// Degrees of the algebra generators of Ext over A(1) for the field class.
std::map<std::string, TriDegree> ring_generator_degrees(const BaseField& F);

// Sigma^{ds,dw}: every class moves by (ds, 0, dw), products are unchanged.
ExtChart shift_chart(const ExtChart& E, int ds, int dw);
// m-th Adams cover: (s, f, w) holds what the base has in (s, f + m, w).
ExtChart adams_cover(const ExtChart& base, int m);
// Classes in stems >= n; products into lower stems become zero.
ExtChart truncate_stem(const ExtChart& E, int n);
// truncate_stem, then drop every isolated h1-tower: a connected family
// under h1-multiplication with at least two members, none of which meets
// h0-multiplication in either direction, running into the window edge.
ExtChart h1_truncate(const ExtChart& E, int n);

// Direct sum over the window W. Each part keeps its own tags (or gets its
// name as tag). Ring generators a part does not know act by zero on it.
ExtChart direct_sum(const std::string& name, const std::vector<ExtChart>& parts, const ExtWindow& W,
                    const std::map<std::string, TriDegree>& ring_gens);

// Monomials in the given generators with exponent caps (cap < 0: none),
// shifted to start at `origin`. The named generators act by raising their
// exponent; every other ring generator acts by zero.
struct FormalGen {
    std::string name;
    int cap = -1;
};
ExtChart formal_chart(const std::string& name, const BaseField& F, TriDegree origin,
                      const std::vector<FormalGen>& gens, const ExtWindow& W);

// Base charts shared by the constructions below, all over A(1) unless noted.
struct BaseCharts {
    BaseField field;
    ExtWindow window;  // the window every derived chart is cut to
    ExtChart kq;       // Ext(M2), computed with extra filtration for covers
    ExtChart ksp;      // Ext(B0(1))
    ExtChart hz;       // Ext over A(0) of M2
    int cover_room = 0;
};
BaseCharts base_charts(const BaseField& F, const ExtWindow& W, int cover_room, const std::string& cache_dir = "");

struct ZModule {
    int i = 0;
    std::vector<std::string> summands;  // human-readable formula pieces
    ExtChart chart;
};
ZModule z_module(int i, const BaseCharts& B);

int binary_digit_sum(int k);

// Ext(B0(1)^{(x) i}) modulo b-torsion against Z_i, for i = 0..i_max.
CheckReport verify_b01_powers(int i_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir = "",
                              const Caps& caps = {});
// Ext(B0(k)) modulo b-torsion against Sigma^{4k-4,2k-2} Z_{alpha(k)} plus the
// h0-tower summands, for k = 1..k_max.
CheckReport ext_b0k_decomposition(int k_max, const BaseField& F, const ExtWindow& W,
                                  const std::string& cache_dir = "", const Caps& caps = {});

// sum_{k <= k_max} Sigma^{4k,2k} Ext(B0(k)), tagged "k=<k>".
ExtChart cooperations_e2(int k_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir = "",
                         const Caps& caps = {});
// The same page from the weight pieces of (A//A(1))^dual, computed directly.
ExtChart cooperations_oracle(int k_max, const BaseField& F, const ExtWindow& W, const std::string& cache_dir = "");

// sum over K = (k_1..k_n), k_j >= 1, of Sigma^{4|K|,2|K|} Ext(B0(k_1) (x) ... (x) B0(k_n)),
// tagged "K=(k_1,...)". n = 0 gives Ext(M2).
ExtChart n_line_e2(int n, const BaseField& F, const ExtWindow& W, const std::string& cache_dir = "",
                   const Caps& caps = {});

// Differentials supported by h1-divisible classes (should be none).
std::vector<Differential> h1_divisible_sources(const SSPage& P);

}  // namespace mot
