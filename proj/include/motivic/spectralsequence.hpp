// Adams and algebraic Atiyah-Hirzebruch spectral sequences over Ext charts.
//
// The Adams spectral sequences handled here have all their differentials
// forced by the values on powers of tau (or tau^2) together with a set of
// permanent ring classes and the module generators. That data defines one
// linear map D on the whole E2 chart, D(tau^n y) = d(tau^n) y, and the pages
// are those of the complex (E2, D) filtered by Adams filtration:
//   E_r^{s,f,w} = L(Z_r) / L(B_{r-1}),
//   Z_r = {x in F^f : D x in F^{f+r}},  B_{r-1} = D(Z_{r-1} of the stem above),
// where L takes the filtration-f component.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "motivic/chart.hpp"

namespace mot {

struct DifferentialPattern {
    BaseField field;
    std::string source;  // "tau" or "tau2"; empty when there are no differentials
    std::string target;  // "u" or "rhotau"
    std::vector<std::string> permanent;
    std::map<int, int> page;  // power n of `source` -> length r of d_r(source^n)

    bool empty() const { return source.empty(); }
    int length(int n) const;  // throws if n is outside the derived range
    // d_r(source^n) = target source^{n-1} h0^r, written with chart labels.
    std::string rule(int n) const;
    nlohmann::json to_json() const;
};

// Differentials of the Adams spectral sequence for HZ. The lengths are read
// off the orders Z/(q^n - 1)_2 of pi_{-1,-n}: for q = 1 mod 4 they are checked
// against the closed form nu2(q-1) + nu2(n); for q = 3 mod 4 the source is
// tau^2 and d_r(tau^{2m}) = rho tau tau^{2m-2} h0^r with r = nu2(q^{2m} - 1).
DifferentialPattern derive_hz_pattern(const BaseField& F, int max_weight);

struct Differential {
    int page = 0;
    TriDegree source, target;
    std::string source_label, target_label;
};

struct PageData {
    // Per tridegree: leading parts of cycles and of boundaries, in E2
    // coordinates. dim E = rank(cycles) - rank(boundaries).
    std::vector<f2::BitVec> cycles, boundaries;
    int dim() const { return static_cast<int>(cycles.size() - boundaries.size()); }
};

struct SSPage {
    std::string name;
    ExtChart e2;
    DifferentialPattern pattern;
    int last_page = 1;      // highest r with a nonzero d_r
    int reliable_fmax = 0;  // E-infinity is exact at or below this filtration
    int reliable_smax = 0;  // and at or below this stem
    std::vector<Differential> differentials;
    std::map<int, std::map<TriDegree, int>> page_dims;  // r -> dims of E_r, r = 2 .. last_page + 1
    std::map<TriDegree, PageData> einf;
    std::vector<TriDegree> undetermined;  // tridegrees where D could not be built (window edge)

    int einf_dim(TriDegree d) const;
    // Labels of an E-infinity basis (leading terms, sums written with " + ").
    std::vector<std::string> einf_labels(TriDegree d) const;
    nlohmann::json to_json() const;
};

// E-infinity as a chart: one class per basis vector of einf_labels, with the
// products by permanent ring generators that E2 induces on the quotient.
// Multiplication by the differential source (tau or tau2) is recorded too,
// as zero wherever the E2 product is not a permanent cycle; it only serves
// to group towers when drawing.
ExtChart einf_chart(const SSPage& P);

// Runs the spectral sequence of (E2, D). Throws when the pattern is not
// consistent with the chart's module structure or when a differential target
// is missing from the chart.
SSPage run_mass(const ExtChart& e2, const DifferentialPattern& pattern, const std::string& name = "");

// Groups per (stem, weight) column from towers in E-infinity. Multiplication
// by 2 is read as h0, plus rho h1 when rho is a ring generator, since h0 itself
// detects 2 + rho eta.
struct ColumnGroup {
    int s = 0, w = 0;
    int free_rank = 0;
    std::vector<int> cyclic;  // exponents k of Z/2^k, descending
    int log2_torsion_order() const;
    std::string str() const;  // "Z2 + Z/8 + Z/2", "0"
    bool operator==(const ColumnGroup& o) const { return free_rank == o.free_rank && cyclic == o.cyclic; }
};
struct AssembledGroups {
    std::map<std::pair<int, int>, ColumnGroup> columns;  // (s, w)
    const ColumnGroup* at(int s, int w) const;
};
AssembledGroups assemble_homotopy(const SSPage& P);

// Algebraic Atiyah-Hirzebruch spectral sequence for a comodule with one cell
// or with the three cells [0], [2], [3] of B0(1): d1 = h0, d2 = h1 and d3
// from the Massey products <alpha, h0, h1> on the module generators alpha of
// ker(h0), extended linearly over Ext(M2).
struct AahssD3 {
    std::string generator;  // label of alpha
    TriDegree degree;       // of alpha[3]
    std::string value;      // label sum of <alpha, h0, h1>, or "0"
    int indeterminacy = 0;
};
struct AahssResult {
    ExtChart einf;  // dims of E4 = E-infinity, provenance "aahss"
    std::vector<AahssD3> d3;
    int nonzero_d3 = 0;  // rank of d3 summed over the window
    std::map<int, std::map<TriDegree, int>> page_dims;  // 1..4
};
AahssResult run_aahss(const Comodule& M, const ExtChart& ring);

}  // namespace mot
