// Ext charts: per-tridegree F2 bases with stable labels and multiplication
// tables by the algebra generators of Ext(M2, M2). Charts are plain data, so
// the spectral sequence code, the cooperations code and the SVG writer work
// on them without touching a resolution.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "motivic/ext.hpp"

namespace mot {

struct ExtChart {
    std::string name;
    BaseField field;
    FragmentKind over = FragmentKind::A1Dual;
    ExtWindow window;
    std::string provenance;  // "resolution", "cobar", "aahss", "sum", ...

    // Basis labels per tridegree; tridegrees of dimension zero are absent.
    std::map<TriDegree, std::vector<std::string>> classes;
    // Optional per-class tag (summand of a direct sum, for instance).
    std::map<TriDegree, std::vector<std::string>> tags;

    // Ring generator name -> its tridegree.
    std::map<std::string, TriDegree> ring_gens;
    // products[g][X][i] = g * (class i of X), in the basis of X + |g|.
    // Recorded only when both X and X + |g| lie in the window.
    std::map<std::string, std::map<TriDegree, std::vector<f2::BitVec>>> products;

    int dim(TriDegree d) const;
    bool has_product(const std::string& g) const { return products.count(g) > 0; }
    // g * v for v in the basis of d; nullopt when the product was not recorded.
    std::optional<f2::BitVec> multiply(const std::string& g, TriDegree d, const f2::BitVec& v) const;
    // Index of a label in its tridegree, or -1.
    int find(TriDegree d, const std::string& label) const;
    std::vector<TriDegree> degrees() const;

    nlohmann::json to_json() const;
    static ExtChart from_json(const nlohmann::json& j);
};

// Generators of Ext(M2, M2) as an algebra, in the order used for labels.
std::vector<std::string> ring_generator_names(FragmentKind over, const BaseField& F);

struct ChartOptions {
    bool products = true;
    std::string cache_dir;
};

// Minimal-resolution chart of Ext(M2, M) over the window. With products on,
// the basis is re-chosen as monomials (ring generators times module
// generators) and labelled accordingly.
ExtChart ext_minimal(const Comodule& M, const ExtWindow& W, const ChartOptions& opt = {});
// Cobar-complex chart (dimensions and positional labels only).
ExtChart ext_cobar(const Comodule& M, const ExtWindow& W);

// First tridegree where the dimensions of two charts differ inside the
// intersection of their windows.
std::optional<TriDegree> first_dim_mismatch(const ExtChart& a, const ExtChart& b);

// Products of chart classes by a named element given as a word in ring
// generators ("h0", "tau2 h1", ...), as a map source -> images.
struct ModuleAction {
    std::string element;
    TriDegree degree;
    std::map<TriDegree, std::vector<f2::BitVec>> images;
};
ModuleAction module_action(const ExtChart& E, const std::string& element);

// b-power torsion of each class: b^N x = 0 inside the window (torsion),
// some power leaves the window while nonzero (undetermined), or b^N x stays
// nonzero up to the window edge with at least one step seen (free).
enum class BTorsion { Torsion, Free, Undetermined };
struct V1Quotient {
    std::map<TriDegree, std::vector<BTorsion>> status;
    // dim of E / (b-torsion) per tridegree, counting only determined classes
    std::map<TriDegree, int> quotient_dims;
    int undetermined = 0;
    int total = 0;
};
V1Quotient v1_quotient(const ExtChart& E);
// Same, counting only the classes inside `report` (b-steps may use all of E).
V1Quotient v1_quotient(const ExtChart& E, const ExtWindow& report);

}  // namespace mot
