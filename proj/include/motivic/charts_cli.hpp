// Command layer: comodule expressions, SVG charts, text tables and the
// ext / mass / verify commands behind tools/charts_cli.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <iosfwd>
#include <vector>

#include "motivic/cooperations.hpp"
#include "motivic/report.hpp"
#include "motivic/spectralsequence.hpp"

namespace mot {

// Expression grammar (whitespace is ignored):
//   expr := "M2" | "B0(" k ")" | "B1(" k ")"
//         | "tensor(" expr "," expr ")"
//         | "suspend(" expr "," int "," int ")"
//         | "adams_cover(" expr "," m ")"
// adams_cover acts on the chart, so it may only appear outermost.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

struct ChartTarget {
    std::string text;  // the expression, whitespace removed
    Comodule comodule;
    int cover = 0;
};
ChartTarget parse_target(const std::string& expr, const BaseField& F, FragmentKind over = FragmentKind::A1Dual);

struct RunConfig {
    BaseField field;
    ExtWindow window{-2, 12, 8, -8, 8};
    bool window_set = false;  // verify suites use their own window unless set
    FragmentKind over = FragmentKind::A1Dual;
    std::optional<int> truncate, h1_truncate;  // ext only, stem bounds
    bool split = true;                          // coweight panels over q = 3 mod 4
    Caps caps;
    std::string cache_dir;
    std::string out_dir = ".";
};

// Field from --field and --q. An empty class follows q; "c" ignores q.
BaseField field_from_flags(const std::string& field_class, int q);

struct SvgStyle {
    bool coweight_split = false;  // one panel per coweight parity
    // Hide classes of the form tau * x (tau2 * x over q = 3 mod 4) and draw x
    // filled when tau * x is nonzero, open otherwise.
    bool compact = true;
    std::string title;
};
// Deterministic SVG 1.1. x = stem, y = filtration; classes sharing (s, f)
// sit side by side in weight order. h0 edges are vertical, h1 diagonal,
// u / rho edges horizontal; an edge is dashed when the target's label is not
// the plain product of the generator and the source label.
std::string chart_svg(const ExtChart& E, const SvgStyle& style);

// "s\tf\tw\tdim\tlabels" per nonzero tridegree, sorted.
std::string dims_table(const ExtChart& E);
std::string groups_table(const AssembledGroups& G, const SSPage& P);
std::string differentials_table(const SSPage& P);

// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, const std::string& content);

// Each command returns the paths it wrote. verify also sets `ok`.
std::vector<std::string> cmd_ext(const std::string& expr, const RunConfig& cfg);
std::vector<std::string> cmd_mass(const std::string& target, int n, bool groups, const RunConfig& cfg);
std::vector<std::string> cmd_aahss(const std::string& expr, const RunConfig& cfg);
struct VerifyOutcome {
    CheckReport report;
    std::vector<std::string> written;
};
VerifyOutcome cmd_verify(const std::string& suite, const std::string& target, int kmax, const RunConfig& cfg);

std::vector<std::string> verify_suites();

// The command line itself (arguments without the program name). Returns the
// exit status: 0 on success, 1 when a verify suite fails, 2 on usage errors.
// With --dry-run the arguments are checked and nothing is computed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mot
