#include "motivic/charts_cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "motivic/cobar.hpp"

namespace mot {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

// ---------------------------------------------------------------------------
// Expressions

namespace {

class ExprParser {
public:
    ExprParser(const std::string& s, const BaseField& F, FragmentKind over) : s_(s), F_(F), over_(over) {}

    ChartTarget top() {
        ChartTarget t;
        skip();
        const std::size_t at = pos_;
        if (peek_ident() == "adams_cover") {
            ident();
            expect('(');
            t.comodule = expr();
            expect(',');
            t.cover = integer();
            if (t.cover < 0) throw ParseError("the cover index must be nonnegative", at);
            expect(')');
        } else {
            t.comodule = expr();
        }
        skip();
        if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        for (char c : s_)
            if (!std::isspace(static_cast<unsigned char>(c))) t.text += c;
        return t;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string peek_ident() {
        skip();
        std::size_t e = pos_;
        while (e < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_')) ++e;
        return s_.substr(pos_, e - pos_);
    }
    std::string ident() {
        std::string id = peek_ident();
        if (id.empty()) throw ParseError("expected a name", pos_);
        pos_ += id.size();
        return id;
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but the expression ended", pos_);
        if (s_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    int integer() {
        skip();
        const std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits) throw ParseError("expected an integer", start);
        if (pos_ - digits > 6) throw ParseError("integer out of range", start);
        return std::stoi(s_.substr(start, pos_ - start));
    }

    Comodule expr() {
        Comodule m = primary();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            const std::size_t at = pos_++;
            const int n = integer();
            if (n < 1) throw ParseError("tensor powers start at 1", at);
            m = tensor_power(m, n);
        }
        return m;
    }

    Comodule primary() {
        skip();
        const std::size_t at = pos_;
        const std::string id = ident();
        if (id == "M2") return unit_comodule(over_, F_);
        if (id == "B0" || id == "B1") {
            expect('(');
            const std::size_t kat = pos_;
            const int k = integer();
            if (k < 0) throw ParseError("Brown-Gitler index must be nonnegative", kat);
            expect(')');
            return brown_gitler(id == "B0" ? 0 : 1, k, F_, over_);
        }
        if (id == "tensor") {
            expect('(');
            Comodule a = expr();
            expect(',');
            Comodule b = expr();
            expect(')');
            return tensor(a, b);
        }
        if (id == "suspend") {
            expect('(');
            Comodule a = expr();
            expect(',');
            const int ds = integer();
            expect(',');
            const int dw = integer();
            expect(')');
            return suspend(a, ds, dw);
        }
        if (id == "adams_cover") throw ParseError("adams_cover may only be the outermost operation", at);
        throw ParseError("unknown name '" + id + "'", at);
    }

    const std::string& s_;
    const BaseField& F_;
    FragmentKind over_;
    std::size_t pos_ = 0;
};

}  // namespace

ChartTarget parse_target(const std::string& expr, const BaseField& F, FragmentKind over) {
    return ExprParser(expr, F, over).top();
}

BaseField field_from_flags(const std::string& field_class, int q) {
    if (field_class == "c") return BaseField::complex_like();
    if (field_class.empty()) return BaseField::from_q(q > 0 ? q : 5);
    if (field_class != "q1" && field_class != "q3")
        throw std::invalid_argument("--field must be q1, q3 or c, not '" + field_class + "'");
    const int want = field_class == "q1" ? 1 : 3;
    if (q <= 0) q = want == 1 ? 5 : 3;
    if (q % 4 != want)
        throw std::invalid_argument("q = " + std::to_string(q) + " is not " + std::to_string(want) + " mod 4");
    return BaseField::from_q(q);
}

// ---------------------------------------------------------------------------
// Text tables and files

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

}  // namespace

std::string dims_table(const ExtChart& E) {
    std::string out = "s\tf\tw\tdim\tclasses\n";
    for (const auto& [d, l] : E.classes) {
        if (l.empty() || !E.window.contains(d)) continue;
        out += std::to_string(d.s) + "\t" + std::to_string(d.f) + "\t" + std::to_string(d.w) + "\t" +
               std::to_string(l.size()) + "\t" + join(l, "; ") + "\n";
    }
    return out;
}

std::string groups_table(const AssembledGroups& G, const SSPage& P) {
    std::string out = "# exact for f <= " + std::to_string(P.reliable_fmax) + " and s <= " +
                      std::to_string(P.reliable_smax) + "\n";
    out += "s\tw\tgroup\n";
    for (const auto& [k, g] : G.columns)
        out += std::to_string(k.first) + "\t" + std::to_string(k.second) + "\t" + g.str() + "\n";
    return out;
}

std::string differentials_table(const SSPage& P) {
    std::string out;
    for (const auto& [n, r] : P.pattern.page) out += "# " + P.pattern.rule(n) + "\n";
    out += "page\tsource\ttarget\tfrom\tto\n";
    auto ds = P.differentials;
    std::sort(ds.begin(), ds.end(), [](const Differential& a, const Differential& b) {
        return std::tie(a.source, a.page, a.source_label) < std::tie(b.source, b.page, b.source_label);
    });
    for (const auto& d : ds)
        out += std::to_string(d.page) + "\t" + d.source.str() + "\t" + d.target.str() + "\t" + d.source_label + "\t" +
               d.target_label + "\n";
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    const fs::path tmp = p.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, p);
}

// ---------------------------------------------------------------------------
// SVG

namespace {

// Label as a monomial: token -> exponent. nullopt for sums.
std::optional<std::map<std::string, int>> monomial(const std::string& label) {
    if (label.find(" + ") != std::string::npos) return std::nullopt;
    std::map<std::string, int> m;
    std::istringstream in(label);
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        int e = 1;
        if (auto c = tok.find('^'); c != std::string::npos) {
            try {
                e = std::stoi(tok.substr(c + 1));
            } catch (const std::exception&) {
                return std::nullopt;
            }
            tok = tok.substr(0, c);
        }
        m[tok] += e;
    }
    return m;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '&') o += "&amp;";
        else if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '"') o += "&quot;";
        else o += c;
    }
    return o;
}

const char* const kPalette[] = {"#1f3b73", "#b2182b", "#1b7837", "#762a83", "#e08214", "#01665e", "#8c510a", "#4d4d4d"};

struct Dot {
    double x = 0, y = 0;
    bool filled = true;
    bool arrow = false;
    std::string color, label;
};

}  // namespace

std::string chart_svg(const ExtChart& E, const SvgStyle& style) {
    const ExtWindow& W = E.window;
    const double cell = 36, left = 44, top = style.title.empty() ? 16 : 36, bottom = 34, gap = 40;
    const int ncol = W.smax - W.smin + 1, nrow = W.fmax + 1;
    const double pw = ncol * cell, ph = nrow * cell;
    const int panels = style.coweight_split ? 2 : 1;
    auto panel_of = [&](TriDegree d) { return style.coweight_split ? (((d.s - d.w) % 2) + 2) % 2 : 0; };

    std::string tau;
    if (style.compact) {
        if (E.has_product("tau")) tau = "tau";
        else if (E.has_product("tau2")) tau = "tau2";
    }
    // Classes hidden as tau-multiples, and classes with a nonzero tau-multiple.
    std::set<std::pair<TriDegree, std::size_t>> hidden, towered;
    if (!tau.empty())
        for (const auto& [d, rows] : E.products.at(tau))
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].none()) continue;
                towered.insert({d, i});
                if (rows[i].count() == 1) hidden.insert({d + E.ring_gens.at(tau), static_cast<std::size_t>(rows[i].first())});
            }

    std::map<std::string, std::string> color;
    for (const auto& [d, tags] : E.tags)
        for (const auto& t : tags) color.emplace(t, "");
    {
        std::size_t i = 0;
        for (auto& [t, c] : color) c = kPalette[i++ % (sizeof kPalette / sizeof *kPalette)];
    }

    const double width = left + panels * pw + (panels - 1) * gap + 16;
    const double legend_rows = static_cast<double>(color.size() > 8 ? 8 : color.size());
    const double height = top + ph + bottom + legend_rows * 14;
    auto origin_x = [&](int panel) { return left + panel * (pw + gap); };

    std::map<std::pair<TriDegree, std::size_t>, Dot> dots;
    // Group visible classes by (panel, s, f), ordered by weight then index.
    std::map<std::tuple<int, int, int>, std::vector<std::pair<TriDegree, std::size_t>>> cells;
    for (const auto& [d, labels] : E.classes) {
        if (!W.contains(d)) continue;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (!hidden.count({d, i})) cells[{panel_of(d), d.s, d.f}].push_back({d, i});
    }
    const TriDegree h0d = E.ring_gens.count("h0") ? E.ring_gens.at("h0") : TriDegree{0, 1, 0};
    for (const auto& [key, members] : cells) {
        const auto [panel, s, f] = key;
        const std::size_t n = members.size();
        const double cx = origin_x(panel) + (s - W.smin + 0.5) * cell;
        const double cy = top + ph - (f + 0.5) * cell;
        const double step = n > 1 ? std::min(7.0, (cell - 8) / static_cast<double>(n - 1)) : 0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& [d, i] = members[j];
            Dot dot;
            dot.x = cx + (static_cast<double>(j) - (static_cast<double>(n) - 1) / 2) * step;
            dot.y = cy;
            dot.filled = tau.empty() || towered.count({d, i}) || !W.contains(d + E.ring_gens.at(tau));
            dot.label = E.classes.at(d)[i];
            auto t = E.tags.find(d);
            dot.color = t != E.tags.end() && i < t->second.size() ? color[t->second[i]] : kPalette[0];
            // A tower that runs off the top edge gets an arrow.
            if (d.f == W.fmax && E.has_product("h0")) {
                auto src = E.products.at("h0").find(d - h0d);
                if (src != E.products.at("h0").end())
                    for (const auto& v : src->second)
                        if (v.get(i)) dot.arrow = true;
            }
            dots[{d, i}] = dot;
        }
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out += "<text x=\"" + num(left) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">" + esc(style.title) +
               "</text>\n";
    for (int p = 0; p < panels; ++p) {
        const double x0 = origin_x(p), y0 = top;
        out += "<g stroke=\"#e6e6e6\" stroke-width=\"0.5\">\n";
        for (int c = 0; c <= ncol; ++c)
            out += "<line x1=\"" + num(x0 + c * cell) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0 + c * cell) +
                   "\" y2=\"" + num(y0 + ph) + "\"/>\n";
        for (int r = 0; r <= nrow; ++r)
            out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0 + r * cell) + "\" x2=\"" + num(x0 + pw) + "\" y2=\"" +
                   num(y0 + r * cell) + "\"/>\n";
        out += "</g>\n<g font-family=\"sans-serif\" font-size=\"9\" fill=\"#555555\">\n";
        for (int s = W.smin; s <= W.smax; ++s)
            if (s % 2 == 0)
                out += "<text x=\"" + num(x0 + (s - W.smin + 0.5) * cell - 3) + "\" y=\"" + num(y0 + ph + 12) + "\">" +
                       std::to_string(s) + "</text>\n";
        if (p == 0)
            for (int f = 0; f <= W.fmax; f += 2)
                out += "<text x=\"" + num(x0 - 16) + "\" y=\"" + num(y0 + ph - (f + 0.5) * cell + 3) + "\">" +
                       std::to_string(f) + "</text>\n";
        if (style.coweight_split)
            out += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + ph + 26) + "\">coweight " + (p ? "odd" : "even") +
                   "</text>\n";
        else
            out += "<text x=\"" + num(x0 + pw / 2 - 10) + "\" y=\"" + num(y0 + ph + 26) + "\">stem</text>\n";
        out += "</g>\n";
    }

    // Edges: h0 vertical, h1 diagonal, u / rho horizontal.
    out += "<g stroke=\"#333333\" stroke-width=\"0.8\" fill=\"none\">\n";
    for (const char* g : {"h0", "h1", "u", "rho"}) {
        if (!E.has_product(g)) continue;
        for (const auto& [d, rows] : E.products.at(g)) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto a = dots.find({d, i});
                if (a == dots.end()) continue;
                const TriDegree t = d + E.ring_gens.at(g);
                auto src = monomial(E.classes.at(d)[i]);
                for (std::size_t j = 0; j < rows[i].size(); ++j) {
                    if (!rows[i].get(j)) continue;
                    auto b = dots.find({t, j});
                    if (b == dots.end()) continue;
                    bool dashed = false;
                    if (src) {
                        auto expect = *src;
                        expect[g] += 1;
                        auto got = monomial(E.classes.at(t)[j]);
                        dashed = (rows[i].count() > 1) || (got && *got != expect);
                    }
                    out += "<line x1=\"" + num(a->second.x) + "\" y1=\"" + num(a->second.y) + "\" x2=\"" +
                           num(b->second.x) + "\" y2=\"" + num(b->second.y) + "\"" +
                           (dashed ? " stroke-dasharray=\"3,2\"" : "") + "/>\n";
                }
            }
        }
    }
    out += "</g>\n";

    out += "<g stroke-width=\"0.9\">\n";
    for (const auto& [key, dot] : dots) {
        if (dot.arrow)
            out += "<path d=\"M " + num(dot.x) + " " + num(dot.y) + " L " + num(dot.x) + " " + num(dot.y - 14) +
                   " M " + num(dot.x - 3) + " " + num(dot.y - 10) + " L " + num(dot.x) + " " + num(dot.y - 14) +
                   " L " + num(dot.x + 3) + " " + num(dot.y - 10) + "\" stroke=\"" + dot.color +
                   "\" fill=\"none\"/>\n";
        out += "<circle cx=\"" + num(dot.x) + "\" cy=\"" + num(dot.y) + "\" r=\"2.4\" stroke=\"" + dot.color +
               "\" fill=\"" + (dot.filled ? dot.color : std::string("white")) + "\"><title>" + esc(dot.label) +
               " " + key.first.str() + "</title></circle>\n";
    }
    out += "</g>\n";

    if (!color.empty()) {
        out += "<g font-family=\"sans-serif\" font-size=\"9\">\n";
        double y = top + ph + bottom + 4;
        std::size_t shown = 0;
        for (const auto& [t, c] : color) {
            if (shown++ == 8) break;
            out += "<circle cx=\"" + num(left + 4) + "\" cy=\"" + num(y) + "\" r=\"2.4\" fill=\"" + c + "\"/>";
            out += "<text x=\"" + num(left + 12) + "\" y=\"" + num(y + 3) + "\">" + esc(t) + "</text>\n";
            y += 14;
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

std::string slug(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

std::string field_slug(const BaseField& F) { return F.q ? "q" + std::to_string(F.q) : "c"; }

std::string out_path(const RunConfig& cfg, const std::string& stem, const std::string& ext) {
    return (std::filesystem::path(cfg.out_dir) / (stem + ext)).string();
}

ChartOptions chart_options(const RunConfig& cfg, bool products = true) {
    ChartOptions o;
    o.products = products;
    o.cache_dir = cfg.cache_dir;
    return o;
}

void save(std::vector<std::string>& written, const std::string& path, const std::string& content) {
    write_atomic(path, content);
    written.push_back(path);
}

int pattern_weight(const ExtWindow& W) { return std::max(48, 2 * (W.wmax - W.wmin + W.smax - W.smin) + 8); }

}  // namespace

std::vector<std::string> cmd_ext(const std::string& expr, const RunConfig& cfg) {
    const ChartTarget T = parse_target(expr, cfg.field, cfg.over);
    ExtWindow W = cfg.window;
    W.fmax += T.cover;
    ExtChart E = ext_minimal(T.comodule, W, chart_options(cfg));
    std::string name = T.text;
    if (T.cover) {
        E = adams_cover(E, T.cover);
        E.window = cfg.window;
    }
    if (cfg.h1_truncate) {
        E = h1_truncate(E, *cfg.h1_truncate);
        name = "t^h1>=" + std::to_string(*cfg.h1_truncate) + "(" + name + ")";
    } else if (cfg.truncate) {
        E = truncate_stem(E, *cfg.truncate);
        name = "t>=" + std::to_string(*cfg.truncate) + "(" + name + ")";
    }
    std::string stem = "ext_" + slug(name) + (cfg.over == FragmentKind::A0Dual ? "_a0" : "") + "_" + field_slug(cfg.field);
    SvgStyle st;
    st.coweight_split = cfg.split && cfg.field.kind == FieldKind::QThree;
    st.title = "Ext over " + std::string(cfg.over == FragmentKind::A0Dual ? "A(0)" : "A(1)") + " of " + name + ", " +
               cfg.field.describe();
    std::vector<std::string> written;
    save(written, out_path(cfg, stem, ".svg"), chart_svg(E, st));
    save(written, out_path(cfg, stem, ".tsv"), dims_table(E));
    save(written, out_path(cfg, stem, ".json"), E.to_json().dump(1) + "\n");
    return written;
}

std::vector<std::string> cmd_mass(const std::string& target, int n, bool groups, const RunConfig& cfg) {
    const BaseField& F = cfg.field;
    const ExtWindow& W = cfg.window;
    ExtChart E2;
    std::string name = target;
    if (target == "HZ") {
        E2 = ext_minimal(unit_comodule(FragmentKind::A0Dual, F), W, chart_options(cfg));
    } else if (target == "kq") {
        E2 = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), W, chart_options(cfg));
    } else if (target == "ksp") {
        E2 = ext_minimal(brown_gitler(0, 1, F), W, chart_options(cfg));
    } else if (target == "kqkq") {
        E2 = cooperations_e2(std::min(cfg.caps.k_max, 4), F, W, cfg.cache_dir, cfg.caps);
        name = "kq(x)kq";
    } else if (target == "nline") {
        E2 = n_line_e2(n, F, W, cfg.cache_dir, cfg.caps);
        name = std::to_string(n) + "-line";
    } else {
        throw std::invalid_argument("mass target must be HZ, kq, ksp, kqkq or nline, not '" + target + "'");
    }
    const SSPage P = run_mass(E2, derive_hz_pattern(F, pattern_weight(W)), name);
    const std::string stem = "mass_" + slug(target == "nline" ? "nline" + std::to_string(n) : target) + "_" + field_slug(F);
    SvgStyle st;
    st.title = "E-infinity of the motivic Adams spectral sequence for " + name + ", " + F.describe();
    std::vector<std::string> written;
    save(written, out_path(cfg, stem, ".svg"), chart_svg(einf_chart(P), st));
    std::string diffs = differentials_table(P);
    if (target == "kqkq" || target == "nline")
        diffs += "# h1-divisible sources: " + std::to_string(h1_divisible_sources(P).size()) + "\n";
    save(written, out_path(cfg, stem, "_differentials.tsv"), diffs);
    save(written, out_path(cfg, stem, "_page.json"), P.to_json().dump(1) + "\n");
    if (groups) save(written, out_path(cfg, stem, "_groups.tsv"), groups_table(assemble_homotopy(P), P));
    return written;
}

std::vector<std::string> cmd_aahss(const std::string& expr, const RunConfig& cfg) {
    const ChartTarget T = parse_target(expr, cfg.field, FragmentKind::A1Dual);
    if (T.cover) throw std::invalid_argument("aahss takes a comodule, not an Adams cover");
    ExtWindow W = cfg.window;
    W.fmax += 1;
    const ExtChart R = ext_minimal(unit_comodule(FragmentKind::A1Dual, cfg.field), W, chart_options(cfg));
    const AahssResult A = run_aahss(T.comodule, R);
    const std::string stem = "aahss_" + slug(T.text) + "_" + field_slug(cfg.field);
    SvgStyle st;
    st.coweight_split = cfg.split && cfg.field.kind == FieldKind::QThree;
    st.title = "E-infinity of the algebraic AHSS for " + T.text + ", " + cfg.field.describe();
    std::string d3 = "generator\tdegree\tvalue\tindeterminacy\n";
    for (const auto& d : A.d3)
        d3 += d.generator + "[3]\t" + d.degree.str() + "\t" + d.value + "\t" + std::to_string(d.indeterminacy) + "\n";
    d3 += "# rank of d3 over the window: " + std::to_string(A.nonzero_d3) + "\n";
    std::vector<std::string> written;
    save(written, out_path(cfg, stem, ".svg"), chart_svg(A.einf, st));
    save(written, out_path(cfg, stem, ".tsv"), dims_table(A.einf));
    save(written, out_path(cfg, stem, "_d3.tsv"), d3);
    return written;
}

// ---------------------------------------------------------------------------
// Verify suites

namespace {

CheckRow row(std::string name, bool pass, std::string detail = {}, std::optional<TriDegree> at = std::nullopt) {
    CheckRow r;
    r.name = std::move(name);
    r.pass = pass;
    r.detail = std::move(detail);
    r.first_mismatch = at;
    return r;
}

ExtWindow suite_window(const RunConfig& cfg, ExtWindow def) { return cfg.window_set ? cfg.window : def; }

CheckReport suite_massey(const RunConfig& cfg) {
    const BaseField& F = cfg.field;
    if (F.kind != FieldKind::QThree)
        throw std::invalid_argument("the massey suite needs rho, so q = 3 mod 4 (the bracket <u,h0,h1> is undefined)");
    const ExtWindow W = suite_window(cfg, {-2, 4, 4, -4, 4});
    const Comodule M2 = unit_comodule(FragmentKind::A1Dual, F);
    const ExtChart R = ext_minimal(M2, W, chart_options(cfg));
    const CobarComplex C(M2);
    const MasseyTriple T = massey_triple(C, R, R.ring_gens.at("rho"), "rho", R.ring_gens.at("h0"), "h0",
                                         R.ring_gens.at("h1"), "h1");
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < T.value.size(); ++i)
        if (T.value.get(i)) terms.push_back(R.classes.at(T.degree)[i]);
    const std::string value = terms.empty() ? "0" : join(terms, " + ");
    CheckReport rep;
    rep.add(row("massey <rho,h0,h1> = tauh1", value == "tauh1", "value " + value + " in " + T.degree.str(),
                value == "tauh1" ? std::nullopt : std::optional<TriDegree>(T.degree)));
    rep.add(row("massey <rho,h0,h1> indeterminacy 0", T.indeterminacy_dim == 0,
                "dim " + std::to_string(T.indeterminacy_dim)));
    return rep;
}

CheckReport suite_hz(const RunConfig& cfg) {
    const BaseField& F = cfg.field;
    const ExtWindow W = suite_window(cfg, {-2, 1, 12, -9, 1});
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A0Dual, F), W, chart_options(cfg));
    const SSPage P = run_mass(E, derive_hz_pattern(F, pattern_weight(W)), "HZ");
    const AssembledGroups G = assemble_homotopy(P);
    CheckReport rep;
    if (F.has_gen())
        for (int n = 1; n <= std::min(8, -W.wmin); ++n) {
            const ColumnGroup* g = G.at(-1, -n);
            const int want = nu2_pow_minus_one(F.q, n);
            const bool ok = g && g->free_rank == 0 && g->cyclic.size() == 1 && g->log2_torsion_order() == want;
            rep.add(row("hz pi(-1," + std::to_string(-n) + ") = Z/2^" + std::to_string(want), ok,
                        "got " + (g ? g->str() : std::string("0")),
                        ok ? std::nullopt : std::optional<TriDegree>(TriDegree{-1, 0, -n})));
        }
    {
        bool ok = true;
        std::optional<TriDegree> bad;
        std::string got;
        for (int w = W.wmin; w <= W.wmax; ++w) {
            const ColumnGroup* g = G.at(0, w);
            const std::string s = g ? g->str() : "0";
            if (s != (w == 0 ? "Z2" : "0") && !bad) {
                ok = false;
                bad = TriDegree{0, 0, w};
                got = s;
            }
        }
        rep.add(row("hz stem 0 is a single Z2", ok, got.empty() ? "" : "got " + got, bad));
    }
    auto has = [&](int page, const std::string& from, const std::string& to) {
        for (const auto& d : P.differentials)
            if (d.page == page && d.source_label == from && d.target_label == to) return true;
        return false;
    };
    if (F.kind == FieldKind::QOne) {
        const int r1 = nu2(F.q - 1), r2 = r1 + 1;
        const std::string t1 = "u h0^" + std::to_string(r1), t2 = "u tau h0^" + std::to_string(r2);
        rep.add(row("hz d" + std::to_string(r1) + "(tau) = " + t1, has(r1, "tau", t1)));
        rep.add(row("hz d" + std::to_string(r2) + "(tau^2) = " + t2, has(r2, "tau^2", t2)));
    } else if (F.kind == FieldKind::QThree) {
        const int r1 = nu2_pow_minus_one(F.q, 2), r2 = nu2_pow_minus_one(F.q, 4);
        const std::string t1 = "rhotau h0^" + std::to_string(r1), t2 = "rhotau tau2 h0^" + std::to_string(r2);
        rep.add(row("hz d" + std::to_string(r1) + "(tau2) = " + t1, has(r1, "tau2", t1)));
        rep.add(row("hz d" + std::to_string(r2) + "(tau2^2) = " + t2, has(r2, "tau2^2", t2)));
    }
    return rep;
}

// Friedlander's KO_n and KSp_n of F_q (n > 0) as 2-completed groups.
ColumnGroup friedlander(bool symplectic, int n, int q) {
    ColumnGroup g;
    const int r = n % 8;
    if (r == 3 || r == 7) {
        g.cyclic = {nu2_pow_minus_one(q, (n + 1) / 2)};
        return g;
    }
    const int shifted = symplectic ? (r + 4) % 8 : r;
    if (shifted == 0 || shifted == 2) g.cyclic = {1};
    if (shifted == 1) g.cyclic = {1, 1};
    return g;
}

CheckReport suite_kq(const RunConfig& cfg) {
    const BaseField& F = cfg.field;
    if (!F.has_gen()) throw std::invalid_argument("the kq suite compares with finite fields; pass --q");
    const ExtWindow W = suite_window(cfg, {-2, 13, 16, -8, 15});
    const auto pattern = derive_hz_pattern(F, pattern_weight(W));
    CheckReport rep;
    std::map<std::string, AssembledGroups> G;
    for (const std::string which : {"kq", "ksp"}) {
        const Comodule M = which == "kq" ? unit_comodule(FragmentKind::A1Dual, F) : brown_gitler(0, 1, F);
        const SSPage P = run_mass(ext_minimal(M, W, chart_options(cfg)), pattern, which);
        G[which] = assemble_homotopy(P);
        // Friedlander's table starts at s = 1; s = 0 uses GW(F_q) for kq.
        const int smax = std::min({11, W.smax - 1, P.reliable_smax});
        for (int s = which == "kq" ? 0 : 4; s <= smax; ++s) {
            ColumnGroup want;
            if (s == 0) {
                want.free_rank = 1;
                want.cyclic = {1};
            } else {
                want = friedlander(which == "ksp", s, F.q);
            }
            const ColumnGroup* g = G[which].at(s, 0);
            const ColumnGroup got = g ? *g : ColumnGroup{};
            const bool ok = got == want;
            rep.add(row(which + " pi(" + std::to_string(s) + ",0) = " + want.str(), ok, "got " + got.str(),
                        ok ? std::nullopt : std::optional<TriDegree>(TriDegree{s, 0, 0})));
        }
    }
    const ExtWindow WH{W.smin, 1, W.fmax, W.wmin, 1};
    const SSPage H = run_mass(ext_minimal(unit_comodule(FragmentKind::A0Dual, F), WH, chart_options(cfg)), pattern, "HZ");
    const AssembledGroups GH = assemble_homotopy(H);
    for (const bool zero_stem : {false, true}) {
        bool ok = true;
        std::optional<TriDegree> bad;
        std::string detail;
        for (int s = W.smin; s <= 0; ++s) {
            if ((s == 0) != zero_stem) continue;
            for (int w = W.wmin; w <= 0; ++w) {
                const ColumnGroup* a = G["kq"].at(s, w);
                const ColumnGroup* b = GH.at(s, w);
                const std::string x = a ? a->str() : "0", y = b ? b->str() : "0";
                if (x != y && ok) {
                    ok = false;
                    bad = TriDegree{s, 0, w};
                    detail = "kq " + x + " vs HZ " + y;
                }
            }
        }
        rep.add(row(zero_stem ? "kq = HZ at s = 0" : "kq = HZ for s < 0", ok, detail, bad));
    }
    return rep;
}

CheckReport suite_aahss(const RunConfig& cfg) {
    const BaseField& F = cfg.field;
    const ExtWindow W = suite_window(cfg, {-4, 14, 8, -8, 12});
    const ExtChart R = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), W, chart_options(cfg));
    const Comodule M = brown_gitler(0, 1, F);
    const AahssResult A = run_aahss(M, R);
    const ExtChart D = ext_minimal(M, A.einf.window, chart_options(cfg, false));
    CheckReport rep;
    const auto mm = first_dim_mismatch(A.einf, D);
    rep.add(row("aahss B0(1) E-infinity = Ext(B0(1))", !mm, "", mm));
    std::vector<std::string> nonzero;
    for (const auto& d : A.d3)
        if (d.value != "0") nonzero.push_back(d.generator + "[3] -> " + d.value + "[0]");
    if (F.kind == FieldKind::QThree) {
        const bool ok = nonzero == std::vector<std::string>{"rho[3] -> tauh1[0]"};
        rep.add(row("aahss d3 is only rho[3] -> tauh1[0]", ok, join(nonzero, ", ")));
    } else {
        rep.add(row("aahss d3 = 0", nonzero.empty() && A.nonzero_d3 == 0, join(nonzero, ", ")));
    }
    return rep;
}

// The cobar complex grows with the coweight s - w, so the comparison runs
// over the band -2 <= s - w <= 4 in each stem.
CheckReport suite_oracle(const RunConfig& cfg, const std::string& target) {
    const ExtWindow W = suite_window(cfg, {-2, 12, 6, -6, 14});
    std::vector<std::string> targets = {"M2", "B0(1)", "B0(2)", "tensor(B0(1),B0(1))"};
    if (!target.empty()) targets = {target};
    CheckReport rep;
    for (const auto& t : targets) {
        const ChartTarget T = parse_target(t, cfg.field);
        if (T.cover) throw std::invalid_argument("the oracle suite compares comodules, not covers");
        const CobarComplex C(T.comodule);
        const ExtChart b = ext_minimal(T.comodule, W, chart_options(cfg, false));
        std::optional<TriDegree> mm;
        int classes = 0;
        for (int f = 0; f <= W.fmax && !mm; ++f)
            for (int s = W.smin; s <= W.smax && !mm; ++s)
                for (int w = std::max(W.wmin, s - 4); w <= std::min(W.wmax, s + 2); ++w) {
                    const TriDegree d{s, f, w};
                    classes += b.dim(d);
                    if (C.dim(d) != b.dim(d)) {
                        mm = d;
                        break;
                    }
                }
        rep.add(row("oracle cobar = minimal resolution for " + T.text, !mm,
                    std::to_string(classes) + " classes, f <= " + std::to_string(W.fmax), mm));
    }
    return rep;
}

CheckReport suite_coop(const RunConfig& cfg, int kmax) {
    const BaseField& F = cfg.field;
    const ExtWindow W = suite_window(cfg, {-2, 16, 8, -6, 10});
    const ExtChart E = cooperations_e2(kmax, F, W, cfg.cache_dir, cfg.caps);
    const ExtChart O = cooperations_oracle(kmax, F, W, cfg.cache_dir);
    CheckReport rep;
    const auto mm = first_dim_mismatch(E, O);
    rep.add(row("coop E2 = oracle for k <= " + std::to_string(kmax), !mm, "", mm));
    const SSPage P = run_mass(E, derive_hz_pattern(F, pattern_weight(W)), "kq(x)kq");
    const auto H = h1_divisible_sources(P);
    rep.add(row("coop no h1-divisible differential sources", H.empty(),
                std::to_string(P.differentials.size()) + " differentials",
                H.empty() ? std::nullopt : std::optional<TriDegree>(H.front().source)));
    for (int n = 1; n <= 2; ++n) {
        const SSPage L = run_mass(n_line_e2(n, F, W, cfg.cache_dir, cfg.caps),
                                  derive_hz_pattern(F, pattern_weight(W)), std::to_string(n) + "-line");
        const auto HL = h1_divisible_sources(L);
        rep.add(row("coop " + std::to_string(n) + "-line has no h1-divisible differential sources", HL.empty(),
                    std::to_string(L.differentials.size()) + " differentials",
                    HL.empty() ? std::nullopt : std::optional<TriDegree>(HL.front().source)));
    }
    return rep;
}

}  // namespace

std::vector<std::string> verify_suites() { return {"aahss", "b01", "b0k", "coop", "hz", "kq", "massey", "oracle"}; }

VerifyOutcome cmd_verify(const std::string& suite, const std::string& target, int kmax, const RunConfig& cfg) {
    const ExtWindow zw = suite_window(cfg, {-2, 12, 8, -6, 8});
    VerifyOutcome out;
    if (suite == "massey") out.report = suite_massey(cfg);
    else if (suite == "hz") out.report = suite_hz(cfg);
    else if (suite == "kq") out.report = suite_kq(cfg);
    else if (suite == "aahss") out.report = suite_aahss(cfg);
    else if (suite == "oracle") out.report = suite_oracle(cfg, target);
    else if (suite == "coop") out.report = suite_coop(cfg, kmax > 0 ? kmax : 4);
    else if (suite == "b01") out.report = verify_b01_powers(kmax > 0 ? kmax : 3, cfg.field, zw, cfg.cache_dir, cfg.caps);
    else if (suite == "b0k") out.report = ext_b0k_decomposition(kmax > 0 ? kmax : 4, cfg.field, zw, cfg.cache_dir, cfg.caps);
    else throw std::invalid_argument("unknown verify suite '" + suite + "' (one of " + join(verify_suites(), ", ") + ")");
    const std::string path = out_path(cfg, "verify_" + suite + "_" + field_slug(cfg.field), ".txt");
    write_atomic(path, out.report.text());
    out.written.push_back(path);
    return out;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Flags {
    int q = 0;
    std::string field;
    std::optional<int> smin, smax, fmax, wmin, wmax;
    std::string cache_dir;
    std::string out = ".";
    bool dry_run = false;

    std::string ext_expr, over = "a1";
    std::optional<int> truncate, h1_truncate;
    bool no_split = false;

    std::string mass_target;
    int nline = 1;
    bool groups = false;
    int kmax = 0;

    std::string aahss_expr = "B0(1)";

    std::string suite, target;
};

RunConfig config_from(const Flags& fl) {
    RunConfig cfg;
    cfg.field = field_from_flags(fl.field, fl.q);
    ExtWindow& W = cfg.window;
    if (fl.smin) W.smin = *fl.smin;
    if (fl.smax) W.smax = *fl.smax;
    if (fl.fmax) W.fmax = *fl.fmax;
    if (fl.wmin) W.wmin = *fl.wmin;
    if (fl.wmax) W.wmax = *fl.wmax;
    cfg.window_set = fl.smin || fl.smax || fl.fmax || fl.wmin || fl.wmax;
    if (W.smin > W.smax || W.wmin > W.wmax || W.fmax < 0) throw std::invalid_argument("empty window");
    cfg.over = fl.over == "a0" ? FragmentKind::A0Dual : FragmentKind::A1Dual;
    cfg.truncate = fl.truncate;
    cfg.h1_truncate = fl.h1_truncate;
    cfg.split = !fl.no_split;
    cfg.cache_dir = fl.cache_dir;
    cfg.out_dir = fl.out;
    return cfg;
}

void explain_parse_error(const ParseError& e, const std::string& expr, std::ostream& err) {
    err << "error: " << e.what() << "\n  " << expr << "\n  " << std::string(e.position(), ' ') << "^\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Motivic Ext charts, Adams spectral sequences and verification reports over finite fields"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML file with option defaults; command-line flags take precedence");
    Flags fl;
    app.add_option("--q", fl.q, "size of the finite field (odd prime power)");
    app.add_option("--field", fl.field, "field class")->check(CLI::IsMember({"q1", "q3", "c"}));
    app.add_option("--smin", fl.smin, "lowest stem");
    app.add_option("--smax", fl.smax, "highest stem");
    app.add_option("--fmax", fl.fmax, "highest Adams filtration");
    app.add_option("--wmin", fl.wmin, "lowest weight");
    app.add_option("--wmax", fl.wmax, "highest weight");
    app.add_option("--cache-dir", fl.cache_dir, "directory for cached resolutions")->envname("MOTIVIC_CACHE_DIR");
    app.add_option("--out", fl.out, "output directory");
    app.add_flag("--dry-run", fl.dry_run, "check the arguments only");

    auto* ext = app.add_subcommand("ext", "Ext chart of a comodule expression");
    ext->add_option("expr", fl.ext_expr, "M2, B0(k), B1(k), tensor(a,b), suspend(a,s,w), a^n, adams_cover(a,m)")
        ->required();
    ext->add_option("--over", fl.over, "A(0) or A(1)")->check(CLI::IsMember({"a0", "a1"}));
    auto* tr = ext->add_option("--truncate", fl.truncate, "keep stems >= n");
    ext->add_option("--h1-truncate", fl.h1_truncate, "keep stems >= n and drop isolated h1-towers")->excludes(tr);
    ext->add_flag("--no-split", fl.no_split, "one panel even over q = 3 mod 4");

    auto* mass = app.add_subcommand("mass", "motivic Adams spectral sequence");
    mass->add_option("target", fl.mass_target, "HZ, kq, ksp, kqkq or nline")
        ->required()
        ->check(CLI::IsMember({"HZ", "kq", "ksp", "kqkq", "nline"}));
    mass->add_option("n", fl.nline, "n for nline");
    mass->add_flag("--groups", fl.groups, "also write the assembled homotopy groups");

    auto* ahss = app.add_subcommand("aahss", "algebraic Atiyah-Hirzebruch spectral sequence");
    ahss->add_option("expr", fl.aahss_expr, "comodule with cells [0], [2], [3] or a single cell");
    ahss->add_flag("--no-split", fl.no_split, "one panel even over q = 3 mod 4");

    auto* verify = app.add_subcommand("verify", "run a verification suite and write its report");
    verify->add_option("suite", fl.suite, "suite name")->required()->check(CLI::IsMember(verify_suites()));
    verify->add_option("--target", fl.target, "comodule for the oracle suite");
    verify->add_option("--kmax", fl.kmax, "largest k (b0k, coop) or power (b01)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg;
    std::string expr;
    try {
        cfg = config_from(fl);
        if (*ext) {
            expr = fl.ext_expr;
            parse_target(expr, cfg.field, cfg.over);
        } else if (*ahss) {
            expr = fl.aahss_expr;
            parse_target(expr, cfg.field);
        } else if (*verify && !fl.target.empty()) {
            expr = fl.target;
            parse_target(expr, cfg.field);
        }
        if (fl.kmax < 0 || fl.kmax > cfg.caps.k_max) throw std::invalid_argument("--kmax out of range");
        if (*mass && fl.mass_target == "nline" && (fl.nline < 0 || fl.nline > cfg.caps.n_max))
            throw std::invalid_argument("n out of range");
    } catch (const ParseError& e) {
        explain_parse_error(e, expr, err);
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (fl.dry_run) return 0;

    try {
        std::vector<std::string> written;
        int status = 0;
        if (*ext) written = cmd_ext(fl.ext_expr, cfg);
        else if (*mass) written = cmd_mass(fl.mass_target, fl.nline, fl.groups, cfg);
        else if (*ahss) written = cmd_aahss(fl.aahss_expr, cfg);
        else {
            VerifyOutcome v = cmd_verify(fl.suite, fl.target, fl.kmax, cfg);
            out << v.report.text();
            written = v.written;
            status = v.report.ok() ? 0 : 1;
        }
        for (const auto& p : written) out << "wrote " << p << "\n";
        return status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mot
