// One line per acceptance criterion. A criterion passes when every check
// behind it passes inside its time budget; the first failing check is named.
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "../oracle/presentation.hpp"
#include "motivic/charts_cli.hpp"

using namespace mot;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string note;  // first failure, or a short summary
};

Outcome from_reports(const std::vector<CheckReport>& reps, const std::string& summary) {
    for (const auto& rep : reps)
        for (const auto& r : rep.rows)
            if (!r.pass)
                return {false, r.name + " at " + (r.first_mismatch ? r.first_mismatch->str() : std::string("-")) +
                                   (r.detail.empty() ? "" : " (" + r.detail + ")")};
    return {true, summary};
}

RunConfig config(const BaseField& F, const std::string& out) {
    RunConfig cfg;
    cfg.field = F;
    cfg.out_dir = out;
    return cfg;
}

Outcome presentation_check(bool a1) {
    int bad = 0, total = 0;
    std::string first;
    for (int q : {5, 3}) {
        const BaseField F = BaseField::from_q(q);
        const int smin = a1 ? -6 : -8, smax = a1 ? 16 : 0, fmax = 10;
        ExtEngine E(unit_comodule(a1 ? FragmentKind::A1Dual : FragmentKind::A0Dual, F), smax, fmax);
        const auto P = a1 ? oracle::ext_a1(F.kind == FieldKind::QThree) : oracle::ext_a0(F.kind == FieldKind::QThree);
        for (int s = smin; s <= smax; ++s)
            for (int f = 0; f <= fmax; ++f) {
                std::vector<int> ws;
                if (a1)
                    for (int cw = 0; cw <= 4; ++cw) ws.push_back(s - cw);
                else
                    for (int w = -10; w <= 0; ++w) ws.push_back(w);
                for (int w : ws) {
                    ++total;
                    if (E.dim({s, f, w}) != P.dim(s, f, w) && bad++ == 0)
                        first = F.tag() + " " + TriDegree{s, f, w}.str() + ": " + std::to_string(E.dim({s, f, w})) +
                                " vs " + std::to_string(P.dim(s, f, w));
                }
            }
    }
    if (bad) return {false, std::to_string(bad) + " tridegrees differ, first " + first};
    return {true, std::to_string(total) + " tridegrees on q1 and q3"};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return out;
}

Outcome cache_check(const fs::path& work) {
    const std::vector<std::vector<std::string>> runs = {
        {"ext", "M2", "--field", "q1", "--q", "5"},
        {"ext", "B0(1)", "--field", "q3", "--q", "3"},
        {"ext", "adams_cover(M2,2)", "--h1-truncate", "4", "--q", "5"},
        {"mass", "HZ", "--q", "5", "--groups"},
        {"mass", "kq", "--q", "3", "--groups"},
        {"mass", "kqkq", "--q", "5"},
        {"aahss", "B0(1)", "--q", "3"},
        {"verify", "aahss", "--q", "5"},
        {"verify", "b0k", "--q", "3", "--kmax", "2"},
    };
    const fs::path cache = work / "cache";
    std::vector<std::map<std::string, std::string>> trees;
    for (const std::string pass : {"nocache", "cold", "warm"}) {
        const fs::path out = work / pass;
        for (auto args : runs) {
            args.insert(args.end(), {"--out", out.string()});
            if (pass != "nocache") args.insert(args.end(), {"--cache-dir", cache.string()});
            std::ostringstream o, e;
            const int rc = run_cli(args, o, e);
            if (rc != 0) return {false, "'" + args[0] + " " + args[1] + "' exited with " + std::to_string(rc) + ": " + e.str()};
        }
        trees.push_back(read_tree(out));
    }
    if (!fs::exists(cache) || fs::is_empty(cache)) return {false, "nothing was cached"};
    for (std::size_t i = 1; i < trees.size(); ++i) {
        if (trees[i].size() != trees[0].size()) return {false, "different file sets"};
        for (const auto& [name, bytes] : trees[0])
            if (trees[i].at(name) != bytes) return {false, name + " differs between cache states"};
    }
    return {true, std::to_string(trees[0].size()) + " files identical without, with cold and with warm cache"};
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / ("motivic-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(work);
    const std::string out = (work / "reports").string();
    const BaseField q5 = BaseField::from_q(5), q3 = BaseField::from_q(3);

    struct Criterion {
        int id;
        std::string title;
        double budget_s;
        std::function<Outcome()> run;
    };
    auto reports = [&](const std::vector<std::pair<std::string, BaseField>>& suites, int kmax = 0) {
        std::vector<CheckReport> reps;
        int rows = 0;
        for (const auto& [suite, F] : suites) {
            reps.push_back(cmd_verify(suite, "", kmax, config(F, out)).report);
            rows += static_cast<int>(reps.back().rows.size());
        }
        return from_reports(reps, std::to_string(rows) + " checks");
    };
    const std::vector<Criterion> criteria = {
        {1, "Ext over A(0) equals the presentation", 10, [] { return presentation_check(false); }},
        {2, "Ext over A(1) equals the presentation", 300, [] { return presentation_check(true); }},
        {3, "<rho,h0,h1> = tau h1 with zero indeterminacy", 30, [&] { return reports({{"massey", q3}}); }},
        {4, "Adams spectral sequence for HZ, q = 5 and q = 3", 60,
         [&] { return reports({{"hz", q5}, {"hz", q3}}); }},
        {5, "kq and ksp against Friedlander, kq against HZ for s <= 0", 300,
         [&] { return reports({{"kq", q5}, {"kq", q3}}); }},
        {6, "cobar complex equals the minimal resolution", 600,
         [&] { return reports({{"oracle", q5}, {"oracle", q3}, {"oracle", BaseField::complex_like()}}); }},
        {7, "algebraic AHSS of B0(1) converges to Ext(B0(1))", 120,
         [&] { return reports({{"aahss", q5}, {"aahss", q3}}); }},
        {8, "B0(1) powers and B0(k) modulo b-torsion", 900,
         [&] {
             std::vector<CheckReport> reps;
             for (const auto& F : {q5, q3}) {
                 reps.push_back(cmd_verify("b01", "", 3, config(F, out)).report);
                 reps.push_back(cmd_verify("b0k", "", 4, config(F, out)).report);
             }
             return from_reports(reps, "i <= 3, k <= 4");
         }},
        {9, "cooperations E2 equals the direct computation", 900,
         [&] { return reports({{"coop", q5}, {"coop", q3}}, 4); }},
        {10, "charts and reports do not depend on the cache", 600, [&] { return cache_check(work); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs > c.budget_s) o = {false, "over the time budget"};
        failed += !o.pass;
        char t[32];
        std::snprintf(t, sizeof t, "%.1fs/%.0fs", secs, c.budget_s);
        std::cout << "criterion " << c.id << "\t" << (o.pass ? "PASS" : "FAIL") << "\t" << c.title << "\t" << t << "\t"
                  << o.note << std::endl;
    }
    fs::remove_all(work);
    return failed ? 1 : 0;
}
