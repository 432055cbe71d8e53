#include "motivic/report.hpp"

namespace mot {

bool CheckReport::ok() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::string CheckReport::text() const {
    std::string out = std::string(kHeader) + "\n";
    for (const auto& r : rows) {
        out += r.name + "\t" + (r.pass ? "PASS" : "FAIL") + "\t" + (r.first_mismatch ? r.first_mismatch->str() : "-");
        if (!r.detail.empty()) out += "\t" + r.detail;
        out += "\n";
    }
    return out;
}

}  // namespace mot
