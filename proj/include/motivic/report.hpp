// Check reports: a versioned header line, then one line per check with its
// name, PASS or FAIL, and the first mismatching tridegree (or "-").
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motivic/ext.hpp"

namespace mot {

struct CheckRow {
    std::string name;
    bool pass = false;
    std::optional<TriDegree> first_mismatch;
    std::string detail;  // free text after the fixed columns
};

struct CheckReport {
    static constexpr const char* kHeader = "motivic-report v1";
    std::vector<CheckRow> rows;

    void add(CheckRow r) { rows.push_back(std::move(r)); }
    void append(const CheckReport& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
    bool ok() const;
    std::string text() const;
};

}  // namespace mot
