#pragma once

#include <map>
#include <string>
#include <vector>

namespace heatrange {

enum class CheckKind { equality, bound, probe };

struct CheckReport {
    std::string id;
    CheckKind kind = CheckKind::equality;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    long nodes = 0;
    double drift = 0.0;  // change under node refinement
    bool pass = false;
    // Trust gates: false entries force pass = false.
    std::map<std::string, bool> gates;
    // Informational flags (extrapolation, pole proximity, exploratory bands).
    std::map<std::string, bool> flags;
    std::map<std::string, double> values;
    std::string note;

    // equality: abs = |lhs - rhs|, rel = abs / |rhs| (abs when rhs = 0).
    // bound:    lhs is the largest observed ratio, rhs the allowed one.
    // probe:    pass decided by gates only.
    void finish(double tol);
    bool gates_ok() const;
};

std::string to_json_line(const CheckReport& r);
CheckReport report_from_json_line(const std::string& line);
std::string csv_header();
std::string to_csv_row(const CheckReport& r);

}  // namespace heatrange
