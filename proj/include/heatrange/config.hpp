#pragma once

#include "heatrange/numerics.hpp"
#include "heatrange/report.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace heatrange {

// Raised for malformed or inconsistent configurations (CLI exit code 2).
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

struct ExperimentConfig {
    std::string geometry = "euclidean";
    std::string op;
    std::string f = "";        // test function descriptor; empty picks the op's default
    std::string f2 = "";       // second factor for multiplication ops
    int d = 1;
    double t = 1.0;
    double s = NAN;
    int n = 1;
    double p = 2.0;
    double c_n = NAN;          // Sobolev constant; NaN uses the default
    double R = NAN;            // truncation radius; NaN uses the op default
    std::vector<double> x;     // evaluation point (euclidean), default origin
    int nodes = 0;             // 0 keeps the module default
    double tol = NAN;          // NaN keeps the module default
    std::string out;           // JSON-lines path; a .csv twin is written beside it
    std::string suite;
    std::string inject;        // "", "wrong_variance" or "swap_fiber"
};

// key = value lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Checks parameter constraints for the chosen op; throws ConfigError naming the violated one.
void validate(const ExperimentConfig& cfg);

std::vector<std::string> operation_names(const std::string& geometry);

// Dispatches to the named operation.
CheckReport run(const ExperimentConfig& cfg);

}  // namespace heatrange
