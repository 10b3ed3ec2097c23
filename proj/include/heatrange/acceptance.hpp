#pragma once

#include "heatrange/report.hpp"

#include <string>
#include <vector>

namespace heatrange {

struct Injection {
    bool wrong_variance = false;  // Euclidean isometry weight e^{-|y|^2/2t}
    bool swap_fiber = false;      // nu_t and nu_{2t}(2Y) exchanged on spheres
};

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    std::vector<CheckReport> reports;

    // One row for the suite summary: id "criterion.N", pass decided by the criterion.
    CheckReport summary() const;
};

// Criteria numbers in a suite: euclid_full, sphere_full, h3_full or all.
std::vector<int> suite_criteria(const std::string& suite);

// Runs one criterion. The negative-control criterion covers the controls that
// belong to the suite (wrong variance for euclid_full, swapped fiber for sphere_full).
CriterionResult run_criterion(int number, const Injection& inject = {}, const std::string& suite = "all");

std::vector<CriterionResult> run_suite(const std::string& suite, const Injection& inject = {});

}  // namespace heatrange
