#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nhols {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double observed = 0.0;
    bool pass = false;
    std::string note;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    int failures() const;
};

// Numerical suite turning the convergence/optimality theory into checks on
// seeded random instances: mixing-function properties, the energy/phi
// identity, clique-expansion equivalence, Hilbert-metric contraction,
// gradient consistency, fixed-point stationarity and slice optimality, and
// standard-LS correctness.
ValidationReport run_validation_suite(uint64_t seed, int threads = 1);

std::string validation_to_json(const ValidationReport& report);

}  // namespace nhols
