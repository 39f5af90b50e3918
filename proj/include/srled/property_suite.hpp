#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace srled {

/// One row of the property report.
struct PropertyCase {
    std::string suite;
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst value observed
    double tolerance = 0.0;  // bound it was compared against
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCase> cases;

    bool all_passed() const;
    std::string format() const;  // one line per case
};

/// Runs the invariant battery: exchange symmetry, pointwise ordering of the
/// spectrum variants, perturbative convergence order, backend equivalence,
/// root residuals, evenness, sign and derivative checks. Failures become
/// report rows; nothing throws.
PropertyReport run_property_suite(std::uint64_t seed = 20240601, int threads = 0);

}  // namespace srled
