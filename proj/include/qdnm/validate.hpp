#pragma once

#include <ostream>
#include <string>

namespace qdnm {

struct ValidateOptions {
    int n_steps = 2000;       // base resolution; coarse grids fail the checks
    int threads = 1;          // 0 = all cores
    std::string csv_out;      // optional: d-sweep coefficient table destination
};

// Runs the structural-invariant suite, the solver self-convergence checks and
// the single-dot Markovian d-sweep against the rate-equation oracle. Prints
// one line per check with the measured value and threshold; returns 0 when
// every check passes, 1 otherwise.
int run_validate(const ValidateOptions& options, std::ostream& report);

}  // namespace qdnm
