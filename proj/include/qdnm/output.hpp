#pragma once

#include <ostream>
#include <string>

#include "qdnm/config.hpp"
#include "qdnm/doubledot.hpp"
#include "qdnm/singledot.hpp"

namespace qdnm {

// Locale-independent decimal formatting with 15 significant digits.
std::string format_double(double v);

// Time in units of t0 = 2*pi/omega_ref when the reference frequency is
// nonzero, absolute 1/µeV otherwise; the column name states the unit.
std::string time_column_name(const RunConfig& config);

void write_coefficients_csv(std::ostream& out, const RunConfig& config,
                            const SingleDotCoefficients& coeffs);
void write_coefficients_csv(std::ostream& out, const RunConfig& config,
                            const DqdCoefficients& coeffs);
void write_propagate_csv(std::ostream& out, const RunConfig& config, const Trajectory& traj);

// Two-panel gnuplot script (real part, imaginary part against the time
// column) referencing the CSV by the given (relative) path. Pure text with no
// timestamps, so regeneration is byte-identical.
std::string plot_script(const std::string& csv_path, const RunConfig& config);

}  // namespace qdnm
