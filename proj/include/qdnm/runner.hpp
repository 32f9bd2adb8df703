#pragma once

#include <string>

#include "qdnm/config.hpp"

namespace qdnm {

// Fig.-1-style single-dot preset: Gamma_L = Gamma_R = 100 µeV, omega0 = 50
// µeV, zero temperature, large bias (left lead occupied, right lead empty),
// OU kernels of bandwidth d. The bandwidth has no canonical value, so it is
// a required argument. n_steps = 0 picks a resolution from d.
RunConfig fig1_config(double d, double t_end_in_t0 = 3.0, int n_steps = 0);

void cmd_coefficients(const RunConfig& config, const std::string& out_path,
                      const std::string& plot_path, int threads);
void cmd_propagate(const RunConfig& config, const std::string& out_path, int threads);

}  // namespace qdnm
