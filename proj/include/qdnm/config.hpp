#pragma once

#include <string>

#include <Eigen/Dense>

#include "qdnm/bath.hpp"
#include "qdnm/errors.hpp"

namespace qdnm {

// Parsed run description. Energies in µeV; grid.t_end is interpreted in
// units of t0 = 2*pi/omega_ref or as absolute 1/µeV per t_end_units.
struct RunConfig {
    enum class Model { single, dqd };
    Model model = Model::single;
    double omega0 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double Omega0 = 0.0;
    LeadSpec lead_l;
    LeadSpec lead_r;
    double t_end = 0.0;
    bool t_end_in_t0 = true;
    int n_steps = 0;
    int initial_label = 0;
    bool explicit_initial = false;
    Eigen::MatrixXcd initial_rho;
    std::string output_csv;
};

// One `key = value` per line, `#` comments, dotted keys for sections.
// Every unknown key is an error naming the line and the nearest valid key.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse(serialize(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

bool config_equal(const RunConfig& a, const RunConfig& b);

int state_dimension(const RunConfig& config);

// omega0 (single) or omega1 (dqd); picks the display time unit.
double reference_frequency(const RunConfig& config);

// t_end in 1/µeV regardless of the configured unit.
double absolute_t_end(const RunConfig& config);

Eigen::MatrixXcd initial_density(const RunConfig& config);

}  // namespace qdnm
