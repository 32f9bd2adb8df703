#include "qdnm/runner.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "qdnm/doubledot.hpp"
#include "qdnm/output.hpp"
#include "qdnm/singledot.hpp"

namespace qdnm {

RunConfig fig1_config(double d, double t_end_in_t0, int n_steps) {
    if (!(d > 0.0)) throw ConfigError("fig1: bandwidth d must be > 0");
    RunConfig c;
    c.model = RunConfig::Model::single;
    c.omega0 = 50.0;
    c.lead_l.label = 'L';
    c.lead_l.gamma = 100.0;
    c.lead_l.mu = 1e9;
    c.lead_l.kT = 0.0;
    c.lead_l.spectral = OrnsteinUhlenbeck{d, true};
    c.lead_r.label = 'R';
    c.lead_r.gamma = 100.0;
    c.lead_r.mu = -1e9;
    c.lead_r.kT = 0.0;
    c.lead_r.spectral = OrnsteinUhlenbeck{d, false};
    c.t_end = t_end_in_t0;
    c.t_end_in_t0 = true;
    if (n_steps == 0) {
        const double t_abs = t_end_in_t0 * 2.0 * std::numbers::pi / c.omega0;
        const double fastest = std::max({d, 4.0 * c.omega0, 2.0 * (c.lead_l.gamma + c.lead_r.gamma)});
        n_steps = static_cast<int>(std::ceil(t_abs * fastest / 0.2));
        n_steps = std::clamp(n_steps, 1200, 200000);
    }
    c.n_steps = n_steps;
    return c;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open output file: " + path);
    return out;
}

}  // namespace

void cmd_coefficients(const RunConfig& config, const std::string& out_path,
                      const std::string& plot_path, int threads) {
    UniformGrid grid(0.0, absolute_t_end(config), config.n_steps);
    auto out = open_out(out_path);
    if (config.model == RunConfig::Model::single) {
        SingleDotModel model{config.omega0};
        auto coeffs = compute_coefficients(model, config.lead_l, config.lead_r, grid, threads);
        write_coefficients_csv(out, config, coeffs);
    } else {
        DoubleDotModel model{config.omega1, config.omega2, config.Omega0, false};
        auto coeffs = compute_dqd_coefficients(model, config.lead_l, config.lead_r, grid, threads);
        write_coefficients_csv(out, config, coeffs);
    }
    out.close();
    if (!plot_path.empty()) {
        auto plot = open_out(plot_path);
        plot << plot_script(out_path, config);
    }
}

void cmd_propagate(const RunConfig& config, const std::string& out_path, int threads) {
    UniformGrid grid(0.0, absolute_t_end(config), config.n_steps);
    auto rho0 = initial_density(config);
    auto out = open_out(out_path);
    if (config.model == RunConfig::Model::single) {
        SingleDotModel model{config.omega0};
        auto coeffs = compute_coefficients(model, config.lead_l, config.lead_r, grid, threads);
        auto traj = propagate(rho0, coeffs, model.omega0);
        write_propagate_csv(out, config, traj);
    } else {
        DoubleDotModel model{config.omega1, config.omega2, config.Omega0, false};
        auto coeffs = compute_dqd_coefficients(model, config.lead_l, config.lead_r, grid, threads);
        auto traj = propagate_dqd(rho0, coeffs, model);
        write_propagate_csv(out, config, traj);
    }
}

}  // namespace qdnm
