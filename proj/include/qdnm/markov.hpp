#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdnm/grid.hpp"
#include "qdnm/linalg.hpp"
#include "qdnm/model.hpp"

namespace qdnm {

// Markovian oracles, implemented from the displayed rate/Lindblad equations
// directly and never by taking limits of the non-Markovian engines.

struct LindbladChannel {
    double gamma = 0.0;  // tunneling rate
    double nbar = 0.0;   // lead occupation at the relevant system frequency
    Eigen::MatrixXcd c;  // coupling operator of this lead
};

// d rho/dt = -i[H,rho]
//   + sum_l (G_l/2) [ nbar (2 c+ rho c - c c+ rho - rho c c+)
//                   + (1-nbar) (2 c rho c+ - c+ c rho - rho c+ c) ].
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<LindbladChannel>& channels);

// Single-dot rate equations in the large-bias window mu_L > omega0 > mu_R,
// state (rho00, rho11, rho10). The coherence damping is Gamma_L + Gamma_R as
// displayed; note the Lindblad limit gives half that rate, so only the
// population block of this oracle coincides with the Lindblad generator.
Eigen::Vector3cd single_dot_rates(const Eigen::Vector3cd& state, double gamma_l, double gamma_r,
                                  double omega0);

// DQD rate equations, state (rho00, rho11, rho22, rho33, rho12).
Eigen::Matrix<cplx, 5, 1> dqd_rates(const Eigen::Matrix<cplx, 5, 1>& state, double gamma_l,
                                    double gamma_r, double omega1, double omega2, double Omega0);

// Single-electron DQD (strong intra- and inter-dot blockade), state
// (rho00, rho11, rho22, rho12); coherence damping Gamma_R/2 only.
Eigen::Vector4cd dqd_single_electron_rates(const Eigen::Vector4cd& state, double gamma_l,
                                           double gamma_r, double omega1, double omega2,
                                           double Omega0);

// RK4 trajectory of any fixed-size rate state.
template <class State, class Rhs>
std::vector<State> propagate_rates(Rhs&& rhs, const State& s0, const UniformGrid& grid);

// Populations (rows) and coherences (rows) sampled on a grid, the common
// currency for limit comparisons.
struct TrajectoryTable {
    UniformGrid grid;
    Eigen::MatrixXd populations;   // one row per tracked population
    Eigen::MatrixXcd coherences;   // one row per tracked coherence
};

struct DeviationReport {
    double max_population_dev = 0.0;
    double max_coherence_dev = 0.0;
    double max_total = 0.0;
};

// Per-element max absolute deviation; grids and row counts must match.
DeviationReport markov_limit_check(const TrajectoryTable& nonmarkov,
                                   const TrajectoryTable& oracle);

// Steady state of the single-electron DQD rate system (null space with the
// population-sum normalization), returned as (rho00, rho11, rho22, rho12).
Eigen::Vector4cd dqd_single_electron_steady(double gamma_l, double gamma_r, double omega1,
                                            double omega2, double Omega0);

// ---------------------------------------------------------------------------

template <class State, class Rhs>
std::vector<State> propagate_rates(Rhs&& rhs, const State& s0, const UniformGrid& grid) {
    std::vector<State> out(static_cast<size_t>(grid.size()));
    out[0] = s0;
    const double h = grid.step();
    State s = s0;
    for (int k = 1; k < grid.size(); ++k) {
        const double t = grid.node(k - 1);
        State k1 = rhs(t, s);
        State k2 = rhs(t + 0.5 * h, State(s + (0.5 * h) * k1));
        State k3 = rhs(t + 0.5 * h, State(s + (0.5 * h) * k2));
        State k4 = rhs(t + h, State(s + h * k3));
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out[static_cast<size_t>(k)] = s;
    }
    return out;
}

}  // namespace qdnm
