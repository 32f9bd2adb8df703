#pragma once

#include <Eigen/Dense>

#include "qdnm/errors.hpp"
#include "qdnm/types.hpp"

namespace qdnm {

// Uniform time grid on [t_start, t_end]. Times are in 1/µeV (ħ=1), energies
// in µeV everywhere in this library; any display rescaling happens in the CLI.
struct UniformGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    int n_steps = 0;

    UniformGrid() = default;
    UniformGrid(double start, double end, int n) : t_start(start), t_end(end), n_steps(n) {
        if (n_steps < 1) throw InvalidGridError("UniformGrid: n_steps must be >= 1");
        if (!(t_end > t_start)) throw InvalidGridError("UniformGrid: t_end must exceed t_start");
    }

    double step() const { return (t_end - t_start) / n_steps; }
    // node(i) is computed multiplicatively so there is no accumulation drift.
    double node(int i) const { return t_start + i * step(); }
    int size() const { return n_steps + 1; }
};

// Composite trapezoid weights [h/2, h, ..., h, h/2]; their sum equals the
// interval length up to roundoff.
inline Eigen::VectorXd trapezoid_weights(const UniformGrid& grid) {
    if (grid.n_steps < 1) throw InvalidGridError("trapezoid_weights: empty grid");
    const double h = grid.step();
    Eigen::VectorXd w = Eigen::VectorXd::Constant(grid.size(), h);
    w(0) = 0.5 * h;
    w(grid.size() - 1) = 0.5 * h;
    return w;
}

}  // namespace qdnm
