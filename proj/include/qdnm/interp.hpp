#pragma once

#include <Eigen/Dense>

#include "qdnm/grid.hpp"

namespace qdnm {

// Complex samples on a uniform grid with piecewise-linear evaluation.
// Exact at the nodes; queries outside the grid (beyond a 1e-12 slack,
// scaled by the grid extent) are an error.
struct SampledFunction {
    UniformGrid grid;
    Eigen::VectorXcd values;

    cplx at(double t) const {
        const double h = grid.step();
        const double span = grid.t_end - grid.t_start;
        const double slack = 1e-12 * std::max(1.0, std::abs(span));
        if (t < grid.t_start - slack || t > grid.t_end + slack)
            throw OutOfRangeError("SampledFunction: query outside grid");
        double x = (t - grid.t_start) / h;
        int i = static_cast<int>(x);
        if (i < 0) i = 0;
        if (i >= grid.n_steps) i = grid.n_steps - 1;
        const double frac = x - i;
        if (frac <= 0.0) return values(i);
        if (frac >= 1.0) return values(i + 1);
        return values(i) + frac * (values(i + 1) - values(i));
    }
};

inline cplx linear_interpolate(const SampledFunction& table, double t) { return table.at(t); }

}  // namespace qdnm
