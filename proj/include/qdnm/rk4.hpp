#pragma once

#include <Eigen/Dense>

#include "qdnm/errors.hpp"

namespace qdnm {

namespace detail {
inline bool all_finite(const Eigen::Ref<const Eigen::MatrixXcd>& m) { return m.allFinite(); }
inline bool all_finite(double v) { return std::isfinite(v); }
template <class T>
bool all_finite(const T& m) {
    return m.allFinite();
}
}  // namespace detail

// Classical 4-stage explicit Runge-Kutta update. State can be any Eigen
// vector/matrix type (or anything with the usual arithmetic plus allFinite()).
template <class State, class Rhs>
State rk4_step(Rhs&& f, double t, const State& y, double h) {
    if (!(h > 0.0)) throw InvalidInputError("rk4_step: step must be positive");
    State k1 = f(t, y);
    State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    State k4 = f(t + h, State(y + h * k3));
    State out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!detail::all_finite(out))
        throw PropagationDivergedError("rk4_step: non-finite state after update at t=" +
                                       std::to_string(t));
    return out;
}

}  // namespace qdnm
