#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qdnm/bath.hpp"
#include "qdnm/grid.hpp"

namespace qdnm {

template <int D>
using VecD = Eigen::Matrix<cplx, D, 1>;
template <int D>
using MatD = Eigen::Matrix<cplx, D, D>;

// Linear final-value Volterra integro-differential problem on [0, t]:
//
//   f'(s) = M f(s) + int_s^t K_b(s-s') f(s') ds'
//                  + int_0^s K_f(s-s') f(s') ds' + g(s),   f(t) = final_value.
//
// Exactly one of the two memory kernels is used by each equation in scope:
// backward-marchable problems carry K_b, mixed final-value problems carry K_f.
// Kernels are dim x dim diagonal matrices of the real lag.
struct VolterraProblem {
    int dim = 1;
    Eigen::MatrixXcd coeff;                            // M
    std::function<Eigen::MatrixXcd(double)> mem_back;  // K_b, empty = zero
    std::function<Eigen::MatrixXcd(double)> mem_fwd;   // K_f, empty = zero
    Eigen::MatrixXcd source;                           // dim x (n+1) samples, empty = zero
    Eigen::VectorXcd final_value;
    UniformGrid grid;  // [0, t]
};

// Samples f(s_k) as columns, k = 0..n_steps; f(t) reproduces final_value
// bitwise. Marches from s = t down to s = 0 with implicit-trapezoid steps;
// the [s,t] memory integral only touches already-computed samples.
Eigen::MatrixXcd solve_backward(const VolterraProblem& problem);

// The [0,s] memory integral makes backward marching impossible, so the whole
// grid is solved as one global linear system: one-step implicit-trapezoid
// rows with trapezoid memory weights, and the equation row at the final node
// replaced by the final condition. If residual_out is given, the solution's
// row-wise residual of that system (relative to ||A||inf ||x||inf + ||b||inf)
// is reported.
Eigen::MatrixXcd solve_mixed_final_value(const VolterraProblem& problem,
                                         double* residual_out = nullptr);

// U(t,s_k) = sum_j W_j kernel(s_k - s_j) h(s_j)   (forward orientation), or
// V(t,s_k) = sum_j W_j kernel(s_j - s_k) h(s_j)   (reflected orientation),
// with W the full-interval [0,t] trapezoid weights.
enum class LagOrientation { forward, reflected };

Eigen::VectorXcd convolve_source(const CorrelationKernel& kernel, LagOrientation orientation,
                                 const Eigen::VectorXcd& h_samples, const UniformGrid& grid);

// ---- Expert interface used by the coefficient drivers ------------------
//
// Kernels are stationary, so their values cache by integer lag index on the
// shared global step; the tables below are built once per run and sliced by
// every per-outer-time solve.

struct ScalarKernelTable {
    std::vector<cplx> pos;  // pos[m] = kernel(+m*h)
    std::vector<cplx> neg;  // neg[m] = kernel(-m*h)
    bool zero = true;
    static ScalarKernelTable build(const CorrelationKernel& kernel, double h, int n_max);
    cplx at(long lag_index) const {
        return lag_index >= 0 ? pos[static_cast<size_t>(lag_index)]
                              : neg[static_cast<size_t>(-lag_index)];
    }
};

// Diagonal matrix kernel sampled at the lag sequence the consuming solver
// uses (see each solver's convention below).
template <int D>
struct DiagKernelTable {
    std::vector<VecD<D>> vals;
    bool zero = true;
};

// Backward core. back.vals[m] must hold K_b(-m*h). Nodes 0..m are produced.
template <int D>
std::vector<VecD<D>> solve_backward_core(const MatD<D>& M, const DiagKernelTable<D>& back,
                                         const std::vector<VecD<D>>* source,
                                         const VecD<D>& final_value, double h, int m);

enum class MixedMethod { automatic, dense, structured };

// Mixed core. fwd.vals[m] must hold K_f(+m*h). One solve per final value,
// all sharing the same source. Dense and structured methods solve the same
// discrete system; `automatic` picks by size.
template <int D>
std::vector<std::vector<VecD<D>>> solve_mixed_core(const MatD<D>& M, const DiagKernelTable<D>& fwd,
                                                   const std::vector<VecD<D>>* source,
                                                   const std::vector<VecD<D>>& final_values,
                                                   double h, int m,
                                                   MixedMethod method = MixedMethod::automatic,
                                                   double* residual_out = nullptr);

Eigen::VectorXcd convolve_core(const ScalarKernelTable& kernel, LagOrientation orientation,
                               const Eigen::VectorXcd& h_samples, double h, int m);

}  // namespace qdnm
