#include "qdnm/volterra.hpp"

#include <cmath>

#include "qdnm/linalg.hpp"

namespace qdnm {

namespace {

// Trapezoid weight of node j in a range of nodes [lo, hi] with step h.
inline double trap_w(int j, int lo, int hi, double h) {
    return (j == lo || j == hi) ? 0.5 * h : h;
}

template <int D>
double max_abs(const VecD<D>& v) {
    return v.cwiseAbs().maxCoeff();
}

}  // namespace

ScalarKernelTable ScalarKernelTable::build(const CorrelationKernel& kernel, double h, int n_max) {
    ScalarKernelTable t;
    t.zero = kernel.is_zero();
    t.pos.resize(static_cast<size_t>(n_max) + 1, cplx(0.0, 0.0));
    t.neg.resize(static_cast<size_t>(n_max) + 1, cplx(0.0, 0.0));
    if (!t.zero) {
        for (int m = 0; m <= n_max; ++m) {
            t.pos[static_cast<size_t>(m)] = kernel(m * h);
            t.neg[static_cast<size_t>(m)] = kernel(-m * h);
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Backward march
// ---------------------------------------------------------------------------

template <int D>
std::vector<VecD<D>> solve_backward_core(const MatD<D>& M, const DiagKernelTable<D>& back,
                                         const std::vector<VecD<D>>* source,
                                         const VecD<D>& final_value, double h, int m) {
    std::vector<VecD<D>> f(static_cast<size_t>(m) + 1);
    f[static_cast<size_t>(m)] = final_value;
    if (m == 0) return f;

    auto src = [&](int k) -> VecD<D> {
        return source ? (*source)[static_cast<size_t>(k)] : VecD<D>::Zero();
    };

    const bool has_mem = !back.zero;
    // F_prev holds M f + I + g at the previously finished node (k+1).
    VecD<D> F_prev = M * f[static_cast<size_t>(m)] + src(m);  // I(t) over [t,t] vanishes

    for (int k = m - 1; k >= 0; --k) {
        // Memory over [s_k, t] split into the fixed part (nodes k+1..m) and
        // the implicit self term (h/2) K(0) f_k handled by the corrector.
        VecD<D> I_fixed = VecD<D>::Zero();
        if (has_mem) {
            for (int j = k + 1; j <= m; ++j) {
                const double w = trap_w(j, k, m, h);
                I_fixed += w * back.vals[static_cast<size_t>(j - k)].cwiseProduct(
                                   f[static_cast<size_t>(j)]);
            }
        }
        const VecD<D> g_k = src(k);
        VecD<D> fk = f[static_cast<size_t>(k + 1)] - h * F_prev;  // Euler predictor
        VecD<D> F_k;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            VecD<D> I_k = I_fixed;
            if (has_mem) I_k += (0.5 * h) * back.vals[0].cwiseProduct(fk);
            F_k = M * fk + I_k + g_k;
            VecD<D> fnew = f[static_cast<size_t>(k + 1)] - (0.5 * h) * (F_k + F_prev);
            const double delta = max_abs<D>(fnew - fk);
            fk = fnew;
            if (delta <= 1e-12 * std::max(1.0, max_abs<D>(fk))) {
                converged = true;
                // Refresh F with the accepted value so F_prev is consistent.
                I_k = I_fixed;
                if (has_mem) I_k += (0.5 * h) * back.vals[0].cwiseProduct(fk);
                F_k = M * fk + I_k + g_k;
                break;
            }
        }
        if (!converged)
            throw StepFailureError("solve_backward: corrector failed to converge at node " +
                                   std::to_string(k));
        if (!fk.allFinite())
            throw StepFailureError("solve_backward: non-finite sample at node " +
                                   std::to_string(k));
        f[static_cast<size_t>(k)] = fk;
        F_prev = F_k;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Mixed final-value global solve
// ---------------------------------------------------------------------------
//
// Discrete system (one-step implicit trapezoid plus the final-condition row):
//   row k in 0..m-1: (f_{k+1} - f_k)/h - (G_{k+1} + G_k)/2 = 0,
//   row m          : f_m = final_value,
// with G_j = M f_j + I_j + g_j and I_j = sum_{i<=j} w_i K(j-i) f_i (trapezoid
// weights on [0, s_j]). A one-step scheme is used deliberately: a centered
// interior stencil carries a spurious oscillating characteristic that grows
// along the backward-growing solution direction and amplifies truncation
// error by e^{Gamma_eff * t}; the box rows propagate perturbations with the
// physical (forward-decaying) transfer only.

namespace {

template <int D>
struct MixedSystem {
    const MatD<D>& M;
    const DiagKernelTable<D>& fwd;
    const std::vector<VecD<D>>* source;
    double h;
    int m;

    VecD<D> src(int k) const {
        return source ? (*source)[static_cast<size_t>(k)] : VecD<D>::Zero();
    }

    VecD<D> memory(int k, const std::vector<VecD<D>>& f) const {
        VecD<D> acc = VecD<D>::Zero();
        if (fwd.zero || k == 0) return acc;
        for (int j = 0; j <= k; ++j) {
            acc += trap_w(j, 0, k, h) *
                   fwd.vals[static_cast<size_t>(k - j)].cwiseProduct(f[static_cast<size_t>(j)]);
        }
        return acc;
    }

    VecD<D> rhs_at(int k, const std::vector<VecD<D>>& f) const {
        return M * f[static_cast<size_t>(k)] + memory(k, f) + src(k);
    }

    // Row-wise residual of a candidate solution, relative to
    // ||A||_inf ||x||_inf + ||b||_inf of the assembled system.
    double residual(const std::vector<VecD<D>>& f, const VecD<D>& final_value) const {
        double num = 0.0;
        double xmax = 0.0;
        for (const auto& v : f) xmax = std::max(xmax, max_abs<D>(v));
        double bmax = max_abs<D>(final_value);
        double row_scale = 2.0 / h + M.cwiseAbs().rowwise().sum().maxCoeff();
        if (!fwd.zero) {
            double kmax = 0.0;
            for (int j = 0; j <= m; ++j) kmax = std::max(kmax, max_abs<D>(fwd.vals[(size_t)j]));
            row_scale += kmax * (m * h);
        }
        for (int k = 0; k < m; ++k) {
            VecD<D> r = (f[static_cast<size_t>(k + 1)] - f[static_cast<size_t>(k)]) / h -
                        0.5 * (rhs_at(k + 1, f) + rhs_at(k, f));
            num = std::max(num, max_abs<D>(r));
        }
        num = std::max(num, max_abs<D>(VecD<D>(f[static_cast<size_t>(m)] - final_value)));
        const double denom = row_scale * std::max(xmax, 1e-300) + std::max(bmax, 1e-300);
        return num / denom;
    }
};

template <int D>
std::vector<std::vector<VecD<D>>> mixed_dense(const MixedSystem<D>& sys,
                                              const std::vector<VecD<D>>& finals) {
    const int m = sys.m;
    const double h = sys.h;
    const int n = D * (m + 1);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(finals.size()));
    const MatD<D> id = MatD<D>::Identity();

    auto block = [&](int row, int col) { return A.template block<D, D>(D * row, D * col); };

    for (int k = 0; k < m; ++k) {
        // (f_{k+1} - f_k)/h - (1/2)[M f_{k+1} + I_{k+1} + M f_k + I_k] = (g_k + g_{k+1})/2
        block(k, k) += (-1.0 / h) * id - 0.5 * sys.M;
        block(k, k + 1) += (1.0 / h) * id - 0.5 * sys.M;
        if (!sys.fwd.zero) {
            for (int j = 0; j <= k + 1; ++j) {
                const double w = trap_w(j, 0, k + 1, h);
                block(k, j) += -0.5 * w *
                               MatD<D>(sys.fwd.vals[static_cast<size_t>(k + 1 - j)].asDiagonal());
            }
            if (k > 0) {
                for (int j = 0; j <= k; ++j) {
                    const double w = trap_w(j, 0, k, h);
                    block(k, j) += -0.5 * w *
                                   MatD<D>(sys.fwd.vals[static_cast<size_t>(k - j)].asDiagonal());
                }
            }
        }
        for (size_t q = 0; q < finals.size(); ++q)
            B.template block<D, 1>(D * k, static_cast<Eigen::Index>(q)) =
                0.5 * (sys.src(k) + sys.src(k + 1));
    }
    block(m, m) += id;
    for (size_t q = 0; q < finals.size(); ++q)
        B.template block<D, 1>(D * m, static_cast<Eigen::Index>(q)) = finals[q];

    Eigen::MatrixXcd X = solve_dense_linear(A, B);

    std::vector<std::vector<VecD<D>>> out(finals.size());
    for (size_t q = 0; q < finals.size(); ++q) {
        out[q].resize(static_cast<size_t>(m) + 1);
        for (int k = 0; k <= m; ++k)
            out[q][static_cast<size_t>(k)] =
                X.template block<D, 1>(D * k, static_cast<Eigen::Index>(q));
        out[q][static_cast<size_t>(m)] = finals[q];  // bitwise final condition
    }
    return out;
}

// Structured elimination of the same rows: every sample is affine in f_0, the
// step rows propagate the affine blocks forward in O(N^2), and the final
// condition pins f_0 through one small solve per final value.
template <int D>
std::vector<std::vector<VecD<D>>> mixed_structured(const MixedSystem<D>& sys,
                                                   const std::vector<VecD<D>>& finals) {
    const int m = sys.m;
    const double h = sys.h;
    constexpr int W = D + 1;  // [Q | p] with the particular part in the last column
    using Blk = Eigen::Matrix<cplx, D, W>;

    std::vector<Blk> blk(static_cast<size_t>(m) + 1);
    blk[0].setZero();
    blk[0].template block<D, D>(0, 0) = MatD<D>::Identity();

    const bool has_mem = !sys.fwd.zero;
    // Constant step matrix: (I/h - M/2 - (h/4) K(0)) f_{k+1} = known.
    MatD<D> lhs = (1.0 / h) * MatD<D>::Identity() - 0.5 * sys.M;
    if (has_mem) lhs -= (0.25 * h) * MatD<D>(sys.fwd.vals[0].asDiagonal());
    const MatD<D> lhs_inv = lhs.inverse();
    if (!lhs_inv.allFinite())
        throw SingularSystemError("solve_mixed_final_value: degenerate step matrix");

    for (int k = 0; k < m; ++k) {
        // rhs = f_k/h + (1/2)[M f_k + I_k + g_k + g_{k+1} + I_{k+1} without its self term]
        Blk rhs = (1.0 / h) * blk[static_cast<size_t>(k)] +
                  0.5 * (sys.M * blk[static_cast<size_t>(k)]);
        rhs.col(W - 1) += 0.5 * (sys.src(k) + sys.src(k + 1));
        if (has_mem) {
            Blk acc = Blk::Zero();
            // I_k over [0, s_k]
            if (k > 0) {
                for (int j = 0; j <= k; ++j) {
                    acc += trap_w(j, 0, k, h) *
                           (sys.fwd.vals[static_cast<size_t>(k - j)].asDiagonal() *
                            blk[static_cast<size_t>(j)]);
                }
            }
            // I_{k+1} over [0, s_{k+1}] except the j = k+1 self term
            for (int j = 0; j <= k; ++j) {
                acc += trap_w(j, 0, k + 1, h) *
                       (sys.fwd.vals[static_cast<size_t>(k + 1 - j)].asDiagonal() *
                        blk[static_cast<size_t>(j)]);
            }
            rhs += 0.5 * acc;
        }
        blk[static_cast<size_t>(k + 1)] = lhs_inv * rhs;
        if (!blk[static_cast<size_t>(k + 1)].allFinite())
            throw SingularSystemError("solve_mixed_final_value: affine propagation overflowed");
    }

    // Final-condition row: Q_m f_0 = final - p_m, one D x D solve per final.
    Eigen::MatrixXcd C = blk[static_cast<size_t>(m)].template block<D, D>(0, 0);
    Eigen::MatrixXcd R(D, static_cast<Eigen::Index>(finals.size()));
    for (size_t q = 0; q < finals.size(); ++q)
        R.col(static_cast<Eigen::Index>(q)) = finals[q] - blk[static_cast<size_t>(m)].col(W - 1);
    Eigen::MatrixXcd theta = solve_dense_linear(C, R);

    std::vector<std::vector<VecD<D>>> out(finals.size());
    for (size_t q = 0; q < finals.size(); ++q) {
        out[q].resize(static_cast<size_t>(m) + 1);
        const VecD<D> f0 = theta.col(static_cast<Eigen::Index>(q));
        for (int k = 0; k <= m; ++k) {
            const auto& b = blk[static_cast<size_t>(k)];
            out[q][static_cast<size_t>(k)] = b.template block<D, D>(0, 0) * f0 + b.col(W - 1);
        }
        out[q][static_cast<size_t>(m)] = finals[q];
    }
    return out;
}

}  // namespace

template <int D>
std::vector<std::vector<VecD<D>>> solve_mixed_core(const MatD<D>& M, const DiagKernelTable<D>& fwd,
                                                   const std::vector<VecD<D>>* source,
                                                   const std::vector<VecD<D>>& final_values,
                                                   double h, int m, MixedMethod method,
                                                   double* residual_out) {
    if (final_values.empty()) throw InvalidInputError("solve_mixed_core: no final values");
    MixedSystem<D> sys{M, fwd, source, h, m};

    if (m == 0) {
        std::vector<std::vector<VecD<D>>> out(final_values.size());
        for (size_t q = 0; q < final_values.size(); ++q) out[q] = {final_values[q]};
        if (residual_out) *residual_out = 0.0;
        return out;
    }

    // Zero data propagates to the zero solution; skip the solve entirely.
    bool all_zero = true;
    for (const auto& fv : final_values)
        if (max_abs<D>(fv) != 0.0) all_zero = false;
    if (all_zero && source) {
        for (const auto& g : *source)
            if (max_abs<D>(g) != 0.0) all_zero = false;
    }
    if (all_zero) {
        std::vector<std::vector<VecD<D>>> out(final_values.size());
        for (auto& sol : out) sol.assign(static_cast<size_t>(m) + 1, VecD<D>::Zero());
        if (residual_out) *residual_out = 0.0;
        return out;
    }

    MixedMethod chosen = method;
    if (chosen == MixedMethod::automatic)
        chosen = (D * (m + 1) <= 400) ? MixedMethod::dense : MixedMethod::structured;

    auto out = (chosen == MixedMethod::dense) ? mixed_dense<D>(sys, final_values)
                                              : mixed_structured<D>(sys, final_values);
    if (residual_out) {
        double worst = 0.0;
        for (size_t q = 0; q < final_values.size(); ++q)
            worst = std::max(worst, sys.residual(out[q], final_values[q]));
        *residual_out = worst;
    }
    return out;
}

Eigen::VectorXcd convolve_core(const ScalarKernelTable& kernel, LagOrientation orientation,
                               const Eigen::VectorXcd& h_samples, double h, int m) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m + 1);
    if (kernel.zero || m == 0) return out;
    for (int k = 0; k <= m; ++k) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j <= m; ++j) {
            const long lag = (orientation == LagOrientation::forward) ? (k - j) : (j - k);
            acc += trap_w(j, 0, m, h) * kernel.at(lag) * h_samples(j);
        }
        out(k) = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// VolterraProblem wrappers
// ---------------------------------------------------------------------------

namespace {

template <int D>
DiagKernelTable<D> tabulate_diag(const std::function<Eigen::MatrixXcd(double)>& kernel,
                                 double lag_step, int n) {
    DiagKernelTable<D> t;
    t.vals.assign(static_cast<size_t>(n) + 1, VecD<D>::Zero());
    if (!kernel) return t;
    t.zero = false;
    for (int m = 0; m <= n; ++m) {
        Eigen::MatrixXcd K = kernel(lag_step * m);
        if (K.rows() != D || K.cols() != D)
            throw InvalidInputError("VolterraProblem: kernel dimension mismatch");
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b)
                if (a != b && K(a, b) != cplx(0.0, 0.0))
                    throw InvalidInputError("VolterraProblem: memory kernels must be diagonal");
        t.vals[static_cast<size_t>(m)] = K.diagonal();
    }
    return t;
}

template <int D>
std::vector<VecD<D>> source_samples(const VolterraProblem& p) {
    std::vector<VecD<D>> g;
    if (p.source.size() == 0) return g;
    if (p.source.rows() != D || p.source.cols() != p.grid.size())
        throw InvalidInputError("VolterraProblem: source must be dim x (n_steps+1)");
    g.resize(static_cast<size_t>(p.grid.size()));
    for (int k = 0; k < p.grid.size(); ++k) g[static_cast<size_t>(k)] = p.source.col(k);
    return g;
}

template <int D>
Eigen::MatrixXcd pack(const std::vector<VecD<D>>& f) {
    Eigen::MatrixXcd out(D, static_cast<Eigen::Index>(f.size()));
    for (size_t k = 0; k < f.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = f[k];
    return out;
}

template <int D>
Eigen::MatrixXcd backward_dispatch(const VolterraProblem& p) {
    const double h = p.grid.step();
    auto back = tabulate_diag<D>(p.mem_back, -h, p.grid.n_steps);
    auto g = source_samples<D>(p);
    MatD<D> M = p.coeff;
    VecD<D> fin = p.final_value;
    auto f = solve_backward_core<D>(M, back, g.empty() ? nullptr : &g, fin, h, p.grid.n_steps);
    return pack<D>(f);
}

template <int D>
Eigen::MatrixXcd mixed_dispatch(const VolterraProblem& p, double* residual_out) {
    const double h = p.grid.step();
    auto fwd = tabulate_diag<D>(p.mem_fwd, +h, p.grid.n_steps);
    auto g = source_samples<D>(p);
    MatD<D> M = p.coeff;
    std::vector<VecD<D>> fins = {VecD<D>(p.final_value)};
    auto sols = solve_mixed_core<D>(M, fwd, g.empty() ? nullptr : &g, fins, h, p.grid.n_steps,
                                    MixedMethod::automatic, residual_out);
    return pack<D>(sols[0]);
}

void check_problem(const VolterraProblem& p, bool want_back) {
    if (p.dim != 1 && p.dim != 2)
        throw InvalidInputError("VolterraProblem: dim must be 1 or 2");
    if (p.coeff.rows() != p.dim || p.coeff.cols() != p.dim)
        throw InvalidInputError("VolterraProblem: coeff must be dim x dim");
    if (p.final_value.size() != p.dim)
        throw InvalidInputError("VolterraProblem: final_value must have length dim");
    if (p.grid.t_start != 0.0)
        throw InvalidInputError("VolterraProblem: grid must start at s = 0");
    if (want_back && p.mem_fwd)
        throw InvalidInputError("solve_backward: problem carries a [0,s] kernel");
    if (!want_back && p.mem_back)
        throw InvalidInputError("solve_mixed_final_value: problem carries an [s,t] kernel");
}

}  // namespace

Eigen::MatrixXcd solve_backward(const VolterraProblem& problem) {
    check_problem(problem, true);
    return problem.dim == 1 ? backward_dispatch<1>(problem) : backward_dispatch<2>(problem);
}

Eigen::MatrixXcd solve_mixed_final_value(const VolterraProblem& problem, double* residual_out) {
    check_problem(problem, false);
    return problem.dim == 1 ? mixed_dispatch<1>(problem, residual_out)
                            : mixed_dispatch<2>(problem, residual_out);
}

Eigen::VectorXcd convolve_source(const CorrelationKernel& kernel, LagOrientation orientation,
                                 const Eigen::VectorXcd& h_samples, const UniformGrid& grid) {
    if (h_samples.size() != grid.size())
        throw InvalidInputError("convolve_source: sample count does not match grid");
    auto table = ScalarKernelTable::build(kernel, grid.step(), grid.n_steps);
    return convolve_core(table, orientation, h_samples, grid.step(), grid.n_steps);
}

// Explicit instantiations for the system sizes in scope.
template std::vector<VecD<1>> solve_backward_core<1>(const MatD<1>&, const DiagKernelTable<1>&,
                                                     const std::vector<VecD<1>>*, const VecD<1>&,
                                                     double, int);
template std::vector<VecD<2>> solve_backward_core<2>(const MatD<2>&, const DiagKernelTable<2>&,
                                                     const std::vector<VecD<2>>*, const VecD<2>&,
                                                     double, int);
template std::vector<std::vector<VecD<1>>> solve_mixed_core<1>(const MatD<1>&,
                                                               const DiagKernelTable<1>&,
                                                               const std::vector<VecD<1>>*,
                                                               const std::vector<VecD<1>>&, double,
                                                               int, MixedMethod, double*);
template std::vector<std::vector<VecD<2>>> solve_mixed_core<2>(const MatD<2>&,
                                                               const DiagKernelTable<2>&,
                                                               const std::vector<VecD<2>>*,
                                                               const std::vector<VecD<2>>&, double,
                                                               int, MixedMethod, double*);

}  // namespace qdnm
