#pragma once

#include <Eigen/Dense>

#include "qdnm/errors.hpp"
#include "qdnm/types.hpp"

namespace qdnm {

// Dense complex solve with partial pivoting. A pivot smaller than
// 1e-14 * ||A||_inf is treated as singular rather than silently amplified.
Eigen::VectorXcd solve_dense_linear(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b);

// Multi right-hand-side variant sharing one factorization.
Eigen::MatrixXcd solve_dense_linear(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

}  // namespace qdnm
