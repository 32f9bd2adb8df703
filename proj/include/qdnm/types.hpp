#pragma once

#include <complex>

namespace qdnm {

using cplx = std::complex<double>;

}  // namespace qdnm
