#pragma once

#include <complex>
#include <vector>

namespace sparse_pr {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

}  // namespace sparse_pr
