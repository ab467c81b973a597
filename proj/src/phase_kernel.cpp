// SPDX-License-Identifier: Apache-2.0
#include "phase_kernel.hpp"

#include <cmath>
#include <cstddef>

namespace wqaoa::detail {

void phase_tables(double gamma, std::span<const double> v, std::span<double> c, std::span<double> s) {
  const double* in = v.data();
  double* co = c.data();
  double* si = s.data();
  const std::size_t n = v.size();
#pragma omp simd
  for (std::size_t k = 0; k < n; ++k) {
    const double t = gamma * in[k];
    co[k] = std::cos(t);
    si[k] = std::sin(t);
  }
}

}  // namespace wqaoa::detail
