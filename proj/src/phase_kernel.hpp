// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace wqaoa::detail {

/// c[k] = cos(gamma v[k]), s[k] = sin(gamma v[k]). Built with vector math
/// where available; results agree with libm to a few ulp.
void phase_tables(double gamma, std::span<const double> v, std::span<double> c, std::span<double> s);

}  // namespace wqaoa::detail
