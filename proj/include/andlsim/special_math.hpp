// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace andlsim {

double erf(double x);
double erfc(double x);

/// Inverse error function on (-1, 1). Throws ConfigError outside the domain.
double erf_inv(double y);

/// Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2.
double q_function(double x);

} // namespace andlsim
