// SPDX-License-Identifier: Apache-2.0
#include "andlsim/special_math.hpp"

#include <cmath>

#include "andlsim/errors.hpp"

namespace andlsim {

namespace {
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
}

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double erf_inv(double y) {
    if (!(y > -1.0 && y < 1.0)) throw ConfigError("erf_inv: argument outside (-1, 1)");
    if (y == 0.0) return 0.0;

    // Initial guess (Winitzki approximation), then Newton on std::erf.
    const double a = 0.147;
    const double ln1my2 = std::log(1.0 - y * y);
    const double t1 = 2.0 / (3.1415926535897932 * a) + ln1my2 / 2.0;
    double u = std::copysign(std::sqrt(std::sqrt(t1 * t1 - ln1my2 / a) - t1), y);

    for (int it = 0; it < 60; ++it) {
        const double err = std::erf(u) - y;
        const double deriv = 2.0 / kSqrtPi * std::exp(-u * u);
        const double step = err / deriv;
        u -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(u))) break;
    }
    return u;
}

double q_function(double x) { return 0.5 * std::erfc(x / 1.4142135623730950488016887242097); }

} // namespace andlsim
