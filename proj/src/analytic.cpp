// SPDX-License-Identifier: Apache-2.0
#include "andlsim/analytic.hpp"

#include <cmath>
#include <limits>

#include "andlsim/errors.hpp"
#include "andlsim/special_math.hpp"

namespace andlsim {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kTwoOverPi = 0.63661977236758134307553505349006;
}

double MixtureParams::sigma1() const { return std::sqrt(sigma_s2 + sigma_w2); }
double MixtureParams::sigma2() const { return std::sqrt(sigma_s2 + sigma_w2 + sigma_i2); }

void MixtureParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("mixture: epsilon must lie in [0, 1]");
    if (sigma_s2 < 0.0 || sigma_w2 < 0.0 || sigma_i2 < 0.0) throw ConfigError("mixture: negative variance");
}

void QuantizationGrid::validate() const {
    if (!(alpha0 > 0.0)) throw ConfigError("grid: alpha0 must be positive");
    if (!(delta_alpha > 0.0)) throw ConfigError("grid: delta_alpha must be positive");
    if (n < 0) throw ConfigError("grid: n must be >= 0");
    if (!(kappa > 0.0)) throw ConfigError("grid: kappa must be positive");
    if (!(tau0_s > 0.0)) throw ConfigError("grid: tau0 must be positive");
    if (!(dt_s > 0.0)) throw ConfigError("grid: dt must be positive");
    if (!(dt_impulse_s > 0.0)) throw ConfigError("grid: impulse dt must be positive");
}

std::vector<double> region_probs(double sigma, const QuantizationGrid& grid) {
    if (!(sigma > 0.0)) throw ConfigError("region_probs: sigma must be positive");
    const double denom = kSqrt2 * grid.kappa * sigma;
    std::vector<double> p(static_cast<std::size_t>(grid.n) + 1);
    p[0] = 1.0 - erfc(grid.alpha(0) / denom);
    for (int k = 1; k <= grid.n; ++k)
        p[static_cast<std::size_t>(k)] = erfc(grid.alpha(k - 1) / denom) - erfc(grid.alpha(k) / denom);
    return p;
}

namespace {

// Region probabilities with the tail mass beyond alpha_n folded into the top
// region, as the bank's coverage contract assumes.
std::vector<double> region_probs_clamped(double sigma, const QuantizationGrid& grid) {
    auto p = region_probs(sigma, grid);
    p.back() += erfc(grid.alpha(grid.n) / (kSqrt2 * grid.kappa * sigma));
    return p;
}

} // namespace

double mean_tau(const MixtureParams& mix, const QuantizationGrid& grid) {
    mix.validate();
    grid.validate();
    const auto p1 = region_probs_clamped(mix.sigma1(), grid);
    const auto p2 = region_probs_clamped(mix.sigma2(), grid);
    double acc = 0.0;
    for (int k = 0; k <= grid.n; ++k)
        acc += ((1.0 - mix.epsilon) * p1[static_cast<std::size_t>(k)] + mix.epsilon * p2[static_cast<std::size_t>(k)]) *
               grid.tau(k);
    return acc;
}

double step_response_power(double tau, double tau0, double a, double dt) {
    if (!(tau > 0.0 && tau0 > 0.0 && dt > 0.0)) throw ConfigError("step_response_power: nonpositive parameter");
    const double e1 = std::exp(-dt / tau);
    const double e2 = std::exp(-2.0 * dt / tau);
    const double charge = dt - 0.5 * tau * e2 + 2.0 * tau * e1 - 1.5 * tau;
    const double a0 = a * (1.0 - e1);
    return a * a * charge + a0 * a0 * tau0 / 2.0;
}

double folded_normal_mean(double mu, double sigma) {
    if (sigma < 0.0) throw ConfigError("folded_normal_mean: sigma must be >= 0");
    if (sigma == 0.0) return std::abs(mu);
    const double phi_cdf = 0.5 * erfc(mu / (kSqrt2 * sigma)); // standard normal CDF at -mu/sigma
    return sigma * std::sqrt(kTwoOverPi) * std::exp(-mu * mu / (2.0 * sigma * sigma)) + mu * (1.0 - 2.0 * phi_cdf);
}

double impulse_region_mean(const QuantizationGrid& grid, int k) {
    if (k < 0 || k > grid.n) throw ConfigError("impulse_region_mean: region index out of range");
    if (k == 0) return grid.alpha0;
    return grid.alpha0 + (2.0 * k - 1.0) * grid.delta_alpha / 2.0;
}

PowerBreakdown residual_powers(const MixtureParams& mix, const QuantizationGrid& grid) {
    mix.validate();
    grid.validate();
    const auto p1 = region_probs_clamped(mix.sigma1(), grid);
    const auto p2 = region_probs_clamped(mix.sigma2(), grid);

    double filter_sum = 0.0; // mixture-weighted unit-amplitude residual energies
    double p_i = 0.0;
    for (int k = 0; k <= grid.n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double psig = step_response_power(grid.tau(k), grid.tau0_s, 1.0, grid.dt_s);
        filter_sum += ((1.0 - mix.epsilon) * p1[ku] + mix.epsilon * p2[ku]) * psig;
        const double ei = impulse_region_mean(grid, k);
        p_i += ei * ei * p2[ku] * step_response_power(grid.tau(k), grid.tau0_s, 1.0, grid.dt_impulse_s);
    }
    p_i *= mix.epsilon;

    const double es = folded_normal_mean(0.0, std::sqrt(mix.sigma_s2));
    const double ew = folded_normal_mean(0.0, std::sqrt(mix.sigma_w2));

    PowerBreakdown out;
    out.p_s = es * es * filter_sum;
    out.p_w = ew * ew * filter_sum;
    out.p_i = p_i;
    const double denom = out.p_w + out.p_i;
    if (denom == 0.0) {
        out.snr_avg = std::numeric_limits<double>::infinity();
        out.ber_bound = 0.0;
    } else {
        out.snr_avg = out.p_s / denom;
        out.ber_bound = q_function(std::sqrt(2.0 * out.snr_avg));
    }
    return out;
}

} // namespace andlsim
