// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace andlsim {

/// Two-component Gaussian mixture for the limiter input: the impulse-free
/// component has variance sigma_s^2 + sigma_w^2 and weight 1-epsilon, the
/// impulse-present component adds sigma_i^2 and carries weight epsilon.
struct MixtureParams {
    double epsilon = 0.0;
    double sigma_s2 = 0.0;
    double sigma_w2 = 0.0;
    double sigma_i2 = 0.0;

    double sigma1() const;
    double sigma2() const;
    void validate() const;
};

/// Level grid mirror of the filter bank plus the square-pulse durations used
/// in the residual-power integrals. dt_s drives the signal and thermal
/// terms; dt_impulse_s drives the impulse term.
struct QuantizationGrid {
    double alpha0 = 0.0;
    double delta_alpha = 0.2;
    int n = 0;
    double kappa = 1.0;
    double tau0_s = 0.0;
    double dt_s = 0.0;
    double dt_impulse_s = 0.0;

    double alpha(int k) const { return alpha0 + k * delta_alpha; }
    double tau(int k) const { return tau0_s * alpha(k) / alpha0; }
    void validate() const;
};

struct PowerBreakdown {
    double p_s = 0.0;
    double p_w = 0.0;
    double p_i = 0.0;
    double snr_avg = 0.0;   // +inf sentinel when p_w + p_i == 0
    double ber_bound = 0.0; // Q(sqrt(2 snr_avg))
};

/// Amplitude-region probabilities for one mixture component of deviation
/// sigma: p[0] = 1 - erfc(alpha0/(sqrt2 kappa sigma)), p[k] the erfc
/// difference across region k. The mass beyond alpha_n is NOT folded in;
/// sum(p) + erfc(alpha_n/(sqrt2 kappa sigma)) == 1.
std::vector<double> region_probs(double sigma, const QuantizationGrid& grid);

/// Mixture-averaged time parameter sum((1-eps) p_k1 + eps p_k2) tau_k, with
/// the residual tail mass beyond alpha_n clamped into region n.
double mean_tau(const MixtureParams& mix, const QuantizationGrid& grid);

/// Residual energy of a unit-height square pulse of duration dt through a
/// first-order filter charging with time constant tau and discharging with
/// tau0, scaled by a^2.
double step_response_power(double tau, double tau0, double a, double dt);

/// E[|X|] for X ~ N(mu, sigma^2).
double folded_normal_mean(double mu, double sigma);

/// Representative impulse amplitude in region k: alpha0 for k = 0, the
/// region center alpha0 + (2k-1) dalpha/2 for k >= 1.
double impulse_region_mean(const QuantizationGrid& grid, int k);

/// Closed-form residual powers, average output SNR, and the BER bound.
PowerBreakdown residual_powers(const MixtureParams& mix, const QuantizationGrid& grid);

} // namespace andlsim
