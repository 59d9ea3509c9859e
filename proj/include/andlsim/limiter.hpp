// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "andlsim/envelope.hpp"

namespace andlsim {

enum class LimiterMode { Exact, Simplified, FilterBank, Linear };

struct AndlConfig {
    double tau0_s = 0.0;       // fixed linear-regime time constant
    double zeta = 4.68e-3;     // distortionless-level constant
    double kappa = 1.0;        // tuning constant for the simplified law
    double delta_alpha = 0.2;  // filter-bank level spacing (amplitude units)
    int n_levels = 1;          // filter-bank level count above alpha0
    LimiterMode mode = LimiterMode::Exact;

    void validate() const; // throws ConfigError
};

/// Quantized-time-constant approximation grid: alphas[k] = alpha0 + k*dalpha
/// and taus[k] = (alphas[k]/alpha0) * tau0.
struct FilterBank {
    std::vector<double> alphas;
    std::vector<double> taus;

    int levels() const { return static_cast<int>(alphas.size()) - 1; }
};

/// Resolution parameter, held constant over one OFDM symbol.
struct ResolutionState {
    double alpha = 0.0;
    double sigma_z = 0.0;
};

enum class SigmaEstimator {
    StdDev,       // per-component standard deviation of z
    RobustMedian, // median(|z|) / sqrt(ln 4): outlier-immune per-component estimate
};

/// First-order lowpass chi' = (x - chi)/tau, explicit Euler, chi(0) = x(0).
/// Throws NumericGuardError when dt >= tau.
ComplexEnvelope linear_lowpass(const ComplexEnvelope& x, double tau_s);

/// Complement of linear_lowpass: x - lowpass(x). DC in, zero out.
ComplexEnvelope first_order_highpass(const ComplexEnvelope& x, double tau_s);

/// Differential limiter, exact law: tau grows with |x - chi| beyond alpha,
/// capping the output slew rate at alpha/tau0. Linear (tau = tau0) inside
/// the resolution band.
ComplexEnvelope andl_exact(const ComplexEnvelope& x, const AndlConfig& cfg, const ResolutionState& res);

/// Simplified law: the time parameter is selected by kappa*|x| against
/// alpha0 instead of the difference signal.
ComplexEnvelope andl_simplified(const ComplexEnvelope& x, const AndlConfig& cfg, const ResolutionState& res);

/// Uniform level grid covering [0, alpha0 + n*dalpha]; requires the top
/// level to exceed xmax. Throws ConfigError naming the required n if not.
FilterBank build_filter_bank(double alpha0, double delta_alpha, int n, double tau0, double xmax);

/// Piecewise-linear-filter approximation: per sample, the time constant of
/// the region containing kappa*|x| is used for one Euler update.
ComplexEnvelope andl_filterbank(const ComplexEnvelope& x, const FilterBank& bank, const AndlConfig& cfg);

/// Resolution parameter from a signal+thermal record (or an outlier-robust
/// estimate of one): alpha = erf_inv(1 - zeta) * sqrt(2) * sigma_z with
/// sigma_z the per-component deviation of the tau0-highpassed input.
/// The result is floored at 1e-12 for silent inputs.
ResolutionState compute_resolution(const ComplexEnvelope& clean_plus_thermal, double tau0_s, double zeta,
                                   SigmaEstimator estimator = SigmaEstimator::StdDev);

/// sigma_z -> alpha mapping used by compute_resolution.
double resolution_alpha(double sigma_z, double zeta);

} // namespace andlsim
