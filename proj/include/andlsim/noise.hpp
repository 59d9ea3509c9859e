// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "andlsim/envelope.hpp"
#include "andlsim/rng.hpp"

namespace andlsim {

struct ThermalNoiseSpec {
    double variance = 0.0; // total complex variance per sample
};

/// Poisson-gated bursty impulsive noise. burst_variance is the in-burst
/// per-sample power (conditional on a single burst being active);
/// amplitude_variance is Var(A_k) of the per-burst real Gaussian amplitude.
/// With the unit-variance gating process the calibration is
/// amplitude_variance = burst_variance.
struct ImpulseNoiseSpec {
    double arrival_rate_hz = 0.0;  // lambda
    double burst_duration_s = 1e-6; // tau_as, fixed for all bursts
    double burst_variance = 0.0;    // sigma_i^2
    double amplitude_variance = 0.0; // sigma_A^2

    double occupancy() const { return arrival_rate_hz * burst_duration_s; }
    void validate() const; // throws ConfigError
};

ImpulseNoiseSpec make_impulse_spec(double lambda_hz, double tau_as_s, double sigma_i2);

/// I.i.d. circular complex Gaussian with total variance spec.variance
/// (variance/2 per real component).
ComplexEnvelope gen_awgn(const ThermalNoiseSpec& spec, std::size_t n, double rate_hz, RngStream& rng);

/// Bursty impulsive noise per the gated model: Poisson arrivals at rate
/// lambda over [-tau_as, T_record] (so edge bursts are unbiased), each burst
/// occupying [t_k, t_k + tau_as) with a per-burst amplitude A_k ~ N(0,
/// sigma_A^2) multiplying a common unit-variance circular Gaussian process.
/// Overlapping bursts superpose their amplitudes. Exactly zero between
/// bursts.
ComplexEnvelope gen_impulsive(const ImpulseNoiseSpec& spec, std::size_t n, double rate_hz, RngStream& rng);

/// Fraction of samples with |x| > threshold.
double occupancy(const ComplexEnvelope& env, double threshold);

/// Burst-conditioned impulse variance from an SIR in dB:
/// sigma_i^2 = signal_variance / 10^(sir_db/10).
double sir_to_burst_variance(double sir_db, double signal_variance);

} // namespace andlsim
