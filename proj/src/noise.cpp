// SPDX-License-Identifier: Apache-2.0
#include "andlsim/noise.hpp"

#include <cmath>

#include "andlsim/errors.hpp"

namespace andlsim {

void ImpulseNoiseSpec::validate() const {
    if (arrival_rate_hz < 0.0) throw ConfigError("impulse: arrival rate must be >= 0");
    if (!(burst_duration_s > 0.0)) throw ConfigError("impulse: burst duration must be positive");
    if (burst_variance < 0.0) throw ConfigError("impulse: burst variance must be >= 0");
    if (amplitude_variance < 0.0) throw ConfigError("impulse: amplitude variance must be >= 0");
    if (occupancy() > 1.0) throw ConfigError("impulse: lambda * tau_as exceeds 1");
}

ImpulseNoiseSpec make_impulse_spec(double lambda_hz, double tau_as_s, double sigma_i2) {
    ImpulseNoiseSpec spec;
    spec.arrival_rate_hz = lambda_hz;
    spec.burst_duration_s = tau_as_s;
    spec.burst_variance = sigma_i2;
    spec.amplitude_variance = sigma_i2; // unit-variance gating process
    spec.validate();
    return spec;
}

ComplexEnvelope gen_awgn(const ThermalNoiseSpec& spec, std::size_t n, double rate_hz, RngStream& rng) {
    if (spec.variance < 0.0) throw ConfigError("thermal: variance must be >= 0");
    if (n == 0) throw ConfigError("thermal: need at least one sample");
    ComplexEnvelope env{rate_hz, std::vector<cplx>(n)};
    if (spec.variance == 0.0) return env;
    const double s = std::sqrt(spec.variance / 2.0);
    for (auto& v : env.samples) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        v = {s * re, s * im};
    }
    return env;
}

ComplexEnvelope gen_impulsive(const ImpulseNoiseSpec& spec, std::size_t n, double rate_hz, RngStream& rng) {
    spec.validate();
    if (n == 0) throw ConfigError("impulse: need at least one sample");
    ComplexEnvelope env{rate_hz, std::vector<cplx>(n)};
    if (spec.arrival_rate_hz == 0.0 || spec.burst_variance == 0.0) return env;
    if (rate_hz * spec.burst_duration_s < 1.0)
        throw ConfigError("impulse: burst shorter than one sample at this rate");

    const double t_end = static_cast<double>(n) / rate_hz;
    const double sigma_a = std::sqrt(spec.amplitude_variance);

    // Superposed per-burst amplitudes on the sample grid. Arrivals start at
    // -tau_as so bursts truncated by the record head are represented.
    std::vector<double> gate(n, 0.0);
    double t = -spec.burst_duration_s;
    while (true) {
        t += rng.exponential(spec.arrival_rate_hz);
        if (t >= t_end) break;
        const double amp = sigma_a * rng.gaussian();
        const auto first = static_cast<std::ptrdiff_t>(std::ceil(t * rate_hz));
        const auto last = static_cast<std::ptrdiff_t>(std::ceil((t + spec.burst_duration_s) * rate_hz));
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, first);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), last);
        for (std::ptrdiff_t i = lo; i < hi; ++i) gate[static_cast<std::size_t>(i)] += amp;
    }

    // Unit-variance circular Gaussian drawn only where a burst is active.
    for (std::size_t i = 0; i < n; ++i) {
        if (gate[i] == 0.0) continue;
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        env.samples[i] = {gate[i] * re * 0.70710678118654752440, gate[i] * im * 0.70710678118654752440};
    }
    return env;
}

double occupancy(const ComplexEnvelope& env, double threshold) {
    if (threshold < 0.0) throw ConfigError("occupancy: threshold must be >= 0");
    if (env.samples.empty()) return 0.0;
    std::size_t hits = 0;
    const double thr2 = threshold * threshold;
    for (const auto& v : env.samples)
        if (std::norm(v) > thr2) ++hits;
    return static_cast<double>(hits) / static_cast<double>(env.samples.size());
}

double sir_to_burst_variance(double sir_db, double signal_variance) {
    if (!(signal_variance > 0.0)) throw ConfigError("sir_to_burst_variance: signal variance must be positive");
    if (std::isinf(sir_db) && sir_db > 0.0) return 0.0;
    return signal_variance / std::pow(10.0, sir_db / 10.0);
}

} // namespace andlsim
