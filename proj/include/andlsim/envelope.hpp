// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace andlsim {

using cplx = std::complex<double>;

/// Uniformly sampled complex baseband waveform with explicit sample rate.
/// This is the carrier type passed between every pipeline stage.
struct ComplexEnvelope {
    double sample_rate_hz = 0.0;
    std::vector<cplx> samples;

    std::size_t size() const { return samples.size(); }
    double dt_s() const { return 1.0 / sample_rate_hz; }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    /// Throws ConfigError on non-positive rate, empty record, or non-finite samples.
    void validate() const;
};

/// Mean of |x|^2 over the record.
double mean_power(const ComplexEnvelope& env);

/// Largest |x| over the record.
double peak_magnitude(const ComplexEnvelope& env);

/// Debug dump, columns: t_s, re, im
void dump_csv(const ComplexEnvelope& env, const std::string& path);

} // namespace andlsim
