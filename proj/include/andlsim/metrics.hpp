// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "andlsim/envelope.hpp"
#include "andlsim/ofdm.hpp"

namespace andlsim {

struct BerRecord {
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;
    double ci95 = 0.0; // Wilson 95% half-width
};

BerRecord make_ber_record(std::uint64_t errors, std::uint64_t bits);

/// Hamming distance / length with a Wilson 95% interval. Lengths must match.
BerRecord count_ber(const BitFrame& tx, const BitFrame& rx);

/// Wilson score interval half-width for z standard deviations.
double wilson_half_width(std::uint64_t errors, std::uint64_t bits, double z);

struct PsdEstimate {
    std::vector<double> freqs_hz; // two-sided, ascending
    std::vector<double> density;  // power per Hz; integrates to the variance
    double resolution_hz = 0.0;
};

/// Hann-windowed averaged periodogram. seg_len must be a power of two and
/// no longer than the record; overlap is the fractional segment overlap.
PsdEstimate welch_psd(const ComplexEnvelope& sig, std::size_t seg_len, double overlap);

struct SnrParts {
    double signal_power = 0.0;   // |g|^2 * in-band reference power
    double residual_power = 0.0; // in-band noise + distortion
};

/// In-band least-squares projection of the processed record onto the clean
/// reference; see estimate_snr_db.
SnrParts snr_projection(const ComplexEnvelope& processed, const ComplexEnvelope& clean_ref, double band_hz);

/// In-band output SNR against a known clean reference: the processed record
/// is projected onto the reference with a least-squares complex gain inside
/// |f| <= band_hz/2, signal power is the projected part and
/// noise+distortion is the in-band residual. Returns dB, capped at +100.
double estimate_snr_db(const ComplexEnvelope& processed, const ComplexEnvelope& clean_ref, double band_hz);

struct Histogram {
    std::vector<double> bin_centers;
    std::vector<double> pdf;
};

/// Normalized amplitude (|x|) histogram.
Histogram amplitude_histogram(const ComplexEnvelope& env, int n_bins);

} // namespace andlsim
