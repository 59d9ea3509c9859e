// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "andlsim/envelope.hpp"

namespace andlsim {

enum class Modulation { Bpsk };

/// One bit per element, values 0/1. Length must divide into frames of
/// n_subcarriers bits (BPSK).
using BitFrame = std::vector<std::uint8_t>;

/// Link geometry. Three clock domains:
///   chip rate   = bandwidth_hz            (serialized IDFT samples)
///   ADC rate    = chip rate * adc_oversample
///   analog rate = ADC rate * oversample_factor   ("analog" emulation grid)
struct OfdmConfig {
    int n_subcarriers = 512;     // N, power of two
    double bandwidth_hz = 100e3; // B_s
    double rolloff = 0.25;       // RRC roll-off beta
    int oversample_factor = 32;  // analog samples per ADC sample, >= 4
    int adc_oversample = 4;      // ADC samples per chip; ADC rate >= B_s(1+beta)
    int rrc_span_chips = 10;     // total RRC span in chip intervals, >= 4
    Modulation modulation = Modulation::Bpsk;

    double symbol_duration_s() const { return n_subcarriers / bandwidth_hz; }
    double chip_rate_hz() const { return bandwidth_hz; }
    double adc_rate_hz() const { return bandwidth_hz * adc_oversample; }
    double analog_rate_hz() const { return adc_rate_hz() * oversample_factor; }
    int analog_per_chip() const { return adc_oversample * oversample_factor; }
    /// Guard chips prepended/appended around each OFDM symbol so the RRC
    /// transient is contained in the record.
    int pad_chips() const { return rrc_span_chips; }
    int frame_chips() const { return n_subcarriers + 2 * pad_chips(); }
    std::size_t analog_len() const { return static_cast<std::size_t>(frame_chips()) * analog_per_chip(); }
    std::size_t adc_len() const { return static_cast<std::size_t>(frame_chips()) * adc_oversample; }

    void validate() const; // throws ConfigError
};

// ---- bit <-> symbol maps ----------------------------------------------------

/// BPSK map 0 -> +1, 1 -> -1. Input length must divide by n_subcarriers.
std::vector<cplx> modulate_bits(const BitFrame& bits, const OfdmConfig& cfg);

/// Hard decision on the real part; Re >= 0 decodes to bit 0 (ties to 0).
BitFrame demap_bits(const std::vector<cplx>& symbols);

// ---- transform core ---------------------------------------------------------

/// Unitary IDFT of one frame of N frequency-domain symbols to N chips.
std::vector<cplx> ofdm_core_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg);

/// Forward transform of a chip-rate record (one sample per subcarrier-time,
/// length a multiple of N) back to frequency-domain symbols. Inverse of
/// ofdm_core_modulate.
std::vector<cplx> ofdm_demodulate(const ComplexEnvelope& chips, const OfdmConfig& cfg);

// ---- pulse shaping and filtering --------------------------------------------

/// Root-raised-cosine taps; span_chips chip intervals total, sps samples per
/// chip, odd length span_chips*sps+1, normalized to unit energy.
std::vector<double> rrc_taps(double rolloff, int sps, int span_chips);

/// Centered same-length convolution with a real, odd-length kernel.
ComplexEnvelope fir_filter_same(const ComplexEnvelope& x, const std::vector<double>& taps);

/// Centered anti-alias filtering evaluated only at the retained samples,
/// then decimation by `factor`. Output rate = input rate / factor.
ComplexEnvelope fir_decimate(const ComplexEnvelope& x, const std::vector<double>& taps, int factor);

/// Kaiser-window lowpass design. Frequencies are in cycles/sample.
std::vector<double> kaiser_lowpass_taps(double cutoff, double transition, double atten_db);

/// Full transmit synthesis: unitary IDFT, zero-guard padding, zero-stuffed
/// upsampling to the analog rate and RRC shaping (power preserving:
/// the interpolation kernel has energy equal to the upsampling factor).
ComplexEnvelope ofdm_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg);

/// Matched filter (RRC, time-reversed conjugate == itself; real symmetric)
/// at the ADC rate.
ComplexEnvelope matched_filter(const ComplexEnvelope& sig, const OfdmConfig& cfg);

/// Matched filter with first-derivative correction h + tau0 * dh/dt
/// (central difference over the ADC interval). Compensates the in-band
/// response of a first-order lowpass with time constant tau0 placed ahead
/// of the ADC. tau0 = 0 degenerates to matched_filter.
ComplexEnvelope modified_matched_filter(const ComplexEnvelope& sig, const OfdmConfig& cfg, double tau0_s);

/// ADC front end: anti-alias lowpass plus decimation from the analog rate
/// to the ADC rate, phase-aligned so chip centers stay on sample
/// (pad + i) * adc_oversample.
ComplexEnvelope decimate_to_adc(const ComplexEnvelope& analog, const OfdmConfig& cfg);

/// Pick the N chip-center samples out of an ADC-rate record.
ComplexEnvelope sample_chips(const ComplexEnvelope& adc, const OfdmConfig& cfg);

// ---- precomputed per-scenario filter chain ----------------------------------

/// Tap sets and composite gains for one link configuration. gain_* are the
/// chip-in/chip-out amplitude gains of the clean cascade
/// (shape -> anti-alias -> decimate -> receive filter -> chip sampling),
/// measured once so the demodulator can normalize exactly.
struct LinkChain {
    OfdmConfig cfg;
    double tau0_s = 0.0;
    std::vector<double> tx_taps;  // analog rate
    std::vector<double> aa_taps;  // analog rate
    std::vector<double> mf_taps;  // ADC rate
    std::vector<double> mmf_taps; // ADC rate
    double gain_matched = 1.0;
    double gain_modified = 1.0;

    static LinkChain make(const OfdmConfig& cfg, double tau0_s);
};

} // namespace andlsim
