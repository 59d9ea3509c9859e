// SPDX-License-Identifier: Apache-2.0
#include "andlsim/ofdm.hpp"

#include <algorithm>
#include <cmath>

#include "andlsim/errors.hpp"
#include "andlsim/fft.hpp"

namespace andlsim {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

void require_rate(const ComplexEnvelope& sig, double rate_hz, const char* where) {
    if (!close_rel(sig.sample_rate_hz, rate_hz, 1e-9))
        throw ConfigError(std::string(where) + ": unexpected sample rate");
}

} // namespace

void OfdmConfig::validate() const {
    if (n_subcarriers < 2 || !is_pow2(static_cast<std::size_t>(n_subcarriers)))
        throw ConfigError("ofdm: n_subcarriers must be a power of two >= 2");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("ofdm: bandwidth must be positive");
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) throw ConfigError("ofdm: rolloff must be in [0, 1]");
    if (oversample_factor < 4) throw ConfigError("ofdm: oversample_factor must be >= 4");
    if (adc_oversample < 1) throw ConfigError("ofdm: adc_oversample must be >= 1");
    if (adc_rate_hz() < bandwidth_hz * (1.0 + rolloff))
        throw ConfigError("ofdm: ADC rate below the Nyquist rate of the shaped signal");
    if (rrc_span_chips < 4) throw ConfigError("ofdm: rrc_span_chips must be >= 4");
}

std::vector<cplx> modulate_bits(const BitFrame& bits, const OfdmConfig& cfg) {
    if (bits.empty() || bits.size() % static_cast<std::size_t>(cfg.n_subcarriers) != 0)
        throw ConfigError("modulate_bits: bit count must be a nonzero multiple of n_subcarriers");
    std::vector<cplx> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = bits[i] ? cplx(-1.0, 0.0) : cplx(1.0, 0.0);
    return symbols;
}

BitFrame demap_bits(const std::vector<cplx>& symbols) {
    BitFrame bits(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) bits[i] = symbols[i].real() >= 0.0 ? 0 : 1;
    return bits;
}

std::vector<cplx> ofdm_core_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg) {
    if (symbols.size() != static_cast<std::size_t>(cfg.n_subcarriers))
        throw ConfigError("ofdm_core_modulate: expected exactly n_subcarriers symbols");
    return idft_unitary(symbols);
}

std::vector<cplx> ofdm_demodulate(const ComplexEnvelope& chips, const OfdmConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_subcarriers);
    if (chips.samples.empty() || chips.samples.size() % n != 0)
        throw ConfigError("ofdm_demodulate: record length must be a nonzero multiple of n_subcarriers");
    std::vector<cplx> out;
    out.reserve(chips.samples.size());
    std::vector<cplx> frame(n);
    for (std::size_t off = 0; off < chips.samples.size(); off += n) {
        std::copy_n(chips.samples.begin() + static_cast<std::ptrdiff_t>(off), n, frame.begin());
        auto sym = dft_unitary(frame);
        out.insert(out.end(), sym.begin(), sym.end());
    }
    return out;
}

std::vector<double> rrc_taps(double rolloff, int sps, int span_chips) {
    if (sps < 1 || span_chips < 1) throw ConfigError("rrc_taps: bad geometry");
    const int n = span_chips * sps + 1;
    const int mid = (n - 1) / 2;
    std::vector<double> h(static_cast<std::size_t>(n));
    const double b = rolloff;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - mid) / sps; // chip units
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 - b + 4.0 * b / kPi;
        } else if (b > 0.0 && std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-9) {
            v = (b / std::sqrt(2.0)) *
                ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) + (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
        } else {
            const double num = std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b));
            const double den = kPi * t * (1.0 - 16.0 * b * b * t * t);
            v = num / den;
        }
        h[static_cast<std::size_t>(i)] = v;
    }
    double energy = 0.0;
    for (double v : h) energy += v * v;
    const double s = 1.0 / std::sqrt(energy);
    for (double& v : h) v *= s;
    return h;
}

ComplexEnvelope fir_filter_same(const ComplexEnvelope& x, const std::vector<double>& taps) {
    if (taps.empty() || taps.size() % 2 == 0) throw ConfigError("fir_filter_same: odd tap count required");
    const auto n = static_cast<std::ptrdiff_t>(x.samples.size());
    const auto t = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t c = (t - 1) / 2;
    ComplexEnvelope y{x.sample_rate_hz, std::vector<cplx>(x.samples.size())};
    // true convolution: y[i] = sum_k taps[k] x[i + c - k]
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, i + c - n + 1);
        const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(t, i + c + 1);
        double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
        for (std::ptrdiff_t k = k0; k < k1; ++k) {
            const cplx v = x.samples[static_cast<std::size_t>(i + c - k)];
            re += taps[static_cast<std::size_t>(k)] * v.real();
            im += taps[static_cast<std::size_t>(k)] * v.imag();
        }
        y.samples[static_cast<std::size_t>(i)] = {re, im};
    }
    return y;
}

ComplexEnvelope fir_decimate(const ComplexEnvelope& x, const std::vector<double>& taps, int factor) {
    if (factor < 1) throw ConfigError("fir_decimate: factor must be >= 1");
    if (taps.empty() || taps.size() % 2 == 0) throw ConfigError("fir_decimate: odd tap count required");
    const auto n = static_cast<std::ptrdiff_t>(x.samples.size());
    const auto t = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t c = (t - 1) / 2;
    const std::size_t m = static_cast<std::size_t>((n - 1) / factor) + 1;
    ComplexEnvelope y{x.sample_rate_hz / factor, std::vector<cplx>(m)};
    for (std::size_t j = 0; j < m; ++j) {
        const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j) * factor;
        const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, i + c - n + 1);
        const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(t, i + c + 1);
        double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
        for (std::ptrdiff_t k = k0; k < k1; ++k) {
            const cplx v = x.samples[static_cast<std::size_t>(i + c - k)];
            re += taps[static_cast<std::size_t>(k)] * v.real();
            im += taps[static_cast<std::size_t>(k)] * v.imag();
        }
        y.samples[j] = {re, im};
    }
    return y;
}

std::vector<double> kaiser_lowpass_taps(double cutoff, double transition, double atten_db) {
    if (!(cutoff > 0.0 && cutoff < 0.5)) throw ConfigError("kaiser_lowpass_taps: cutoff outside (0, 0.5)");
    if (!(transition > 0.0)) throw ConfigError("kaiser_lowpass_taps: transition must be positive");
    double beta = 0.0;
    if (atten_db > 50.0)
        beta = 0.1102 * (atten_db - 8.7);
    else if (atten_db >= 21.0)
        beta = 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
    int n = static_cast<int>(std::ceil((atten_db - 7.95) / (2.285 * 2.0 * kPi * transition)));
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;
    const int mid = (n - 1) / 2;
    const double i0b = std::cyl_bessel_i(0.0, beta);
    std::vector<double> h(static_cast<std::size_t>(n));
    double dc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = static_cast<double>(i - mid);
        const double sinc = (m == 0.0) ? 2.0 * cutoff : std::sin(2.0 * kPi * cutoff * m) / (kPi * m);
        const double r = m / mid;
        const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        h[static_cast<std::size_t>(i)] = sinc * w;
        dc += h[static_cast<std::size_t>(i)];
    }
    for (double& v : h) v /= dc; // unit passband gain
    return h;
}

ComplexEnvelope ofdm_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg) {
    cfg.validate();
    const auto chips = ofdm_core_modulate(symbols, cfg);
    const int m = cfg.analog_per_chip();
    auto taps = rrc_taps(cfg.rolloff, m, cfg.rrc_span_chips);
    const double scale = std::sqrt(static_cast<double>(m)); // power-preserving interpolation
    for (double& v : taps) v *= scale;

    ComplexEnvelope out{cfg.analog_rate_hz(), std::vector<cplx>(cfg.analog_len())};
    const auto t = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t c = (t - 1) / 2;
    const auto len = static_cast<std::ptrdiff_t>(out.samples.size());
    for (int ci = 0; ci < cfg.n_subcarriers; ++ci) {
        const cplx v = chips[static_cast<std::size_t>(ci)];
        const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(cfg.pad_chips() + ci) * m - c;
        const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, -p);
        const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(t, len - p);
        for (std::ptrdiff_t k = k0; k < k1; ++k)
            out.samples[static_cast<std::size_t>(p + k)] += v * taps[static_cast<std::size_t>(k)];
    }
    return out;
}

ComplexEnvelope matched_filter(const ComplexEnvelope& sig, const OfdmConfig& cfg) {
    require_rate(sig, cfg.adc_rate_hz(), "matched_filter");
    return fir_filter_same(sig, rrc_taps(cfg.rolloff, cfg.adc_oversample, cfg.rrc_span_chips));
}

namespace {

std::vector<double> mmf_taps_from(const std::vector<double>& h, double tau0_s, double dt_s) {
    std::vector<double> out(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double next = (k + 1 < h.size()) ? h[k + 1] : 0.0;
        const double prev = (k > 0) ? h[k - 1] : 0.0;
        out[k] = h[k] + tau0_s * (next - prev) / (2.0 * dt_s);
    }
    return out;
}

} // namespace

ComplexEnvelope modified_matched_filter(const ComplexEnvelope& sig, const OfdmConfig& cfg, double tau0_s) {
    require_rate(sig, cfg.adc_rate_hz(), "modified_matched_filter");
    if (tau0_s < 0.0) throw ConfigError("modified_matched_filter: tau0 must be >= 0");
    const auto h = rrc_taps(cfg.rolloff, cfg.adc_oversample, cfg.rrc_span_chips);
    return fir_filter_same(sig, mmf_taps_from(h, tau0_s, 1.0 / cfg.adc_rate_hz()));
}

ComplexEnvelope decimate_to_adc(const ComplexEnvelope& analog, const OfdmConfig& cfg) {
    require_rate(analog, cfg.analog_rate_hz(), "decimate_to_adc");
    const double l = cfg.oversample_factor;
    const auto taps = kaiser_lowpass_taps(0.5 / l, 0.4 / l, 70.0);
    return fir_decimate(analog, taps, cfg.oversample_factor);
}

ComplexEnvelope sample_chips(const ComplexEnvelope& adc, const OfdmConfig& cfg) {
    require_rate(adc, cfg.adc_rate_hz(), "sample_chips");
    ComplexEnvelope out{cfg.chip_rate_hz(), std::vector<cplx>(static_cast<std::size_t>(cfg.n_subcarriers))};
    for (int i = 0; i < cfg.n_subcarriers; ++i) {
        const std::size_t idx = static_cast<std::size_t>(cfg.pad_chips() + i) * cfg.adc_oversample;
        if (idx >= adc.samples.size()) throw ConfigError("sample_chips: record too short");
        out.samples[static_cast<std::size_t>(i)] = adc.samples[idx];
    }
    return out;
}

LinkChain LinkChain::make(const OfdmConfig& cfg, double tau0_s) {
    cfg.validate();
    LinkChain lc;
    lc.cfg = cfg;
    lc.tau0_s = tau0_s;

    const int m = cfg.analog_per_chip();
    lc.tx_taps = rrc_taps(cfg.rolloff, m, cfg.rrc_span_chips);
    const double scale = std::sqrt(static_cast<double>(m));
    for (double& v : lc.tx_taps) v *= scale;
    lc.aa_taps = kaiser_lowpass_taps(0.5 / cfg.oversample_factor, 0.4 / cfg.oversample_factor, 70.0);
    lc.mf_taps = rrc_taps(cfg.rolloff, cfg.adc_oversample, cfg.rrc_span_chips);
    lc.mmf_taps = mmf_taps_from(lc.mf_taps, tau0_s, 1.0 / cfg.adc_rate_hz());

    // Composite chip-in/chip-out gain of the clean cascade, measured on a
    // single unit chip in the middle of a frame.
    const int mid_chip = cfg.n_subcarriers / 2;
    ComplexEnvelope analog{cfg.analog_rate_hz(), std::vector<cplx>(cfg.analog_len())};
    {
        const auto t = static_cast<std::ptrdiff_t>(lc.tx_taps.size());
        const std::ptrdiff_t c = (t - 1) / 2;
        const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(cfg.pad_chips() + mid_chip) * m - c;
        for (std::ptrdiff_t k = 0; k < t; ++k)
            analog.samples[static_cast<std::size_t>(p + k)] += lc.tx_taps[static_cast<std::size_t>(k)];
    }
    const auto adc = fir_decimate(analog, lc.aa_taps, cfg.oversample_factor);
    const std::size_t chip_idx = static_cast<std::size_t>(cfg.pad_chips() + mid_chip) * cfg.adc_oversample;
    const auto pick = [&](const std::vector<double>& taps) {
        const auto y = fir_filter_same(adc, taps);
        return y.samples[chip_idx].real();
    };
    lc.gain_matched = pick(lc.mf_taps);
    lc.gain_modified = pick(lc.mmf_taps);
    return lc;
}

} // namespace andlsim
