// SPDX-License-Identifier: Apache-2.0
#include "andlsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "andlsim/errors.hpp"
#include "andlsim/fft.hpp"

namespace andlsim {

double wilson_half_width(std::uint64_t errors, std::uint64_t bits, double z) {
    if (bits == 0) return 0.0;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    return (z / (1.0 + z2 / n)) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
}

BerRecord make_ber_record(std::uint64_t errors, std::uint64_t bits) {
    BerRecord rec;
    rec.errors = errors;
    rec.bits = bits;
    rec.ber = bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
    rec.ci95 = wilson_half_width(errors, bits, 1.959963984540054);
    return rec;
}

BerRecord count_ber(const BitFrame& tx, const BitFrame& rx) {
    if (tx.size() != rx.size()) throw ConfigError("count_ber: frame lengths differ");
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) errors += tx[i] != rx[i];
    return make_ber_record(errors, tx.size());
}

PsdEstimate welch_psd(const ComplexEnvelope& sig, std::size_t seg_len, double overlap) {
    if (seg_len == 0 || !is_pow2(seg_len)) throw ConfigError("welch_psd: segment length must be a power of two");
    if (seg_len > sig.samples.size()) throw ConfigError("welch_psd: segment longer than record");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("welch_psd: overlap must lie in [0, 1)");

    std::vector<double> window(seg_len);
    double wsq = 0.0;
    for (std::size_t i = 0; i < seg_len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(6.283185307179586 * static_cast<double>(i) / static_cast<double>(seg_len));
        wsq += window[i] * window[i];
    }

    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((1.0 - overlap) * seg_len)));
    std::vector<double> acc(seg_len, 0.0);
    std::size_t n_segs = 0;
    std::vector<cplx> seg(seg_len);
    for (std::size_t start = 0; start + seg_len <= sig.samples.size(); start += hop) {
        for (std::size_t i = 0; i < seg_len; ++i) seg[i] = sig.samples[start + i] * window[i];
        fft_inplace(seg, false);
        for (std::size_t i = 0; i < seg_len; ++i) acc[i] += std::norm(seg[i]);
        ++n_segs;
    }

    PsdEstimate out;
    out.resolution_hz = sig.sample_rate_hz / static_cast<double>(seg_len);
    out.freqs_hz.resize(seg_len);
    out.density.resize(seg_len);
    const double norm = 1.0 / (static_cast<double>(n_segs) * wsq * sig.sample_rate_hz);
    // fftshift to ascending two-sided frequencies
    for (std::size_t i = 0; i < seg_len; ++i) {
        const std::size_t src = (i + seg_len / 2) % seg_len;
        const auto bin = static_cast<double>(i) - static_cast<double>(seg_len / 2);
        out.freqs_hz[i] = bin * out.resolution_hz;
        out.density[i] = acc[src] * norm;
    }
    return out;
}

SnrParts snr_projection(const ComplexEnvelope& processed, const ComplexEnvelope& clean_ref, double band_hz) {
    if (processed.samples.size() != clean_ref.samples.size())
        throw ConfigError("estimate_snr: record lengths differ");
    if (!(band_hz > 0.0)) throw ConfigError("estimate_snr: band must be positive");

    const std::size_t n = next_pow2(processed.samples.size());
    std::vector<cplx> p(n, cplx{0.0, 0.0});
    std::vector<cplx> c(n, cplx{0.0, 0.0});
    std::copy(processed.samples.begin(), processed.samples.end(), p.begin());
    std::copy(clean_ref.samples.begin(), clean_ref.samples.end(), c.begin());
    fft_inplace(p, false);
    fft_inplace(c, false);

    const double fres = processed.sample_rate_hz / static_cast<double>(n);
    cplx cross{0.0, 0.0};
    double cpow = 0.0;
    const auto in_band = [&](std::size_t i) {
        const auto k = static_cast<double>(i < n / 2 ? i : static_cast<double>(i) - static_cast<double>(n));
        return std::abs(k) * fres <= band_hz / 2.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_band(i)) continue;
        cross += p[i] * std::conj(c[i]);
        cpow += std::norm(c[i]);
    }
    if (cpow == 0.0) throw ConfigError("estimate_snr: reference has no in-band power");
    const cplx g = cross / cpow;
    double nd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_band(i)) continue;
        nd += std::norm(p[i] - g * c[i]);
    }
    return SnrParts{std::norm(g) * cpow, nd};
}

double estimate_snr_db(const ComplexEnvelope& processed, const ComplexEnvelope& clean_ref, double band_hz) {
    const SnrParts parts = snr_projection(processed, clean_ref, band_hz);
    if (parts.residual_power <= parts.signal_power * 1e-10) return 100.0;
    return std::min(100.0, 10.0 * std::log10(parts.signal_power / parts.residual_power));
}

Histogram amplitude_histogram(const ComplexEnvelope& env, int n_bins) {
    if (n_bins < 1) throw ConfigError("amplitude_histogram: need at least one bin");
    double peak = 0.0;
    for (const auto& v : env.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) peak = 1.0;
    const double width = peak / n_bins;
    Histogram h;
    h.bin_centers.resize(static_cast<std::size_t>(n_bins));
    h.pdf.assign(static_cast<std::size_t>(n_bins), 0.0);
    for (int i = 0; i < n_bins; ++i) h.bin_centers[static_cast<std::size_t>(i)] = (i + 0.5) * width;
    for (const auto& v : env.samples) {
        auto idx = static_cast<std::size_t>(std::abs(v) / width);
        if (idx >= h.pdf.size()) idx = h.pdf.size() - 1;
        h.pdf[idx] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(env.samples.size()) * width);
    for (auto& v : h.pdf) v *= norm;
    return h;
}

} // namespace andlsim
