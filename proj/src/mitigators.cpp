// SPDX-License-Identifier: Apache-2.0
#include "andlsim/mitigators.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "andlsim/errors.hpp"
#include "andlsim/sim.hpp"

namespace andlsim {

ComplexEnvelope blank(const ComplexEnvelope& sig, double thr) {
    if (thr < 0.0) throw ConfigError("blank: threshold must be >= 0");
    ComplexEnvelope out = sig;
    const double thr2 = thr * thr;
    for (auto& v : out.samples)
        if (std::norm(v) > thr2) v = {0.0, 0.0};
    return out;
}

ComplexEnvelope clip(const ComplexEnvelope& sig, double thr) {
    if (thr < 0.0) throw ConfigError("clip: threshold must be >= 0");
    ComplexEnvelope out = sig;
    const double thr2 = thr * thr;
    for (auto& v : out.samples) {
        if (std::norm(v) <= thr2) continue;
        v *= thr / std::abs(v);
        // rescaling can land one ulp above the threshold; nudge down so the
        // magnitude bound holds exactly and a second pass is a no-op
        while (std::norm(v) > thr2) v *= 0.99999999999999989;
    }
    return out;
}

std::vector<double> default_threshold_grid(const SimScenario& scenario) {
    const CellSetup setup = resolve_scenario(scenario);
    const double f_adc = scenario.ofdm.adc_rate_hz();
    const double f_analog = scenario.ofdm.analog_rate_hz();
    const double eps = scenario.lambda_hz * scenario.tau_as_s;
    // rms of the received ADC-rate signal: unit signal power, thermal within
    // the ADC band, impulse density folded into the ADC band.
    const double var =
        1.0 + setup.n0 * f_adc + eps * setup.impulse.burst_variance * (f_adc / f_analog);
    const double sigma_x = std::sqrt(var);
    const int n = 40;
    const double lo = 0.5 * sigma_x, hi = 8.0 * sigma_x;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return grid;
}

ThresholdSearchResult optimize_threshold(ThresholdMethod method, const SimScenario& scenario,
                                         const std::vector<double>& grid, int trials) {
    if (grid.empty()) throw ConfigError("optimize_threshold: empty grid");
    if (trials < 1) throw ConfigError("optimize_threshold: need at least one trial");

    SimScenario s = scenario;
    s.mitigation = method == ThresholdMethod::Blanking ? Mitigation::Blanking : Mitigation::Clipping;
    const CellSetup setup = resolve_scenario(s);
    const RxFilter rx = s.effective_rx_filter();

    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    const auto g = sorted.size();

    // Common random numbers: one noise realization per symbol, every
    // threshold evaluated against it.
    std::vector<std::uint64_t> errors(static_cast<std::size_t>(trials) * g, 0);
    const auto eval_symbol = [&](int j) {
        const SymbolRecord rec = build_symbol_record(s, setup, static_cast<std::uint64_t>(j));
        const ComplexEnvelope adc0 = fir_decimate(rec.received, setup.chain.aa_taps, s.ofdm.oversample_factor);
        for (std::size_t k = 0; k < g; ++k) {
            const ComplexEnvelope y =
                method == ThresholdMethod::Blanking ? blank(adc0, sorted[k]) : clip(adc0, sorted[k]);
            const BitFrame rx_bits = demodulate_adc(y, setup, rx);
            std::uint64_t e = 0;
            for (std::size_t i = 0; i < rec.bits.size(); ++i) e += rec.bits[i] != rx_bits[i];
            errors[static_cast<std::size_t>(j) * g + k] = e;
        }
    };

#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < trials; ++j) eval_symbol(j);

    const std::uint64_t bits =
        static_cast<std::uint64_t>(trials) * static_cast<std::uint64_t>(s.ofdm.n_subcarriers);
    ThresholdSearchResult res;
    res.grid = sorted;
    res.grid_ber.resize(g);
    std::size_t best = 0;
    std::uint64_t best_err = ~0ULL;
    for (std::size_t k = 0; k < g; ++k) {
        std::uint64_t e = 0;
        for (int j = 0; j < trials; ++j) e += errors[static_cast<std::size_t>(j) * g + k];
        res.grid_ber[k] = static_cast<double>(e) / static_cast<double>(bits);
        if (e < best_err) { // ties resolve to the smaller threshold
            best_err = e;
            best = k;
        }
    }
    res.spec.method = method;
    res.spec.value = sorted[best];
    res.ber = make_ber_record(best_err, bits);
    return res;
}

} // namespace andlsim
