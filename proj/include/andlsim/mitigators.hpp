// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "andlsim/envelope.hpp"
#include "andlsim/metrics.hpp"

namespace andlsim {

enum class ThresholdMethod { Blanking, Clipping };

struct ThresholdSpec {
    double value = 0.0;
    ThresholdMethod method = ThresholdMethod::Blanking;
};

/// y = x where |x| <= thr, 0 otherwise.
ComplexEnvelope blank(const ComplexEnvelope& sig, double thr);

/// Magnitude clamp with phase preserved: y = x where |x| <= thr, else
/// thr * x/|x|.
ComplexEnvelope clip(const ComplexEnvelope& sig, double thr);

struct SimScenario;

struct ThresholdSearchResult {
    ThresholdSpec spec;
    BerRecord ber;                // at the selected threshold
    std::vector<double> grid;     // evaluated thresholds, ascending
    std::vector<double> grid_ber; // BER per grid point (same seeds)
};

/// Exhaustive grid search for the blanking/clipping threshold: the full
/// Monte Carlo link is evaluated at every grid point with common random
/// numbers, and the threshold of least BER is returned (ties resolve to the
/// smaller threshold). `trials` is the OFDM symbol count per point.
ThresholdSearchResult optimize_threshold(ThresholdMethod method, const SimScenario& scenario,
                                         const std::vector<double>& grid, int trials);

/// Default 40-point logarithmic grid spanning 0.5..8 times the rms of the
/// received ADC-rate signal implied by the scenario.
std::vector<double> default_threshold_grid(const SimScenario& scenario);

} // namespace andlsim
