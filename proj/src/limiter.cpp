// SPDX-License-Identifier: Apache-2.0
#include "andlsim/limiter.hpp"

#include <algorithm>
#include <cmath>

#include "andlsim/errors.hpp"
#include "andlsim/special_math.hpp"

namespace andlsim {

namespace {

constexpr double kAlphaFloor = 1e-12;
constexpr double kSqrtLn4 = 1.1774100225154746910115693264597; // Rayleigh median / per-component sigma

void check_step(double dt, double tau, const char* where) {
    if (!(tau > 0.0)) throw ConfigError(std::string(where) + ": time constant must be positive");
    if (dt >= tau) throw NumericGuardError(std::string(where) + ": integration step >= time constant");
}

} // namespace

void AndlConfig::validate() const {
    if (!(tau0_s > 0.0)) throw ConfigError("andl: tau0 must be positive");
    if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("andl: zeta must lie in (0, 1)");
    if (!(kappa > 0.0)) throw ConfigError("andl: kappa must be positive");
    if (!(delta_alpha > 0.0)) throw ConfigError("andl: delta_alpha must be positive");
    if (n_levels < 0) throw ConfigError("andl: n_levels must be >= 0");
}

ComplexEnvelope linear_lowpass(const ComplexEnvelope& x, double tau_s) {
    const double dt = x.dt_s();
    check_step(dt, tau_s, "linear_lowpass");
    ComplexEnvelope y{x.sample_rate_hz, std::vector<cplx>(x.samples.size())};
    if (x.samples.empty()) return y;
    const double a = dt / tau_s;
    cplx chi = x.samples[0];
    y.samples[0] = chi;
    for (std::size_t i = 1; i < x.samples.size(); ++i) {
        chi += a * (x.samples[i - 1] - chi);
        y.samples[i] = chi;
    }
    return y;
}

ComplexEnvelope first_order_highpass(const ComplexEnvelope& x, double tau_s) {
    ComplexEnvelope y = linear_lowpass(x, tau_s);
    for (std::size_t i = 0; i < x.samples.size(); ++i) y.samples[i] = x.samples[i] - y.samples[i];
    return y;
}

ComplexEnvelope andl_exact(const ComplexEnvelope& x, const AndlConfig& cfg, const ResolutionState& res) {
    cfg.validate();
    const double dt = x.dt_s();
    check_step(dt, cfg.tau0_s, "andl_exact");
    const double alpha = std::max(res.alpha, kAlphaFloor);
    ComplexEnvelope y{x.sample_rate_hz, std::vector<cplx>(x.samples.size())};
    if (x.samples.empty()) return y;
    cplx chi = x.samples[0];
    y.samples[0] = chi;
    const double a0 = dt / cfg.tau0_s;
    for (std::size_t i = 1; i < x.samples.size(); ++i) {
        const cplx d = x.samples[i - 1] - chi;
        const double mag = std::abs(d);
        const double a = (mag <= alpha) ? a0 : a0 * (alpha / mag);
        chi += a * d;
        y.samples[i] = chi;
    }
    return y;
}

ComplexEnvelope andl_simplified(const ComplexEnvelope& x, const AndlConfig& cfg, const ResolutionState& res) {
    cfg.validate();
    const double dt = x.dt_s();
    check_step(dt, cfg.tau0_s, "andl_simplified");
    const double alpha0 = std::max(res.alpha, kAlphaFloor);
    ComplexEnvelope y{x.sample_rate_hz, std::vector<cplx>(x.samples.size())};
    if (x.samples.empty()) return y;
    cplx chi = x.samples[0];
    y.samples[0] = chi;
    const double a0 = dt / cfg.tau0_s;
    for (std::size_t i = 1; i < x.samples.size(); ++i) {
        const double drive = cfg.kappa * std::abs(x.samples[i - 1]);
        const double a = (drive <= alpha0) ? a0 : a0 * (alpha0 / drive);
        chi += a * (x.samples[i - 1] - chi);
        y.samples[i] = chi;
    }
    return y;
}

FilterBank build_filter_bank(double alpha0, double delta_alpha, int n, double tau0, double xmax) {
    if (!(alpha0 > 0.0)) throw ConfigError("filter_bank: alpha0 must be positive");
    if (!(delta_alpha > 0.0)) throw ConfigError("filter_bank: delta_alpha must be positive");
    if (n < 0) throw ConfigError("filter_bank: n must be >= 0");
    if (!(tau0 > 0.0)) throw ConfigError("filter_bank: tau0 must be positive");
    const double top = alpha0 + n * delta_alpha;
    if (xmax > top) {
        const int needed = static_cast<int>(std::ceil((xmax - alpha0) / delta_alpha));
        throw ConfigError("filter_bank: range not covered, need n >= " + std::to_string(needed));
    }
    FilterBank bank;
    bank.alphas.resize(static_cast<std::size_t>(n) + 1);
    bank.taus.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        bank.alphas[static_cast<std::size_t>(k)] = alpha0 + k * delta_alpha;
        bank.taus[static_cast<std::size_t>(k)] = tau0 * bank.alphas[static_cast<std::size_t>(k)] / alpha0;
    }
    return bank;
}

ComplexEnvelope andl_filterbank(const ComplexEnvelope& x, const FilterBank& bank, const AndlConfig& cfg) {
    cfg.validate();
    if (bank.alphas.empty()) throw ConfigError("andl_filterbank: empty bank");
    const double dt = x.dt_s();
    check_step(dt, bank.taus.front(), "andl_filterbank");
    const double alpha0 = bank.alphas.front();
    const double dalpha = bank.alphas.size() > 1 ? bank.alphas[1] - bank.alphas[0] : 0.0;
    const int n = bank.levels();
    ComplexEnvelope y{x.sample_rate_hz, std::vector<cplx>(x.samples.size())};
    if (x.samples.empty()) return y;
    cplx chi = x.samples[0];
    y.samples[0] = chi;
    for (std::size_t i = 1; i < x.samples.size(); ++i) {
        const double drive = cfg.kappa * std::abs(x.samples[i - 1]);
        int k = 0;
        if (drive > alpha0) {
            if (n == 0 || dalpha <= 0.0) throw NumericGuardError("andl_filterbank: range not covered");
            k = static_cast<int>(std::ceil((drive - alpha0) / dalpha));
            if (k > n) {
                if (drive > bank.alphas.back() * (1.0 + 1e-12))
                    throw NumericGuardError("andl_filterbank: range not covered");
                k = n;
            }
        }
        chi += (dt / bank.taus[static_cast<std::size_t>(k)]) * (x.samples[i - 1] - chi);
        y.samples[i] = chi;
    }
    return y;
}

double resolution_alpha(double sigma_z, double zeta) {
    return std::max(erf_inv(1.0 - zeta) * std::sqrt(2.0) * sigma_z, kAlphaFloor);
}

ResolutionState compute_resolution(const ComplexEnvelope& clean_plus_thermal, double tau0_s, double zeta,
                                   SigmaEstimator estimator) {
    if (clean_plus_thermal.samples.empty()) throw ConfigError("compute_resolution: empty window");
    if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("compute_resolution: zeta must lie in (0, 1)");
    const ComplexEnvelope z = first_order_highpass(clean_plus_thermal, tau0_s);

    double sigma = 0.0;
    if (estimator == SigmaEstimator::StdDev) {
        double acc = 0.0;
        for (const auto& v : z.samples) acc += std::norm(v);
        sigma = std::sqrt(acc / (2.0 * static_cast<double>(z.samples.size())));
    } else {
        std::vector<double> mags(z.samples.size());
        for (std::size_t i = 0; i < z.samples.size(); ++i) mags[i] = std::abs(z.samples[i]);
        const std::size_t mid = mags.size() / 2;
        std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
        double med = mags[mid];
        if (mags.size() % 2 == 0) {
            const double lower = *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid));
            med = 0.5 * (med + lower);
        }
        sigma = med / kSqrtLn4;
    }
    return ResolutionState{resolution_alpha(sigma, zeta), sigma};
}

} // namespace andlsim
