// SPDX-License-Identifier: Apache-2.0
#include "andlsim/envelope.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include "andlsim/errors.hpp"

namespace andlsim {

void ComplexEnvelope::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("envelope: sample rate must be positive");
    if (samples.empty()) throw ConfigError("envelope: empty record");
    for (const auto& v : samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ConfigError("envelope: non-finite sample");
    }
}

double mean_power(const ComplexEnvelope& env) {
    double acc = 0.0;
    for (const auto& v : env.samples) acc += std::norm(v);
    return env.samples.empty() ? 0.0 : acc / static_cast<double>(env.samples.size());
}

double peak_magnitude(const ComplexEnvelope& env) {
    double peak = 0.0;
    for (const auto& v : env.samples) peak = std::max(peak, std::abs(v));
    return peak;
}

void dump_csv(const ComplexEnvelope& env, const std::string& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
    if (!f) throw ConfigError("cannot open " + path);
    std::fprintf(f.get(), "t_s,re,im\n");
    const double dt = env.dt_s();
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", static_cast<double>(i) * dt, env.samples[i].real(),
                     env.samples[i].imag());
    }
}

} // namespace andlsim
