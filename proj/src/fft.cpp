// SPDX-License-Identifier: Apache-2.0
#include "andlsim/fft.hpp"

#include <cmath>
#include <unordered_map>

#include "andlsim/errors.hpp"

namespace andlsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Half-size twiddle table for the forward transform, cached per length.
const std::vector<cplx>& twiddle_table(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(a), std::sin(a)};
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

} // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw ConfigError("fft: length must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const auto& tw = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = tw[k * stride];
                if (inverse) w = std::conj(w);
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
}

std::vector<cplx> dft_unitary(const std::vector<cplx>& x) {
    std::vector<cplx> out = x;
    fft_inplace(out, false);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= s;
    return out;
}

std::vector<cplx> idft_unitary(const std::vector<cplx>& x) {
    std::vector<cplx> out = x;
    fft_inplace(out, true);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= s;
    return out;
}

} // namespace andlsim
