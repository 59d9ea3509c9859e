// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace andlsim {

// Stream components. All randomness in a simulation is drawn from streams
// derived as hash(master seed, symbol index, tag), so parallel and serial
// executions consume identical values and methods sharing a master seed see
// identical bits and noise (common random numbers).
enum class StreamTag : std::uint64_t {
    TxBits = 1,
    Thermal = 2,
    Impulse = 3,
    Generic = 4,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

/// xoshiro256++ with explicit seeding from a 64-bit key. Gaussian variates
/// use a Box-Muller pair so the draw count per call is fixed and the stream
/// is reproducible bit-for-bit across platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static RngStream derive(std::uint64_t master, std::uint64_t index, StreamTag tag) {
        return RngStream(hash_mix(hash_mix(master, index), static_cast<std::uint64_t>(tag)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in (0, 1]; never returns 0 so log() is safe.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    bool bit() { return (next_u64() >> 63) != 0; }

    /// Standard normal, Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(uniform01()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace andlsim
