// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "andlsim/envelope.hpp"

namespace andlsim {

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n);

/// In-place radix-2 FFT, unnormalized. forward uses e^{-j2pi kn/N}.
/// Length must be a power of two.
void fft_inplace(std::vector<cplx>& data, bool inverse);

/// Unitary DFT pair (1/sqrt(N) scaling both directions).
std::vector<cplx> dft_unitary(const std::vector<cplx>& x);
std::vector<cplx> idft_unitary(const std::vector<cplx>& x);

} // namespace andlsim
