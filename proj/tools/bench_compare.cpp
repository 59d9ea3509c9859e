// SPDX-License-Identifier: Apache-2.0
//
// Benchmark: OpenMP-parallel Monte Carlo kernel against the serial
// reference path on one limiter cell, with a result-equality check.

#include <chrono>
#include <cstdio>

#include "andlsim/sim.hpp"

using namespace andlsim;

namespace {

double time_run(const SimScenario& s, const ExecOptions& exec, ResultRecord& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_scenario(s, exec);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    SimScenario s;
    s.ofdm.n_subcarriers = 512;
    s.ofdm.bandwidth_hz = 100e3;
    s.ebn0_db = 8.0;
    s.lambda_hz = 2e5;
    s.sir_db = 0.0;
    s.tau_as_s = 1e-6;
    s.mitigation = Mitigation::AndlExact;
    s.n_symbols = argc > 1 ? std::atoi(argv[1]) : 32;
    s.seed = 42;

    ExecOptions serial;
    serial.force_serial = true;
    ExecOptions parallel;

    ResultRecord rs, rp;
    const double ts = time_run(s, serial, rs);
    const double tp = time_run(s, parallel, rp);

    std::printf("symbols            : %d\n", s.n_symbols);
    std::printf("serial reference   : %8.3f s   (errors %llu / %llu bits)\n", ts,
                static_cast<unsigned long long>(rs.ber.errors), static_cast<unsigned long long>(rs.ber.bits));
    std::printf("openmp parallel    : %8.3f s   (errors %llu / %llu bits)\n", tp,
                static_cast<unsigned long long>(rp.ber.errors), static_cast<unsigned long long>(rp.ber.bits));
    std::printf("speedup            : %8.2fx\n", ts / tp);

    const bool equal = rs.ber.errors == rp.ber.errors && rs.ber.bits == rp.ber.bits &&
                       rs.snr_out_db == rp.snr_out_db && rs.fingerprint == rp.fingerprint;
    std::printf("results identical  : %s\n", equal ? "yes" : "NO");
    return equal ? 0 : 1;
}
