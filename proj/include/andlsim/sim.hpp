// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "andlsim/analytic.hpp"
#include "andlsim/limiter.hpp"
#include "andlsim/metrics.hpp"
#include "andlsim/mitigators.hpp"
#include "andlsim/noise.hpp"
#include "andlsim/ofdm.hpp"

namespace andlsim {

enum class Mitigation { None, Linear, AndlExact, AndlSimplified, AndlFilterBank, Blanking, Clipping };
enum class RxFilter { Matched, ModifiedMatched };
enum class SweepAxis { EbN0, Sir, Lambda, TauAs };

const char* to_string(Mitigation m);
Mitigation mitigation_from_string(const std::string& name);
const char* to_string(RxFilter f);
RxFilter rx_filter_from_string(const std::string& name);
SweepAxis axis_from_string(const std::string& name);

struct SimScenario {
    OfdmConfig ofdm;

    // exactly one of each pair
    std::optional<double> ebn0_db;
    std::optional<double> sigma_w2; // total complex variance at the analog rate

    std::optional<double> sir_db;
    std::optional<double> sigma_i2; // burst-conditioned variance at the analog rate
    double lambda_hz = 0.0;
    double tau_as_s = 1e-6;

    Mitigation mitigation = Mitigation::None;
    std::optional<RxFilter> rx_filter; // default: ModifiedMatched for limiter/linear paths, Matched otherwise
    AndlConfig andl;                   // tau0_s <= 0 means 1/(4 pi B_s)
    std::optional<double> threshold;   // fixed blank/clip threshold; otherwise searched

    int n_symbols = 200;
    std::uint64_t seed = 1;

    RxFilter effective_rx_filter() const;
    double effective_tau0() const;
    void validate() const; // throws ConfigError
};

struct ResultRecord {
    std::string method;
    double ebn0_db = 0.0;
    double sir_db = 0.0; // +inf when no impulsive noise is configured
    double lambda_hz = 0.0;
    double tau_as_s = 0.0;
    BerRecord ber;
    double snr_out_db = 0.0;
    std::optional<double> snr_analytic_db;
    std::optional<double> ber_bound;
    std::uint64_t seed = 0;
    std::uint64_t fingerprint = 0;
    double wall_time_s = 0.0;
    std::optional<PowerBreakdown> analytic;
    std::optional<double> threshold_used;
};

struct ExecOptions {
    int jobs = 0;             // 0 = library default (all hardware threads)
    bool force_serial = false; // use the serial reference path
    int snr_probe_symbols = 24; // symbols used for the output-SNR estimate
};

/// Scenario quantities resolved once per cell: filter chain, calibrated
/// noise levels, analytic grid. Exposed so tests and tools can introspect
/// the calibration.
struct CellSetup {
    LinkChain chain;
    double tau0_s = 0.0;
    double eb = 0.0;              // realized energy per bit through the chain
    double n0 = 0.0;              // thermal noise density
    double sigma_w2_analog = 0.0; // at the analog rate
    double ebn0_db = 0.0;
    ImpulseNoiseSpec impulse;     // zero-rate spec when no impulse noise
    double sir_db = 0.0;          // +inf when no impulse noise
};

CellSetup resolve_scenario(const SimScenario& s);

/// Transmit bits plus the clean and received analog-rate records for one
/// Monte Carlo symbol. All randomness is drawn from streams derived from
/// (seed, symbol_index, component), independent of mitigation method.
struct SymbolRecord {
    BitFrame bits;
    ComplexEnvelope clean;    // shaped signal, analog rate
    ComplexEnvelope received; // clean + thermal + impulsive
};

SymbolRecord build_symbol_record(const SimScenario& s, const CellSetup& setup, std::uint64_t symbol_index);

/// Receive tail shared by every mitigation path: receive filter at the ADC
/// rate, chip sampling, gain normalization, transform, hard decision.
BitFrame demodulate_adc(const ComplexEnvelope& adc, const CellSetup& setup, RxFilter filter);

/// Full link for one scenario cell. Deterministic per seed; the parallel
/// and serial paths produce identical records.
ResultRecord run_scenario(const SimScenario& s, const ExecOptions& exec = {});

/// Sweep one axis over the given values for each method, with common random
/// numbers across methods (and values). Results sorted by (method, value).
std::vector<ResultRecord> sweep(const SimScenario& base, SweepAxis axis, const std::vector<double>& values,
                                const std::vector<Mitigation>& methods, const ExecOptions& exec = {});

/// Analytic engine only (no Monte Carlo): one record per axis value with the
/// simulation fields empty.
std::vector<ResultRecord> analyze(const SimScenario& base, SweepAxis axis, const std::vector<double>& values);

/// Closed-form breakdown for a resolved limiter-family scenario.
PowerBreakdown analytic_breakdown(const SimScenario& s, const CellSetup& setup);

void emit_results_csv(const std::vector<ResultRecord>& records, std::ostream& out);
void emit_results_json(const std::vector<ResultRecord>& records, std::ostream& out);
std::vector<ResultRecord> parse_results_csv(std::istream& in);

/// Key-value config file -> scenario. Unknown keys fail loudly.
SimScenario parse_config_text(const std::string& text);
SimScenario parse_config(const std::string& path);

/// Hash of the tx bits and noise records of the first symbols of a
/// scenario; identical across mitigation methods by construction.
std::uint64_t noise_fingerprint(const SimScenario& s, int symbols = 4);

/// Invariant suite behind the `selftest` subcommand. Prints one line per
/// check; returns the number of failures.
int run_selftest(std::ostream& out, const ExecOptions& exec = {});

} // namespace andlsim
