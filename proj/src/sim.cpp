// SPDX-License-Identifier: Apache-2.0
#include "andlsim/sim.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "andlsim/errors.hpp"
#include "andlsim/special_math.hpp"
#include "json.hpp"

namespace andlsim {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrtLn4 = 1.1774100225154746910115693264597;

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

int thread_count(const ExecOptions& exec) {
    if (exec.force_serial) return 1;
    return exec.jobs > 0 ? exec.jobs : omp_get_max_threads();
}

} // namespace

// ---- enum names -------------------------------------------------------------

const char* to_string(Mitigation m) {
    switch (m) {
    case Mitigation::None: return "None";
    case Mitigation::Linear: return "Linear";
    case Mitigation::AndlExact: return "AndlExact";
    case Mitigation::AndlSimplified: return "AndlSimplified";
    case Mitigation::AndlFilterBank: return "AndlFilterBank";
    case Mitigation::Blanking: return "Blanking";
    case Mitigation::Clipping: return "Clipping";
    }
    return "?";
}

Mitigation mitigation_from_string(const std::string& name) {
    for (Mitigation m : {Mitigation::None, Mitigation::Linear, Mitigation::AndlExact, Mitigation::AndlSimplified,
                         Mitigation::AndlFilterBank, Mitigation::Blanking, Mitigation::Clipping})
        if (name == to_string(m)) return m;
    throw ConfigError("unknown mitigation '" + name + "'");
}

const char* to_string(RxFilter f) { return f == RxFilter::Matched ? "Matched" : "ModifiedMatched"; }

RxFilter rx_filter_from_string(const std::string& name) {
    if (name == "Matched") return RxFilter::Matched;
    if (name == "ModifiedMatched") return RxFilter::ModifiedMatched;
    throw ConfigError("unknown rx_filter '" + name + "'");
}

SweepAxis axis_from_string(const std::string& name) {
    if (name == "EbN0" || name == "ebn0") return SweepAxis::EbN0;
    if (name == "SIR" || name == "sir") return SweepAxis::Sir;
    if (name == "Lambda" || name == "lambda") return SweepAxis::Lambda;
    if (name == "TauAs" || name == "tau_as") return SweepAxis::TauAs;
    throw ConfigError("unknown sweep axis '" + name + "'");
}

// ---- scenario ---------------------------------------------------------------

RxFilter SimScenario::effective_rx_filter() const {
    if (rx_filter) return *rx_filter;
    switch (mitigation) {
    case Mitigation::Linear:
    case Mitigation::AndlExact:
    case Mitigation::AndlSimplified:
    case Mitigation::AndlFilterBank: return RxFilter::ModifiedMatched;
    default: return RxFilter::Matched;
    }
}

double SimScenario::effective_tau0() const {
    return andl.tau0_s > 0.0 ? andl.tau0_s : 1.0 / (4.0 * kPi * ofdm.bandwidth_hz);
}

void SimScenario::validate() const {
    ofdm.validate();
    if (ebn0_db.has_value() == sigma_w2.has_value())
        throw ConfigError("scenario: specify exactly one of ebn0_db and sigma_w2");
    if (sigma_w2 && *sigma_w2 < 0.0) throw ConfigError("scenario: sigma_w2 must be >= 0");
    if (lambda_hz < 0.0) throw ConfigError("scenario: lambda_hz must be >= 0");
    if (!(tau_as_s > 0.0)) throw ConfigError("scenario: tau_as_s must be positive");
    if (lambda_hz > 0.0 && sir_db.has_value() == sigma_i2.has_value())
        throw ConfigError("scenario: specify exactly one of sir_db and sigma_i2");
    if (lambda_hz == 0.0 && (sir_db || sigma_i2))
        throw ConfigError("scenario: impulse level given but lambda_hz is zero");
    if (sigma_i2 && *sigma_i2 < 0.0) throw ConfigError("scenario: sigma_i2 must be >= 0");
    if (n_symbols < 1) throw ConfigError("scenario: n_symbols must be >= 1");
    if (threshold && *threshold < 0.0) throw ConfigError("scenario: threshold must be >= 0");
    AndlConfig resolved = andl;
    resolved.tau0_s = effective_tau0();
    resolved.validate();
}

CellSetup resolve_scenario(const SimScenario& s) {
    s.validate();
    CellSetup setup;
    setup.tau0_s = s.effective_tau0();
    setup.chain = LinkChain::make(s.ofdm, setup.tau0_s);

    const double f_adc = s.ofdm.adc_rate_hz();
    const double f_analog = s.ofdm.analog_rate_hz();
    setup.eb = setup.chain.gain_matched * setup.chain.gain_matched / f_adc;
    if (s.ebn0_db) {
        setup.ebn0_db = *s.ebn0_db;
        setup.n0 = setup.eb / db_to_lin(*s.ebn0_db);
        setup.sigma_w2_analog = setup.n0 * f_analog;
    } else {
        setup.sigma_w2_analog = *s.sigma_w2;
        setup.n0 = setup.sigma_w2_analog / f_analog;
        setup.ebn0_db = setup.n0 > 0.0 ? 10.0 * std::log10(setup.eb / setup.n0) : kInf;
    }

    if (s.lambda_hz > 0.0) {
        // SIR compares power spectral densities inside the acquisition band:
        // at SIR = 0 dB an active burst is as loud per Hz as the unit-power
        // signal is over its bandwidth. This keeps the in-band impulse level
        // (and therefore BER) independent of the emulation oversampling.
        const double sig_var_ref = f_analog / s.ofdm.bandwidth_hz;
        double si2;
        if (s.sir_db) {
            setup.sir_db = *s.sir_db;
            si2 = sir_to_burst_variance(*s.sir_db, sig_var_ref);
        } else {
            si2 = *s.sigma_i2;
            setup.sir_db = si2 > 0.0 ? 10.0 * std::log10(sig_var_ref / si2) : kInf;
        }
        setup.impulse = make_impulse_spec(s.lambda_hz, s.tau_as_s, si2);
    } else {
        setup.sir_db = kInf;
        setup.impulse = ImpulseNoiseSpec{0.0, s.tau_as_s, 0.0, 0.0};
    }
    return setup;
}

// ---- per-symbol synthesis ----------------------------------------------------

namespace {

ComplexEnvelope shape_with_taps(const std::vector<cplx>& chips, const OfdmConfig& cfg,
                                const std::vector<double>& taps) {
    ComplexEnvelope out{cfg.analog_rate_hz(), std::vector<cplx>(cfg.analog_len())};
    const int m = cfg.analog_per_chip();
    const auto t = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t c = (t - 1) / 2;
    const auto len = static_cast<std::ptrdiff_t>(out.samples.size());
    for (int ci = 0; ci < cfg.n_subcarriers; ++ci) {
        const cplx v = chips[static_cast<std::size_t>(ci)];
        const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(cfg.pad_chips() + ci) * m - c;
        const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, -p);
        const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(t, len - p);
        for (std::ptrdiff_t k = k0; k < k1; ++k)
            out.samples[static_cast<std::size_t>(p + k)] += v * taps[static_cast<std::size_t>(k)];
    }
    return out;
}

ComplexEnvelope decimate_with_setup(const ComplexEnvelope& analog, const CellSetup& setup) {
    return fir_decimate(analog, setup.chain.aa_taps, setup.chain.cfg.oversample_factor);
}

} // namespace

SymbolRecord build_symbol_record(const SimScenario& s, const CellSetup& setup, std::uint64_t symbol_index) {
    const OfdmConfig& cfg = s.ofdm;
    SymbolRecord rec;

    auto bits_rng = RngStream::derive(s.seed, symbol_index, StreamTag::TxBits);
    rec.bits.resize(static_cast<std::size_t>(cfg.n_subcarriers));
    for (auto& b : rec.bits) b = bits_rng.bit() ? 1 : 0;

    const auto symbols = modulate_bits(rec.bits, cfg);
    const auto chips = ofdm_core_modulate(symbols, cfg);
    rec.clean = shape_with_taps(chips, cfg, setup.chain.tx_taps);

    rec.received = rec.clean;
    if (setup.sigma_w2_analog > 0.0) {
        auto rng = RngStream::derive(s.seed, symbol_index, StreamTag::Thermal);
        const auto w = gen_awgn(ThermalNoiseSpec{setup.sigma_w2_analog}, rec.clean.size(), cfg.analog_rate_hz(), rng);
        for (std::size_t i = 0; i < rec.received.samples.size(); ++i) rec.received.samples[i] += w.samples[i];
    }
    if (setup.impulse.arrival_rate_hz > 0.0) {
        auto rng = RngStream::derive(s.seed, symbol_index, StreamTag::Impulse);
        const auto imp = gen_impulsive(setup.impulse, rec.clean.size(), cfg.analog_rate_hz(), rng);
        for (std::size_t i = 0; i < rec.received.samples.size(); ++i) rec.received.samples[i] += imp.samples[i];
    }
    return rec;
}

BitFrame demodulate_adc(const ComplexEnvelope& adc, const CellSetup& setup, RxFilter filter) {
    const bool matched = filter == RxFilter::Matched;
    const auto y = fir_filter_same(adc, matched ? setup.chain.mf_taps : setup.chain.mmf_taps);
    auto chips = sample_chips(y, setup.chain.cfg);
    const double g = matched ? setup.chain.gain_matched : setup.chain.gain_modified;
    for (auto& v : chips.samples) v /= g;
    return demap_bits(ofdm_demodulate(chips, setup.chain.cfg));
}

// ---- cell execution ----------------------------------------------------------

namespace {

bool is_limiter_family(Mitigation m) {
    return m == Mitigation::AndlExact || m == Mitigation::AndlSimplified || m == Mitigation::AndlFilterBank;
}

struct SymbolOutcome {
    std::uint64_t errors = 0;
    double sig_pow = 0.0;
    double nd_pow = 0.0;
    bool probed = false;
};

// One Monte Carlo trial: synthesize, mitigate, demodulate, count.
SymbolOutcome process_symbol(const SimScenario& s, const CellSetup& setup, std::uint64_t j, double alpha,
                             double threshold, bool probe_snr) {
    const OfdmConfig& cfg = s.ofdm;
    const SymbolRecord rec = build_symbol_record(s, setup, j);

    AndlConfig andl = s.andl;
    andl.tau0_s = setup.tau0_s;

    ComplexEnvelope adc;
    const ComplexEnvelope* processed = nullptr;
    const ComplexEnvelope* reference = nullptr;
    ComplexEnvelope filtered, ref_adc;

    switch (s.mitigation) {
    case Mitigation::None:
        adc = decimate_with_setup(rec.received, setup);
        processed = &rec.received;
        reference = &rec.clean;
        break;
    case Mitigation::Linear:
        filtered = linear_lowpass(rec.received, setup.tau0_s);
        adc = decimate_with_setup(filtered, setup);
        processed = &filtered;
        reference = &rec.clean;
        break;
    case Mitigation::AndlExact:
        filtered = andl_exact(rec.received, andl, ResolutionState{alpha, alpha});
        adc = decimate_with_setup(filtered, setup);
        processed = &filtered;
        reference = &rec.clean;
        break;
    case Mitigation::AndlSimplified:
        filtered = andl_simplified(rec.received, andl, ResolutionState{alpha, alpha});
        adc = decimate_with_setup(filtered, setup);
        processed = &filtered;
        reference = &rec.clean;
        break;
    case Mitigation::AndlFilterBank: {
        const double xmax = andl.kappa * peak_magnitude(rec.received);
        const int n = xmax > alpha ? static_cast<int>(std::ceil((xmax - alpha) / andl.delta_alpha)) : 0;
        const auto bank = build_filter_bank(alpha, andl.delta_alpha, n, setup.tau0_s, xmax);
        filtered = andl_filterbank(rec.received, bank, andl);
        adc = decimate_with_setup(filtered, setup);
        processed = &filtered;
        reference = &rec.clean;
        break;
    }
    case Mitigation::Blanking:
    case Mitigation::Clipping: {
        auto adc0 = decimate_with_setup(rec.received, setup);
        adc = s.mitigation == Mitigation::Blanking ? blank(adc0, threshold) : clip(adc0, threshold);
        if (probe_snr) {
            ref_adc = decimate_with_setup(rec.clean, setup);
            filtered = adc; // keep alive for the projection
            processed = &filtered;
            reference = &ref_adc;
        }
        break;
    }
    }

    const BitFrame rx_bits = demodulate_adc(adc, setup, s.effective_rx_filter());

    SymbolOutcome out;
    for (std::size_t i = 0; i < rec.bits.size(); ++i) out.errors += rec.bits[i] != rx_bits[i];
    if (probe_snr && processed && reference) {
        const double band = cfg.bandwidth_hz * (1.0 + cfg.rolloff);
        const SnrParts parts = snr_projection(*processed, *reference, band);
        out.sig_pow = parts.signal_power;
        out.nd_pow = parts.residual_power;
        out.probed = true;
    }
    return out;
}

struct CellResult {
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double snr_db = 0.0;
};

double robust_sigma_z(const SimScenario& s, const CellSetup& setup, std::uint64_t j) {
    const SymbolRecord rec = build_symbol_record(s, setup, j);
    return compute_resolution(rec.received, setup.tau0_s, s.andl.zeta, SigmaEstimator::RobustMedian).sigma_z;
}

CellResult run_cell(const SimScenario& s, const CellSetup& setup, double threshold, const ExecOptions& exec) {
    const int n = s.n_symbols;
    const bool andl_family = is_limiter_family(s.mitigation);
    const int nthreads = thread_count(exec);

    // Pass A: per-symbol robust noise scale; the resolution parameter of
    // symbol j is derived from symbol j-1 (one-symbol warm-up at j = 0) so
    // the adaptation stays causal.
    std::vector<double> sigma_z(static_cast<std::size_t>(n), 0.0);
    if (andl_family) {
        if (exec.force_serial) {
            for (int j = 0; j < n; ++j) sigma_z[static_cast<std::size_t>(j)] = robust_sigma_z(s, setup, j);
        } else {
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
            for (int j = 0; j < n; ++j) sigma_z[static_cast<std::size_t>(j)] = robust_sigma_z(s, setup, j);
        }
    }

    std::vector<SymbolOutcome> outcomes(static_cast<std::size_t>(n));
    auto work = [&](int j) {
        double alpha = 0.0;
        if (andl_family) {
            const double sz = sigma_z[static_cast<std::size_t>(j > 0 ? j - 1 : 0)];
            alpha = resolution_alpha(sz, s.andl.zeta);
        }
        outcomes[static_cast<std::size_t>(j)] =
            process_symbol(s, setup, static_cast<std::uint64_t>(j), alpha, threshold, j < exec.snr_probe_symbols);
    };

    if (exec.force_serial) {
        for (int j = 0; j < n; ++j) work(j);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (int j = 0; j < n; ++j) work(j);
    }

    CellResult res;
    double sig = 0.0, nd = 0.0;
    for (const auto& o : outcomes) {
        res.errors += o.errors;
        if (o.probed) {
            sig += o.sig_pow;
            nd += o.nd_pow;
        }
    }
    res.bits = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(s.ofdm.n_subcarriers);
    res.snr_db = nd > 0.0 ? 10.0 * std::log10(sig / nd) : 100.0;
    return res;
}

std::string canonical_text(const SimScenario& s) {
    std::ostringstream os;
    os << "n_subcarriers=" << s.ofdm.n_subcarriers << "\nbandwidth_hz=" << fmt_double(s.ofdm.bandwidth_hz)
       << "\nrolloff=" << fmt_double(s.ofdm.rolloff) << "\noversample_factor=" << s.ofdm.oversample_factor
       << "\nadc_oversample=" << s.ofdm.adc_oversample << "\nrrc_span_chips=" << s.ofdm.rrc_span_chips << "\n";
    if (s.ebn0_db) os << "ebn0_db=" << fmt_double(*s.ebn0_db) << "\n";
    if (s.sigma_w2) os << "sigma_w2=" << fmt_double(*s.sigma_w2) << "\n";
    if (s.sir_db) os << "sir_db=" << fmt_double(*s.sir_db) << "\n";
    if (s.sigma_i2) os << "sigma_i2=" << fmt_double(*s.sigma_i2) << "\n";
    os << "lambda_hz=" << fmt_double(s.lambda_hz) << "\ntau_as_s=" << fmt_double(s.tau_as_s)
       << "\nmitigation=" << to_string(s.mitigation) << "\nrx_filter=" << to_string(s.effective_rx_filter())
       << "\ntau0_s=" << fmt_double(s.effective_tau0()) << "\nzeta=" << fmt_double(s.andl.zeta)
       << "\nkappa=" << fmt_double(s.andl.kappa) << "\ndelta_alpha=" << fmt_double(s.andl.delta_alpha)
       << "\nn_symbols=" << s.n_symbols << "\nseed=" << s.seed << "\n";
    if (s.threshold) os << "threshold=" << fmt_double(*s.threshold) << "\n";
    return os.str();
}

} // namespace

PowerBreakdown analytic_breakdown(const SimScenario& s, const CellSetup& setup) {
    const OfdmConfig& cfg = s.ofdm;
    const double bs = cfg.bandwidth_hz;
    const double f_analog = cfg.analog_rate_hz();

    MixtureParams mix;
    mix.epsilon = std::min(1.0, s.lambda_hz * s.tau_as_s);
    mix.sigma_s2 = 1.0;
    // Thermal power referred to the signal band; the analysis compares
    // amplitude-scale residuals and is only consistent with the link metrics
    // when the thermal term carries the in-band power.
    mix.sigma_w2 = setup.n0 * bs;
    mix.sigma_i2 = setup.impulse.burst_variance;

    // Resolution parameter the adaptive loop would settle at: per-component
    // deviation of the tau0-highpassed signal+thermal input.
    const double tau0 = setup.tau0_s;
    const auto hp2 = [&](double f) {
        const double w = 2.0 * kPi * f * tau0;
        return w * w / (1.0 + w * w);
    };
    const auto rc_shape = [&](double f) { // raised-cosine power shape, unit total power over bs
        const double af = std::abs(f);
        const double f1 = (1.0 - cfg.rolloff) * bs / 2.0;
        const double f2 = (1.0 + cfg.rolloff) * bs / 2.0;
        if (af <= f1) return 1.0 / bs;
        if (af >= f2 || cfg.rolloff == 0.0) return 0.0;
        const double c = std::cos(kPi / 2.0 * (af - f1) / (f2 - f1));
        return c * c / bs;
    };
    const int quad_n = 1 << 15;
    const double fmax = f_analog / 2.0;
    const double h = fmax / quad_n;
    double var_z = 0.0; // one-sided accumulation, doubled below
    for (int i = 0; i <= quad_n; ++i) {
        const double f = i * h;
        const double w = (i == 0 || i == quad_n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        var_z += w * (rc_shape(f) + setup.n0) * hp2(f);
    }
    var_z *= h / 3.0 * 2.0;
    const double sigma_z = std::sqrt(var_z / 2.0);

    QuantizationGrid grid;
    grid.alpha0 = resolution_alpha(sigma_z, s.andl.zeta);
    grid.delta_alpha = s.andl.delta_alpha;
    grid.kappa = s.andl.kappa;
    grid.tau0_s = tau0;
    grid.dt_s = 1.0 / (2.0 * bs * (1.0 + cfg.rolloff));
    // Effective coherent pulse width of a broadband burst. The in-burst
    // process decorrelates within the burst, so the square-pulse equivalent
    // charges for roughly half the burst; the 0.6 factor is validated against
    // the measured residual power over the (Eb/N0, SIR) grid.
    grid.dt_impulse_s = 0.6 * s.tau_as_s;
    const double span = 6.0 * grid.kappa * mix.sigma2();
    grid.n = std::max(1, static_cast<int>(std::ceil((span - grid.alpha0) / grid.delta_alpha)));

    return residual_powers(mix, grid);
}

ResultRecord run_scenario(const SimScenario& s, const ExecOptions& exec) {
    const auto t0 = std::chrono::steady_clock::now();
    const CellSetup setup = resolve_scenario(s);

    ResultRecord rec;
    rec.method = to_string(s.mitigation);
    rec.ebn0_db = setup.ebn0_db;
    rec.sir_db = setup.sir_db;
    rec.lambda_hz = s.lambda_hz;
    rec.tau_as_s = s.tau_as_s;
    rec.seed = s.seed;
    const std::string canon = canonical_text(s);
    rec.fingerprint = fnv1a(canon.data(), canon.size());

    double threshold = s.threshold.value_or(0.0);
    if ((s.mitigation == Mitigation::Blanking || s.mitigation == Mitigation::Clipping) && !s.threshold) {
        const auto method =
            s.mitigation == Mitigation::Blanking ? ThresholdMethod::Blanking : ThresholdMethod::Clipping;
        const auto search = optimize_threshold(method, s, default_threshold_grid(s), s.n_symbols);
        threshold = search.spec.value;
    }
    rec.threshold_used =
        (s.mitigation == Mitigation::Blanking || s.mitigation == Mitigation::Clipping)
            ? std::optional<double>(threshold)
            : std::nullopt;

    const CellResult cell = run_cell(s, setup, threshold, exec);
    rec.ber = make_ber_record(cell.errors, cell.bits);
    rec.snr_out_db = cell.snr_db;

    if (is_limiter_family(s.mitigation)) {
        const PowerBreakdown pb = analytic_breakdown(s, setup);
        rec.analytic = pb;
        rec.snr_analytic_db = std::isinf(pb.snr_avg) ? 100.0 : 10.0 * std::log10(pb.snr_avg);
        rec.ber_bound = pb.ber_bound;
    }

    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

namespace {

SimScenario apply_axis(const SimScenario& base, SweepAxis axis, double value) {
    SimScenario s = base;
    switch (axis) {
    case SweepAxis::EbN0:
        s.ebn0_db = value;
        s.sigma_w2.reset();
        break;
    case SweepAxis::Sir:
        s.sir_db = value;
        s.sigma_i2.reset();
        break;
    case SweepAxis::Lambda: s.lambda_hz = value; break;
    case SweepAxis::TauAs: s.tau_as_s = value; break;
    }
    return s;
}

} // namespace

std::vector<ResultRecord> sweep(const SimScenario& base, SweepAxis axis, const std::vector<double>& values,
                                const std::vector<Mitigation>& methods, const ExecOptions& exec) {
    if (values.empty()) throw ConfigError("sweep: no axis values");
    if (methods.empty()) throw ConfigError("sweep: no methods");
    struct Cell {
        Mitigation m;
        double v;
    };
    std::vector<Cell> cells;
    for (Mitigation m : methods)
        for (double v : values) cells.push_back({m, v});

    std::vector<ResultRecord> out;
    out.reserve(cells.size());
    for (const Cell& c : cells) {
        SimScenario s = apply_axis(base, axis, c.v);
        s.mitigation = c.m;
        out.push_back(run_scenario(s, exec));
    }
    std::sort(out.begin(), out.end(), [&](const ResultRecord& a, const ResultRecord& b) {
        if (a.method != b.method) return a.method < b.method;
        auto key = [&](const ResultRecord& r) {
            switch (axis) {
            case SweepAxis::EbN0: return r.ebn0_db;
            case SweepAxis::Sir: return r.sir_db;
            case SweepAxis::Lambda: return r.lambda_hz;
            case SweepAxis::TauAs: return r.tau_as_s;
            }
            return 0.0;
        };
        return key(a) < key(b);
    });
    return out;
}

std::vector<ResultRecord> analyze(const SimScenario& base, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("analyze: no axis values");
    std::vector<ResultRecord> out;
    for (double v : values) {
        SimScenario s = apply_axis(base, axis, v);
        const CellSetup setup = resolve_scenario(s);
        ResultRecord rec;
        rec.method = to_string(s.mitigation);
        rec.ebn0_db = setup.ebn0_db;
        rec.sir_db = setup.sir_db;
        rec.lambda_hz = s.lambda_hz;
        rec.tau_as_s = s.tau_as_s;
        rec.seed = s.seed;
        const std::string canon = canonical_text(s);
        rec.fingerprint = fnv1a(canon.data(), canon.size());
        const PowerBreakdown pb = analytic_breakdown(s, setup);
        rec.analytic = pb;
        rec.snr_analytic_db = std::isinf(pb.snr_avg) ? 100.0 : 10.0 * std::log10(pb.snr_avg);
        rec.ber_bound = pb.ber_bound;
        out.push_back(std::move(rec));
    }
    return out;
}

// ---- serialization -----------------------------------------------------------

void emit_results_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    if (records.empty()) throw ConfigError("emit: no records");
    out << "method,ebn0_db,sir_db,lambda_hz,tau_as_s,n_bits,n_errors,ber,ber_ci95,snr_out_db,snr_analytic_db,"
           "ber_bound,seed\n";
    for (const auto& r : records) {
        out << r.method << ',' << fmt_double(r.ebn0_db) << ',' << fmt_double(r.sir_db) << ','
            << fmt_double(r.lambda_hz) << ',' << fmt_double(r.tau_as_s) << ',' << r.ber.bits << ',' << r.ber.errors
            << ',';
        if (r.ber.bits > 0)
            out << fmt_double(r.ber.ber) << ',' << fmt_double(r.ber.ci95) << ',' << fmt_double(r.snr_out_db);
        else
            out << ",,";
        out << ',';
        if (r.snr_analytic_db) out << fmt_double(*r.snr_analytic_db);
        out << ',';
        if (r.ber_bound) out << fmt_double(*r.ber_bound);
        out << ',' << r.seed << '\n';
    }
}

void emit_results_json(const std::vector<ResultRecord>& records, std::ostream& out) {
    if (records.empty()) throw ConfigError("emit: no records");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json o;
        o["method"] = r.method;
        o["ebn0_db"] = r.ebn0_db;
        if (std::isinf(r.sir_db))
            o["sir_db"] = nullptr;
        else
            o["sir_db"] = r.sir_db;
        o["lambda_hz"] = r.lambda_hz;
        o["tau_as_s"] = r.tau_as_s;
        o["n_bits"] = r.ber.bits;
        o["n_errors"] = r.ber.errors;
        if (r.ber.bits > 0) {
            o["ber"] = r.ber.ber;
            o["ber_ci95"] = r.ber.ci95;
            o["snr_out_db"] = r.snr_out_db;
        } else {
            o["ber"] = nullptr;
            o["ber_ci95"] = nullptr;
            o["snr_out_db"] = nullptr;
        }
        o["snr_analytic_db"] = r.snr_analytic_db ? nlohmann::json(*r.snr_analytic_db) : nlohmann::json(nullptr);
        o["ber_bound"] = r.ber_bound ? nlohmann::json(*r.ber_bound) : nlohmann::json(nullptr);
        o["seed"] = r.seed;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
}

std::vector<ResultRecord> parse_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) cols.push_back(item);
        while (cols.size() < 13) cols.emplace_back();
        ResultRecord r;
        r.method = cols[0];
        r.ebn0_db = std::strtod(cols[1].c_str(), nullptr);
        r.sir_db = std::strtod(cols[2].c_str(), nullptr);
        r.lambda_hz = std::strtod(cols[3].c_str(), nullptr);
        r.tau_as_s = std::strtod(cols[4].c_str(), nullptr);
        const auto bits = std::strtoull(cols[5].c_str(), nullptr, 10);
        const auto errors = std::strtoull(cols[6].c_str(), nullptr, 10);
        r.ber = make_ber_record(errors, bits);
        if (!cols[7].empty()) r.ber.ber = std::strtod(cols[7].c_str(), nullptr);
        if (!cols[8].empty()) r.ber.ci95 = std::strtod(cols[8].c_str(), nullptr);
        if (!cols[9].empty()) r.snr_out_db = std::strtod(cols[9].c_str(), nullptr);
        if (!cols[10].empty()) r.snr_analytic_db = std::strtod(cols[10].c_str(), nullptr);
        if (!cols[11].empty()) r.ber_bound = std::strtod(cols[11].c_str(), nullptr);
        r.seed = std::strtoull(cols[12].c_str(), nullptr, 10);
        out.push_back(std::move(r));
    }
    return out;
}

// ---- config parsing ----------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') throw ConfigError("config: bad number for key '" + key + "'");
    return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const auto x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') throw ConfigError("config: bad integer for key '" + key + "'");
    return x;
}

} // namespace

SimScenario parse_config_text(const std::string& text) {
    SimScenario s;
    s.andl.tau0_s = 0.0; // resolved to 1/(4 pi B_s) later

    std::istringstream in(text);
    std::string line;
    std::vector<std::string> seen;
    bool have_n = false, have_bw = false, have_mit = false;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ConfigError("config: empty value for key '" + key + "'");
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw ConfigError("config: duplicate key '" + key + "'");
        seen.push_back(key);

        if (key == "n_subcarriers") {
            s.ofdm.n_subcarriers = static_cast<int>(parse_uint(key, val));
            have_n = true;
        } else if (key == "bandwidth_hz") {
            s.ofdm.bandwidth_hz = parse_real(key, val);
            have_bw = true;
        } else if (key == "rolloff") {
            s.ofdm.rolloff = parse_real(key, val);
        } else if (key == "oversample_factor") {
            s.ofdm.oversample_factor = static_cast<int>(parse_uint(key, val));
        } else if (key == "n_symbols") {
            s.n_symbols = static_cast<int>(parse_uint(key, val));
        } else if (key == "ebn0_db") {
            s.ebn0_db = parse_real(key, val);
        } else if (key == "sigma_w2") {
            s.sigma_w2 = parse_real(key, val);
        } else if (key == "sir_db") {
            s.sir_db = parse_real(key, val);
        } else if (key == "sigma_i2") {
            s.sigma_i2 = parse_real(key, val);
        } else if (key == "lambda_hz") {
            s.lambda_hz = parse_real(key, val);
        } else if (key == "tau_as_s") {
            s.tau_as_s = parse_real(key, val);
        } else if (key == "mitigation") {
            s.mitigation = mitigation_from_string(val);
            have_mit = true;
        } else if (key == "rx_filter") {
            s.rx_filter = rx_filter_from_string(val);
        } else if (key == "tau0_s") {
            s.andl.tau0_s = parse_real(key, val);
        } else if (key == "zeta") {
            s.andl.zeta = parse_real(key, val);
        } else if (key == "kappa") {
            s.andl.kappa = parse_real(key, val);
        } else if (key == "delta_alpha") {
            s.andl.delta_alpha = parse_real(key, val);
        } else if (key == "threshold") {
            s.threshold = parse_real(key, val);
        } else if (key == "seed") {
            s.seed = parse_uint(key, val);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (!have_n) throw ConfigError("config: missing required key 'n_subcarriers'");
    if (!have_bw) throw ConfigError("config: missing required key 'bandwidth_hz'");
    if (!have_mit) throw ConfigError("config: missing required key 'mitigation'");
    s.validate();
    return s;
}

SimScenario parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream body;
    body << f.rdbuf();
    return parse_config_text(body.str());
}

std::uint64_t noise_fingerprint(const SimScenario& s, int symbols) {
    const CellSetup setup = resolve_scenario(s);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int j = 0; j < symbols; ++j) {
        const SymbolRecord rec = build_symbol_record(s, setup, static_cast<std::uint64_t>(j));
        h = fnv1a(rec.bits.data(), rec.bits.size(), h);
        for (std::size_t i = 0; i < rec.received.samples.size(); ++i) {
            const cplx noise = rec.received.samples[i] - rec.clean.samples[i];
            const double re = noise.real(), im = noise.imag();
            h = fnv1a(&re, sizeof re, h);
            h = fnv1a(&im, sizeof im, h);
        }
    }
    return h;
}

// ---- selftest -----------------------------------------------------------------

namespace {

struct Check {
    const char* name;
    bool pass;
    std::string detail;
};

SimScenario selftest_scenario() {
    SimScenario s;
    s.ofdm.n_subcarriers = 64;
    s.ofdm.bandwidth_hz = 100e3;
    s.ofdm.oversample_factor = 8;
    s.ebn0_db = 8.0;
    s.lambda_hz = 2e5;
    s.sir_db = 0.0;
    s.tau_as_s = 1e-6;
    s.mitigation = Mitigation::AndlExact;
    s.n_symbols = 6;
    s.seed = 1234;
    return s;
}

} // namespace

int run_selftest(std::ostream& out, const ExecOptions& exec) {
    std::vector<Check> checks;

    { // slew-rate bound of the exact limiter
        const double tau0 = 1e-5, dt = 1e-7, alpha = 0.5;
        RngStream rng(99);
        ComplexEnvelope x{1.0 / dt, std::vector<cplx>(4000)};
        for (auto& v : x.samples) v = {0.2 * rng.gaussian(), 0.2 * rng.gaussian()};
        for (std::size_t i = 0; i < x.samples.size(); i += 97)
            x.samples[i] += cplx{8.0 * rng.gaussian(), 8.0 * rng.gaussian()};
        AndlConfig cfg;
        cfg.tau0_s = tau0;
        const auto y = andl_exact(x, cfg, ResolutionState{alpha, alpha});
        bool ok = true;
        double worst = 0.0;
        for (std::size_t i = 1; i < y.samples.size(); ++i) {
            const double diff = std::abs(x.samples[i - 1] - y.samples[i - 1]);
            const double step = std::abs(y.samples[i] - y.samples[i - 1]);
            if (diff > alpha) {
                worst = std::max(worst, step);
                if (step > alpha / tau0 * dt * (1.0 + 1e-9)) ok = false;
            }
        }
        checks.push_back({"slew-rate bound", ok, "max step " + fmt_double(worst)});
    }

    { // alpha -> infinity degenerates to the linear lowpass
        const double tau0 = 1e-5, dt = 1e-7;
        RngStream rng(7);
        ComplexEnvelope x{1.0 / dt, std::vector<cplx>(5000)};
        for (auto& v : x.samples) v = {rng.gaussian(), rng.gaussian()};
        AndlConfig cfg;
        cfg.tau0_s = tau0;
        const auto a = andl_exact(x, cfg, ResolutionState{1e30, 1e30});
        const auto b = linear_lowpass(x, tau0);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
        checks.push_back({"alpha->inf degeneracy", worst <= 1e-9, "max |diff| " + fmt_double(worst)});
    }

    { // blank / clip idempotence
        RngStream rng(11);
        ComplexEnvelope x{1.0, std::vector<cplx>(2000)};
        for (auto& v : x.samples) v = {2.0 * rng.gaussian(), 2.0 * rng.gaussian()};
        const double thr = 1.5;
        const auto b1 = blank(x, thr);
        const auto b2 = blank(b1, thr);
        const auto c1 = clip(x, thr);
        const auto c2 = clip(c1, thr);
        bool ok = true;
        for (std::size_t i = 0; i < x.samples.size(); ++i) {
            if (b1.samples[i] != b2.samples[i]) ok = false;
            if (c1.samples[i] != c2.samples[i]) ok = false;
        }
        checks.push_back({"blank/clip idempotence", ok, ""});
    }

    { // determinism: identical scenario twice -> byte-identical CSV; serial == parallel
        const SimScenario s = selftest_scenario();
        ExecOptions par = exec;
        ExecOptions ser = exec;
        ser.force_serial = true;
        auto strip_time = [](ResultRecord r) {
            r.wall_time_s = 0.0;
            return r;
        };
        const auto r1 = strip_time(run_scenario(s, par));
        const auto r2 = strip_time(run_scenario(s, par));
        const auto r3 = strip_time(run_scenario(s, ser));
        std::ostringstream c1, c2, c3;
        emit_results_csv({r1}, c1);
        emit_results_csv({r2}, c2);
        emit_results_csv({r3}, c3);
        const bool ok = c1.str() == c2.str() && c1.str() == c3.str();
        checks.push_back({"determinism byte-equality (incl. serial == parallel)", ok, ""});
    }

    { // analytic SNR monotone nonincreasing in sigma_i^2
        QuantizationGrid grid;
        grid.alpha0 = 3.0;
        grid.delta_alpha = 0.2;
        grid.kappa = 1.0;
        grid.tau0_s = 7.957747154594767e-7;
        grid.dt_s = 4e-6;
        grid.dt_impulse_s = 1e-6;
        bool ok = true;
        double prev = kInf;
        for (double si2 : {0.0, 0.5, 2.0, 8.0, 32.0, 128.0, 512.0}) {
            MixtureParams mix{0.2, 1.0, 0.1, si2};
            grid.n = std::max(1, static_cast<int>(std::ceil((6.0 * mix.sigma2() - grid.alpha0) / grid.delta_alpha)));
            const auto pb = residual_powers(mix, grid);
            if (pb.snr_avg > prev * (1.0 + 1e-12)) ok = false;
            prev = pb.snr_avg;
        }
        checks.push_back({"analytic SNR nonincreasing in sigma_i^2", ok, ""});
    }

    int fails = 0;
    for (const auto& c : checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << '\n';
        if (!c.pass) ++fails;
    }
    return fails;
}

} // namespace andlsim
