// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: run single scenarios, sweep experiment axes,
// evaluate the closed-form model, dump PSD/time/histogram traces, and run
// the invariant selftest.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "andlsim/errors.hpp"
#include "andlsim/sim.hpp"

namespace {

using namespace andlsim;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw ConfigError("--values: empty list");
    return out;
}

std::vector<Mitigation> parse_methods(const std::string& csv) {
    std::vector<Mitigation> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(mitigation_from_string(item));
    }
    if (out.empty()) throw ConfigError("--methods: empty list");
    return out;
}

void write_records(const std::vector<ResultRecord>& records, const std::string& out_path,
                   const std::string& format) {
    std::ostringstream body;
    if (format == "json")
        emit_results_json(records, body);
    else
        emit_results_csv(records, body);
    if (out_path.empty() || out_path == "-") {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot open output file " + out_path);
        f << body.str();
    }
}

void dump_psd_set(const SimScenario& base, const std::string& dir, std::size_t seg_len) {
    const std::vector<Mitigation> methods{Mitigation::None, Mitigation::Linear, Mitigation::Blanking,
                                          Mitigation::Clipping, Mitigation::AndlExact};
    for (Mitigation m : methods) {
        SimScenario s = base;
        s.mitigation = m;
        const CellSetup setup = resolve_scenario(s);
        const SymbolRecord rec = build_symbol_record(s, setup, 0);

        ComplexEnvelope processed = rec.received;
        AndlConfig andl = s.andl;
        andl.tau0_s = setup.tau0_s;
        if (m == Mitigation::Linear) {
            processed = linear_lowpass(rec.received, setup.tau0_s);
        } else if (m == Mitigation::AndlExact) {
            const auto res =
                compute_resolution(rec.received, setup.tau0_s, s.andl.zeta, SigmaEstimator::RobustMedian);
            processed = andl_exact(rec.received, andl, res);
        } else if (m == Mitigation::Blanking || m == Mitigation::Clipping) {
            auto adc0 = decimate_to_adc(rec.received, s.ofdm);
            const auto grid = default_threshold_grid(s);
            const auto search = optimize_threshold(
                m == Mitigation::Blanking ? ThresholdMethod::Blanking : ThresholdMethod::Clipping, s, grid, 8);
            processed = m == Mitigation::Blanking ? blank(adc0, search.spec.value) : clip(adc0, search.spec.value);
        }

        const std::string tag = to_string(m);
        const auto psd = welch_psd(processed, std::min<std::size_t>(seg_len, processed.size()), 0.5);
        {
            std::ofstream f(dir + "/psd_" + tag + ".csv");
            f << "f_hz,density\n";
            for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i)
                f << psd.freqs_hz[i] << ',' << psd.density[i] << '\n';
        }
        {
            const auto hist = amplitude_histogram(processed, 100);
            std::ofstream f(dir + "/hist_" + tag + ".csv");
            f << "bin_center,pdf\n";
            for (std::size_t i = 0; i < hist.bin_centers.size(); ++i)
                f << hist.bin_centers[i] << ',' << hist.pdf[i] << '\n';
        }
        dump_csv(processed, dir + "/time_" + tag + ".csv");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM link simulator with adaptive differential-limiter impulsive-noise mitigation"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", axis_name, values_csv, methods_csv, dump_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
    bool serial = false;
    std::size_t seg_len = 4096;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* copt = cmd->add_option("--config", config_path, "scenario config file");
        if (needs_config) copt->required();
        cmd->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs", jobs, "worker threads (0 = all)");
        cmd->add_flag("--serial", serial, "use the serial reference path");
    };

    auto* run_cmd = app.add_subcommand("run", "run one scenario");
    add_common(run_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep an axis over methods");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--axis", axis_name, "EbN0|SIR|Lambda|TauAs")->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep_cmd->add_option("--methods", methods_csv, "comma-separated methods")->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "closed-form model only, no simulation");
    add_common(analyze_cmd, true);
    analyze_cmd->add_option("--axis", axis_name, "EbN0|SIR|Lambda|TauAs")->required();
    analyze_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();

    auto* psd_cmd = app.add_subcommand("psd", "dump PSD/time/histogram traces per method");
    add_common(psd_cmd, true);
    psd_cmd->add_option("--out-dir", dump_dir, "directory for the CSV dumps");
    psd_cmd->add_option("--seg-len", seg_len, "Welch segment length (power of two)");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");
    add_common(selftest_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExecOptions exec;
        exec.jobs = jobs;
        exec.force_serial = serial;

        if (selftest_cmd->parsed()) {
            const int fails = run_selftest(std::cout, exec);
            return fails == 0 ? 0 : 1;
        }

        SimScenario scenario = parse_config(config_path);
        if (seed_set) scenario.seed = seed;

        if (run_cmd->parsed()) {
            const auto rec = run_scenario(scenario, exec);
            write_records({rec}, out_path, format);
        } else if (sweep_cmd->parsed()) {
            const auto recs =
                sweep(scenario, axis_from_string(axis_name), parse_values(values_csv), parse_methods(methods_csv), exec);
            write_records(recs, out_path, format);
        } else if (analyze_cmd->parsed()) {
            const auto recs = analyze(scenario, axis_from_string(axis_name), parse_values(values_csv));
            write_records(recs, out_path, format);
        } else if (psd_cmd->parsed()) {
            dump_psd_set(scenario, dump_dir, seg_len);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericGuardError& e) {
        std::cerr << "numeric guard: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
