// SPDX-License-Identifier: Apache-2.0
//
// oamcapa: run OAM/CAPA channel experiments or the invariant self-check.
//
//   oamcapa run --experiment se_vs_snr --out results/
//   oamcapa run --config fig4.ini --normalized --no-plot
//   oamcapa verify --report verify.json
//
// Exit codes: 0 success, 1 config error, 2 numerical failure (including
// rows that break the SE upper bound), 3 verify failure.

#include "oamcapa/experiment.hpp"
#include "oamcapa/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kVerifyFailure = 3 };

struct RunArgs {
    std::string experiment;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int quadrature = 0;
    bool raw = false;
    bool normalized = false;
    bool no_plot = false;
};

int run(const RunArgs& args, const CLI::App& cmd)
{
    using namespace oamcapa;
    ExperimentConfig cfg;
    try {
        ConfigOverrides o;
        if (!args.experiment.empty())
            o.experiment = parse_experiment(args.experiment);
        if (!args.out.empty())
            o.output_dir = args.out;
        if (cmd.count("--seed"))
            o.seed = args.seed;
        if (cmd.count("--quadrature"))
            o.quadrature = args.quadrature;
        if (args.raw)
            o.scaling = GainScaling::Raw;
        if (args.normalized)
            o.scaling = GainScaling::Normalized;
        if (args.no_plot)
            o.plot = false;
        if (!args.config.empty())
            cfg = load_config(args.config, o);
        else if (o.experiment)
            cfg = resolve_config(*o.experiment, o);
        else
            throw ConfigError("experiment", "give --experiment or --config");
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
        return kConfigError;
    }

    std::optional<ExperimentResult> result;
    try {
        result = run_experiment(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }

    try {
        for (const auto& path : write_outputs(cfg, *result))
            std::cout << "wrote " << path.string() << '\n';
    } catch (const std::runtime_error& e) {
        std::cerr << "output error [output]: " << e.what() << '\n';
        return kConfigError;
    }
    std::cout << to_string(cfg.experiment) << ": " << result->table.rows().size() << " rows in "
              << format_number(result->runtime_s) << " s\n";
    if (result->bound_violations > 0) {
        std::cerr << result->bound_violations
                  << " rows exceed se_upper_bound (marked bound_ok_flag = 0)\n";
        return kNumericalFailure;
    }
    return kOk;
}

int verify(const std::string& report_path, int quadrature)
{
    oamcapa::VerifyOptions options;
    options.quadrature = quadrature;
    const auto report = oamcapa::verify_suite(options);
    std::cout << report.to_text();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "cannot write " << report_path << '\n';
            return kConfigError;
        }
        out << report.to_json() << '\n';
    }
    return report.passed() ? kOk : kVerifyFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OAM mode coupling between coaxial continuous apertures"};
    app.set_version_flag("--version", std::string(OAMCAPA_VERSION));
    app.require_subcommand(1);

    RunArgs args;
    auto* run_cmd = app.add_subcommand("run", "run one experiment sweep");
    run_cmd->add_option("--experiment,-e", args.experiment,
                        "se_vs_snr, se_vs_distance, edof_vs_distance, edof_vs_elements, "
                        "link_ber or convergence");
    run_cmd->add_option("--config,-c", args.config, "INI config file");
    run_cmd->add_option("--out,-o", args.out, "output directory");
    run_cmd->add_option("--seed", args.seed, "RNG seed");
    run_cmd->add_option("--quadrature,-q", args.quadrature, "points per ring (0 = automatic)");
    auto* raw = run_cmd->add_flag("--raw", args.raw, "physical gains (default)");
    run_cmd->add_flag("--normalized", args.normalized, "gains rescaled so that gamma = M")
        ->excludes(raw);
    run_cmd->add_flag("--no-plot", args.no_plot, "skip SVG output");

    std::string report_path;
    int verify_q = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run the invariant self-check");
    verify_cmd->add_option("--report", report_path, "write a JSON report");
    verify_cmd->add_option("--quadrature,-q", verify_q, "points per ring (0 = 256)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*run_cmd)
        return run(args, *run_cmd);
    return verify(report_path, verify_q);
}
