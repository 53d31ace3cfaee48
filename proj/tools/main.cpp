// fermicycle command line: run, sweep and verify driven-dot thermodynamic
// cycles described by a JSON config.
//
// Exit codes are a stable contract:
//   0 ok, 1 usage/config error, 2 non-convergence, 3 certification failure
//   (bound ordering or ledger law breached; the report is still emitted).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fermicycle/errors.hpp"
#include "fermicycle/harness.hpp"
#include "fermicycle/version.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    int workers = 1;
};

}  // namespace

int main(int argc, char** argv) {
    using namespace fermicycle;
    using namespace fermicycle::harness;

    CLI::App app{"driven quantum-dot cycle simulator and efficiency-bound certifier"};
    app.set_version_flag("--version", std::string("fermicycle ") + kVersion);
    app.require_subcommand(1);

    Options run_opts;
    CLI::App* run = app.add_subcommand("run", "run one cycle to its limit cycle and certify it");
    run->add_option("--config", run_opts.config_path, "JSON config file")->required();
    run->add_option("--out", run_opts.out_path, "write the report as a one-row CSV");

    Options sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "run the config's parameter sweep to CSV");
    sweep->add_option("--config", sweep_opts.config_path, "JSON config file")->required();
    sweep->add_option("--out", sweep_opts.out_path, "output CSV file")->required();
    sweep->add_option("--workers", sweep_opts.workers, "parallel grid workers")
        ->check(CLI::PositiveNumber);

    Options verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite on a config");
    verify->add_option("--config", verify_opts.config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (run->parsed()) {
            const RunConfig config = load_config(run_opts.config_path);
            std::optional<std::string> csv;
            if (!run_opts.out_path.empty()) csv = run_opts.out_path;
            return run_single(config, std::cout, csv);
        }
        if (sweep->parsed()) {
            const RunConfig config = load_config(sweep_opts.config_path);
            return run_sweep(config, sweep_opts.out_path, sweep_opts.workers, std::cout);
        }
        if (verify->parsed()) {
            const RunConfig config = load_config(verify_opts.config_path);
            return verify_config(config, std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
