// Command-line front end: validate scenario files, evaluate the analytical
// risk models, and run the Monte Carlo cross-validation.
//
// Exit codes: 0 ok/consistent, 1 usage or scenario validation error,
// 2 internal failure, 3 at least one metric diverged.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mplsrisk/errors.hpp"
#include "mplsrisk/report.hpp"
#include "mplsrisk/scenario.hpp"
#include "mplsrisk/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;
constexpr int kExitDivergent = 3;

mplsrisk::ReportFormat parse_format(const std::string& name) {
    return name == "json" ? mplsrisk::ReportFormat::Json : mplsrisk::ReportFormat::Text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MPLS network-security simulator and analytical risk engine"};
    app.set_version_flag("--version", std::string(mplsrisk::kToolVersion));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::uint32_t trials = 0;
    double horizon = 0.0;
    unsigned threads = 1;

    CLI::App* analyze = app.add_subcommand("analyze", "Evaluate the closed-form risk models");
    analyze->add_option("file", scenario_path, "scenario JSON file")->required();
    analyze->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* simulate =
        app.add_subcommand("simulate", "Run Monte Carlo trials and cross-validate");
    simulate->add_option("file", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    CLI::Option* seed_opt = simulate->add_option("--seed", seed, "override simulation seed");
    CLI::Option* trials_opt =
        simulate->add_option("--trials", trials, "override trial count");
    CLI::Option* horizon_opt =
        simulate->add_option("--horizon", horizon, "override simulated horizon");
    simulate->add_option("--threads", threads,
                         "worker threads for trials (does not change results)");

    CLI::App* validate =
        app.add_subcommand("validate", "Load a scenario and report every violation");
    validate->add_option("file", scenario_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) {
            mplsrisk::ScenarioFile sc = mplsrisk::load_scenario(scenario_path);
            std::cout << "ok: " << scenario_path << "\n"
                      << "digest: " << sc.digest << "\n";
            return kExitOk;
        }

        mplsrisk::ScenarioFile sc = mplsrisk::load_scenario(scenario_path);
        if (analyze->parsed()) {
            mplsrisk::ReportDocument doc = mplsrisk::analyze_scenario(sc);
            doc.format = parse_format(format);
            std::cout << mplsrisk::render_report(doc, doc.format);
            return kExitOk;
        }

        mplsrisk::SimulateOverrides overrides;
        if (!seed_opt->empty()) overrides.seed = seed;
        if (!trials_opt->empty()) overrides.trials = trials;
        if (!horizon_opt->empty()) overrides.horizon = horizon;
        overrides.threads = threads;

        mplsrisk::ReportDocument doc = mplsrisk::simulate_scenario(sc, overrides);
        doc.format = parse_format(format);
        std::cout << mplsrisk::render_report(doc, doc.format);
        return mplsrisk::any_divergent(doc) ? kExitDivergent : kExitOk;
    } catch (const mplsrisk::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
