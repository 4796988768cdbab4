// magnetworks: relay-node density and optimal traffic flow for dense mobile
// sensor networks.
#include <iostream>

#include <CLI11.hpp>

#include "magnetworks/run.hpp"

int main(int argc, char** argv) {
    using namespace magnetworks;
    CLI::App app{"Optimal traffic flow and relay-node density for dense mobile sensor networks"};
    app.require_subcommand(1);

    RunConfig config;
    std::string scenario;
    std::string out_dir;
    int stride = 0;
    int nx = 0;
    double tol = 0.0;

    auto* run_cmd = app.add_subcommand("run", "Run the evolve/solve/derive loop and write CSV output");
    run_cmd->add_option("scenario", scenario, "Scenario file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (fallback: $MAGNETWORKS_OUT)");
    run_cmd->add_option("--stride", stride, "Dump fields every K-th snapshot")->check(CLI::PositiveNumber);
    run_cmd->add_option("--nx", nx, "Override the x cell count")->check(CLI::Range(2, 100000000));
    run_cmd->add_option("--tol", tol, "Override the Poisson tolerance");
    run_cmd->add_flag("-v,--verbose", config.verbosity, "Print one line per snapshot");

    auto* describe_cmd = app.add_subcommand("describe", "Print the resolved scenario without computing");
    describe_cmd->add_option("scenario", scenario, "Scenario file")->required();
    describe_cmd->add_option("--nx", nx, "Override the x cell count")->check(CLI::Range(2, 100000000));
    describe_cmd->add_option("--tol", tol, "Override the Poisson tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    config.scenario = scenario;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (stride > 0) config.stride = stride;
    if (nx > 0) config.nx = nx;
    if (tol != 0.0) config.tol = tol;

    if (*describe_cmd) return describe(config, std::cout, std::cerr);
    return run(config, std::cerr).exit_code;
}
