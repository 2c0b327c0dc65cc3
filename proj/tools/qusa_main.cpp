#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qusa/commands.hpp"
#include "qusa/common.hpp"

namespace {

struct CliOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_common_options(CLI::App& cmd, CliOptions& opts) {
    cmd.add_option("--config", opts.config, "run configuration file (sections of key = value, "
                                            "or a manifest JSON)")
        ->required();
    cmd.add_option("--seed", opts.seed, "override the configured base seed");
    cmd.add_option("--out", opts.out, "override the configured output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"triode network solver and relaxation simulator"};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* solve = app.add_subcommand("solve", "enumerate satisfying label assignments");
    CLI::App* simulate =
        app.add_subcommand("simulate", "run an annealer, trajectory, or ensemble");
    CLI::App* sweep = app.add_subcommand("sweep", "run a projection-interval sweep");
    for (CLI::App* cmd : {solve, simulate, sweep}) add_common_options(*cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        qusa::RunConfig cfg = qusa::load_config(opts.config);
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.out) cfg.out_dir = *opts.out;
        return qusa::run_command(command, cfg, std::cout);
    } catch (const qusa::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qusa::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
