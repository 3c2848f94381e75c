#include "CLI11.hpp"

#include "cmc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"conditional Markov chain toolkit: consistency checks, copula "
                 "construction, simulation and premium evaluation"};
    app.require_subcommand(1);

    cmc::RunConfig config;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config.config_path, "model/pool config (JSON)")
                ->required()
                ->check(CLI::ExistingFile);
        sub->add_option("--out", config.out_dir, "output directory");
        sub->add_option("--tol", config.tol, "tolerance override");
        sub->add_option("--seed", config.seed, "random seed");
        sub->add_option("--paths", config.paths, "number of sample paths");
    };

    add_common(app.add_subcommand("validate", "validate a generator config"), true);
    add_common(app.add_subcommand("solve", "solve the conditional equations, export CSV"),
               true);
    add_common(app.add_subcommand("check", "consistency checks per component"), true);
    add_common(app.add_subcommand("build", "build a copula candidate and its verdicts"),
               true);
    CLI::App* sim =
        app.add_subcommand("simulate", "simulate sample paths along the scenario");
    add_common(sim, true);
    sim->add_flag("--export-paths", config.export_paths, "write paths.csv");
    add_common(app.add_subcommand("price", "pool-aware premium quote"), true);
    add_common(app.add_subcommand("reproduce", "run the named regression fixtures"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 returns 0 for --help; anything else is a usage error
        return code == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    return cmc::run(config);
}
