#include "oscint/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"oscillatory-integral decay estimates for dispersive equations"};
    app.require_subcommand(1);

    std::string config, out = ".";
    int workers = 1;
    std::uint64_t seed = 0;

    const char* names[] = {"integrate", "bound", "verify", "decay",
                           "propagate", "localize", "kg-demo"};
    std::vector<CLI::App*> subs;
    for (const char* n : names) {
        CLI::App* sub = app.add_subcommand(n);
        sub->add_option("--config", config, "JSON config path")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--workers", workers, "worker threads for sweeps");
        sub->add_option("--seed", seed, "seed for randomized grids");
        subs.push_back(sub);
    }
    CLI11_PARSE(app, argc, argv);
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) return oscint::cli::run_command(names[i], config, out, workers, seed);
    return oscint::cli::kConfigError;
}
