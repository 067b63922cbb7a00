#include "avgdyn/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Averaging dynamics with private signals on time-varying graphs"};
    app.require_subcommand(1);

    avgdyn::CliOptions opts;
    std::uint64_t seed = 0;
    std::string out_dir;
    long stride = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "experiment config file")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out-dir", out_dir, "override the output directory");
        sub->add_option("--workers", opts.workers, "worker threads for sweeps");
        sub->add_option("--stride", stride, "trajectory recording stride");
        return sub;
    };

    CLI::App* simulate = add_common(app.add_subcommand(
        "simulate", "run a model and emit trajectory CSV + outcome JSON"));
    CLI::App* steady = add_common(app.add_subcommand(
        "steady-state", "closed-form absorption report for a stationary system"));
    CLI::App* sweep = add_common(app.add_subcommand(
        "sweep", "parameter sweep (curtain grid or transitivity table)"));
    CLI::App* walk = add_common(app.add_subcommand(
        "walk", "Monte Carlo random-walk oracle vs analytic absorption"));
    CLI::App* topology = add_common(app.add_subcommand(
        "topology", "infinite-graph topology report + theorem-2 residuals"));

    CLI11_PARSE(app, argc, argv);

    auto finalize = [&](CLI::App* sub) {
        if (sub->count("--seed")) opts.seed = seed;
        if (sub->count("--out-dir")) opts.out_dir = out_dir;
        if (sub->count("--stride")) opts.stride = stride;
    };

    if (simulate->parsed()) {
        finalize(simulate);
        return avgdyn::cmd_simulate(opts);
    }
    if (steady->parsed()) {
        finalize(steady);
        return avgdyn::cmd_steady_state(opts);
    }
    if (sweep->parsed()) {
        finalize(sweep);
        return avgdyn::cmd_sweep(opts);
    }
    if (walk->parsed()) {
        finalize(walk);
        return avgdyn::cmd_walk(opts);
    }
    if (topology->parsed()) {
        finalize(topology);
        return avgdyn::cmd_topology(opts);
    }
    return avgdyn::kExitConfig;
}
