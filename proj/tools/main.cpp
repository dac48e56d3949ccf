#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stragglesim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"stragglesim: coded-computing straggler simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep and write a CSV report");
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--out", out_path, "output CSV path (falls back to the config's 'out')");

    std::string csv_path, svg_path;
    bool overlay = false;
    double delta = 0.05;
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as a log-log SVG chart");
    plot->add_option("--csv", csv_path, "sweep CSV produced by `sweep`")->required();
    plot->add_option("--out", svg_path, "output SVG path")->required();
    plot->add_flag("--overlay", overlay, "add dashed reference-bound shapes");
    plot->add_option("--delta", delta, "tail parameter of the reference curves");

    int n = 0;
    double p = 0.0;
    int trials = 10000;
    std::uint64_t seed = 0;
    auto* longest = app.add_subcommand("longest-run",
                                       "exact vs empirical longest-straggler-run statistics");
    longest->add_option("--n", n, "number of servers")->required();
    longest->add_option("--p", p, "straggler probability")->required();
    longest->add_option("--trials", trials, "Monte Carlo sample count");
    longest->add_option("--seed", seed, "stream seed");

    int threads = 0;
    auto* validate = app.add_subcommand("validate", "run the full verification suite");
    validate->add_option("--threads", threads, "worker cap (0: automatic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return stragglesim::kExitUsage;
    }

    try {
        if (sweep->parsed()) return stragglesim::cmd_sweep(config_path, out_path, std::cerr);
        if (plot->parsed())
            return stragglesim::cmd_plot(csv_path, svg_path, overlay, delta, std::cerr);
        if (longest->parsed())
            return stragglesim::cmd_longest_run(n, p, trials, seed, std::cout, std::cerr);
        if (validate->parsed()) return stragglesim::cmd_validate(threads, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return stragglesim::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return stragglesim::kExitFailure;
    }
    return stragglesim::kExitUsage;
}
