#include "stragglesim/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "stragglesim/checks.hpp"
#include "stragglesim/config.hpp"
#include "stragglesim/csv.hpp"
#include "stragglesim/experiments.hpp"
#include "stragglesim/svg_plot.hpp"

namespace stragglesim {

namespace {

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

}  // namespace

int cmd_sweep(const std::string& config_path, const std::string& out_path, std::ostream& err) {
    std::string text;
    if (!read_file(config_path, text)) {
        err << "cannot read config file '" << config_path << "'\n";
        return kExitUsage;
    }
    ExperimentConfig config;
    try {
        config = parse_experiment_config(text);
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    const std::string target = !out_path.empty() ? out_path : config.out;
    if (target.empty()) {
        err << "no output path: pass --out or set the config key 'out'\n";
        return kExitUsage;
    }
    try {
        const SweepResult result = run_sweep(config.sweep);
        if (!write_file(target, sweep_to_csv(result))) {
            err << "cannot write '" << target << "'\n";
            return kExitFailure;
        }
    } catch (const std::exception& e) {
        err << "sweep failed: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_plot(const std::string& csv_path, const std::string& out_path, bool overlay, double delta,
             std::ostream& err) {
    std::string text;
    if (!read_file(csv_path, text)) {
        err << "cannot read csv file '" << csv_path << "'\n";
        return kExitUsage;
    }
    std::string svg;
    try {
        const CsvTable table = parse_csv(text);
        PlotOptions options;
        options.overlay = overlay;
        options.delta = delta;
        svg = render_loglog_svg(table, options);
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    if (!write_file(out_path, svg)) {
        err << "cannot write '" << out_path << "'\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_longest_run(int n, double p, int trials, std::uint64_t seed, std::ostream& out,
                    std::ostream& err) {
    if (n < 1 || trials < 1 || !(p >= 0.0 && p < 1.0)) {
        err << "longest-run: need n >= 1, trials >= 1 and p in [0, 1)\n";
        return kExitUsage;
    }
    const double exact_mean = exact_run_mean(n, p);
    const double exact_var = exact_run_variance(n, p);

    rng::Stream stream(seed, {0x6c72756eull});
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto run = static_cast<double>(longest_run(sample_bernoulli_pattern(n, p, stream)));
        sum += run;
        sum_sq += run * run;
    }
    const double emp_mean = sum / trials;
    const double emp_var =
        trials > 1 ? std::max(0.0, (sum_sq - sum * emp_mean) / (trials - 1)) : 0.0;

    double mean_center = 0.0, mean_halfwidth = 0.0, var_center = 0.0, var_halfwidth = 0.0;
    if (p > 0.0) {
        const auto m = gordon_moments(n, p);
        mean_center = m.mean_center;
        mean_halfwidth = m.mean_halfwidth;
        var_center = m.var_center;
        var_halfwidth = m.var_halfwidth;
    }

    out << "statistic,exact,empirical,gordon_center,gordon_halfwidth\n";
    out << "mean," << format_double(exact_mean) << "," << format_double(emp_mean) << ","
        << format_double(mean_center) << "," << format_double(mean_halfwidth) << "\n";
    out << "variance," << format_double(exact_var) << "," << format_double(emp_var) << ","
        << format_double(var_center) << "," << format_double(var_halfwidth) << "\n";
    return kExitOk;
}

int cmd_validate(int threads, std::ostream& out) {
    return run_and_report_checks(out, resolve_threads(threads)) == 0 ? kExitOk : kExitFailure;
}

}  // namespace stragglesim
