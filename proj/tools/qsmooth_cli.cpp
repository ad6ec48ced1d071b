#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "qsmooth/experiment.hpp"
#include "qsmooth/qae.hpp"

namespace {

// Flag values stay as raw strings so the config-file parser is the single
// authority on syntax; only flags the user passed override the file.
struct PendingOptions {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> entries;
};

void add_common_options(CLI::App *cmd, PendingOptions &pending) {
    cmd->add_option("--config", pending.config_path, "Config file with key = value lines");
    auto bind = [cmd, &pending](const std::string &flag, const std::string &key,
                                const std::string &help) {
        cmd->add_option_function<std::string>(
            flag,
            [&pending, key](const std::string &value) {
                pending.entries.emplace_back(key, value);
            },
            help);
    };
    bind("--experiment", "experiment",
         "window_image, graph_clique, sentiment, or truth_table");
    bind("--p-plus", "p_plus", "Probability of flipping a 0 bit");
    bind("--p-minus", "p_minus", "Probability of flipping a 1 bit");
    bind("--counting-qubits", "counting_qubits", "Comma list of counting register sizes");
    bind("--delta", "delta", "Failure probability budget for bounds");
    bind("--mc-samples", "mc_samples", "Comma list of Monte Carlo sample counts");
    bind("--instances", "instance_count", "Number of instances to run");
    bind("--mc-trials", "mc_trials", "Independent trials per budget point");
    bind("--seed", "seed", "Root seed for all derived random streams");
    bind("--out", "output_dir", "Directory for CSV and SVG outputs");
    bind("--oracle-file", "oracle_file", "Classifier table file (truth_table experiment)");
    bind("--graph-file", "graph_file", "Edge-bit lines to use instead of sampled graphs");
    bind("--input", "input", "Code bit string for the instance to analyze");
    bind("--max-r-add", "max_r_add", "Largest addition radius to sweep");
    bind("--max-r-del", "max_r_del", "Largest deletion radius to sweep");
}

qsmooth::ExperimentConfig resolve_config(const PendingOptions &pending) {
    qsmooth::ExperimentConfig config;
    if (!pending.config_path.empty()) {
        config = qsmooth::parse_config_file(pending.config_path);
    }
    for (const auto &[key, value] : pending.entries) {
        qsmooth::apply_config_entry(config, key, value);
    }
    return config;
}

void print_files(const std::vector<std::string> &files) {
    for (const std::string &f : files) {
        std::printf("wrote %s\n", f.c_str());
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Certified robustness for classifiers over bit strings: exact, sampled, "
                 "and phase-estimation evaluation of the smoothed class probability"};
    app.require_subcommand(1);

    PendingOptions pending;
    CLI::App *heatmap =
        app.add_subcommand("heatmap", "Certified fraction per (r_add, r_del) cell");
    CLI::App *ratio =
        app.add_subcommand("certified-ratio", "Certified fraction against total radius");
    CLI::App *convergence =
        app.add_subcommand("convergence", "Estimation error against oracle-call budget");
    CLI::App *single = app.add_subcommand("single", "Full report for one instance");
    for (CLI::App *cmd : {heatmap, ratio, convergence, single}) {
        add_common_options(cmd, pending);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        // CLI11 maps help to success; every real parse problem is usage error 2.
        return code == 0 ? 0 : 2;
    }

    try {
        qsmooth::ExperimentConfig config = resolve_config(pending);
        if (heatmap->parsed()) {
            qsmooth::HeatmapSummary summary = qsmooth::run_heatmap(config);
            print_files(summary.files);
        } else if (ratio->parsed()) {
            qsmooth::RatioSummary summary = qsmooth::run_certified_ratio(config);
            print_files(summary.files);
        } else if (convergence->parsed()) {
            qsmooth::ConvergenceSummary summary = qsmooth::run_convergence(config);
            std::printf("monte_carlo slope %.4f\n", summary.mc_slope);
            std::printf("qae slope %.4f\n", summary.qae_slope);
            std::printf("classical-to-quantum exponent %.4f\n", summary.exponent);
            print_files(summary.files);
        } else if (single->parsed()) {
            std::fputs(qsmooth::run_single(config).c_str(), stdout);
        }
    } catch (const qsmooth::SimBudgetError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
