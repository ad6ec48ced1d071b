#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/certify.hpp"
#include "qsmooth/oracle.hpp"
#include "qsmooth/qae.hpp"

namespace qsmooth {

enum class ExperimentKind { window_image, graph_clique, sentiment, truth_table };

ExperimentKind parse_experiment_kind(const std::string &name);
const char *experiment_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::window_image;
    // -1 selects the experiment default.
    double p_plus = -1.0;
    double p_minus = -1.0;
    std::vector<int> counting_qubits = {3, 4, 5, 6, 7, 8};
    double delta = 0.01;
    std::vector<uint64_t> mc_samples = {100, 1000, 10000, 100000, 1000000};
    // -1 selects the experiment default.
    int instance_count = -1;
    int mc_trials = 4;
    uint64_t seed = 1;
    std::string output_dir = ".";
    // Classifier table file for the truth_table experiment.
    std::string oracle_file;
    // Optional pre-built graph list (one line of edge bits per graph).
    std::string graph_file;
    // Inline input for the single run; also fixes the instance when set.
    std::string input_bits;
    // -1 selects the experiment default extent.
    int max_r_add = -1;
    int max_r_del = -1;
};

// Flat `key = value` lines, UTF-8, # comments; unknown keys are errors.
ExperimentConfig parse_config_file(const std::string &path);
void apply_config_entry(ExperimentConfig &config, const std::string &key,
                        const std::string &value);

struct ExperimentInstance {
    int id = 0;
    BitString x;
    TruthTable oracle;
};

struct InstanceSet {
    FlipProbabilities probs;
    int code_bits = 0;
    int max_r_add = 0;
    int max_r_del = 0;
    std::vector<ExperimentInstance> instances;
    // Provenance note carried into CSV comments and SVG descriptions.
    std::string description;
};

// Resolves defaults, validates the config, and materializes the seeded
// instance list; throws std::invalid_argument with actionable messages.
InstanceSet build_instances(const ExperimentConfig &config);

struct ResultRow {
    int instance_id = 0;
    EvalMethod method = EvalMethod::exact;
    uint64_t budget = 0;
    double g_exact = 0.0;
    double g_point = 0.0;
    double g_lower = 0.0;
    uint64_t oracle_calls = 0;
    int certified_max_radius = -1;
};

struct HeatmapSeries {
    EvalMethod method = EvalMethod::exact;
    // Counting qubits for qae series, 0 otherwise.
    int budget = 0;
    // Row-major over (r_add, r_del): fraction of instances certified.
    std::vector<double> fractions;
};

struct HeatmapSummary {
    int max_r_add = 0;
    int max_r_del = 0;
    std::vector<ResultRow> rows;
    std::vector<HeatmapSeries> series;
    std::vector<std::string> files;
};

struct RatioSeries {
    EvalMethod method = EvalMethod::exact;
    int budget = 0;
    // Indexed by total radius 0 .. radii.
    std::vector<double> fractions;
};

struct RatioSummary {
    int max_radius = 0;
    bool one_sided = false;
    std::vector<ResultRow> rows;
    std::vector<RatioSeries> series;
    std::vector<std::string> files;
};

struct ConvergencePoint {
    EvalMethod method = EvalMethod::exact;
    uint64_t budget = 0;
    double mean_abs_error = 0.0;
};

struct ConvergenceSummary {
    std::vector<ResultRow> rows;
    std::vector<ConvergencePoint> points;
    double mc_slope = 0.0;
    double qae_slope = 0.0;
    // Classical-to-quantum sample exponent: qae_slope / mc_slope.
    double exponent = 0.0;
    std::vector<std::string> files;
};

// Certified fraction per (r_add, r_del) cell, one series per method; writes
// results.csv, heatmap_cells.csv, and one SVG per series.
HeatmapSummary run_heatmap(const ExperimentConfig &config);

// Certified fraction against total radius; one-sided noise sweeps the single
// active radius, two-sided noise requires every split of the total. Writes
// results.csv, ratio_curve.csv, certified_ratio.svg.
RatioSummary run_certified_ratio(const ExperimentConfig &config);

// Mean |estimate - g_exact| against oracle-call budget with fitted log-log
// slopes; writes results.csv, convergence.csv, convergence.svg.
ConvergenceSummary run_convergence(const ExperimentConfig &config);

// Human-readable report for one instance; deterministic for a fixed config.
std::string run_single(const ExperimentConfig &config);

// Least-squares slope of log10(y) against log10(x); nonpositive values are
// skipped.
double fit_loglog_slope(const std::vector<double> &xs, const std::vector<double> &ys);

} // namespace qsmooth
